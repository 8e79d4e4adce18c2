#pragma once

#include "reldom/linalg.hpp"
#include "reldom/word.hpp"

namespace reldom {

/// Generator-to-matrix assignment, extended multiplicatively to reduced words.
/// Inverse letters act by the matrix inverses, computed once.
class Representation {
public:
  Representation(GeneratorSet gens, int dimension);

  void set_generator(Letter positive_letter, const Matrix& m);

  const GeneratorSet& generators() const { return gens_; }
  int dimension() const { return dimension_; }
  const Matrix& letter_matrix(Letter l) const;

  /// Product of letter matrices in word order, renormalized along the way.
  NormalizedMatrix evaluate(const Word& w) const;

private:
  GeneratorSet gens_;
  int dimension_;
  std::vector<Matrix> by_letter_;
  std::vector<bool> assigned_;
};

}  // namespace reldom
