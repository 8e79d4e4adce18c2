#include "reldom/representation.hpp"

namespace reldom {

Representation::Representation(GeneratorSet gens, int dimension)
    : gens_(std::move(gens)), dimension_(dimension) {
  if (dimension_ < 2) throw std::invalid_argument("representation dimension must be >= 2");
  by_letter_.assign(gens_.letter_count(), Matrix::Identity(dimension_, dimension_));
  assigned_.assign(gens_.letter_count(), false);
}

void Representation::set_generator(Letter positive_letter, const Matrix& m) {
  if (!gens_.valid_letter(positive_letter) || is_inverse_letter(positive_letter))
    throw std::invalid_argument("set_generator expects a positive letter");
  if (m.rows() != dimension_ || m.cols() != dimension_)
    throw std::invalid_argument("matrix dimension mismatch");
  by_letter_[positive_letter] = m;
  by_letter_[inverse_letter(positive_letter)] = m.inverse();
  assigned_[positive_letter] = assigned_[inverse_letter(positive_letter)] = true;
}

const Matrix& Representation::letter_matrix(Letter l) const {
  if (!gens_.valid_letter(l)) throw std::invalid_argument("unknown letter");
  return by_letter_[l];
}

NormalizedMatrix Representation::evaluate(const Word& w) const {
  NormalizedMatrix acc{Matrix::Identity(dimension_, dimension_), 0.0};
  for (Letter l : w.letters()) acc = nproduct(acc, letter_matrix(l));
  return acc;
}

}  // namespace reldom
