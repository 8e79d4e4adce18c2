#pragma once

#include "reldom/word.hpp"

namespace reldom {

/// Maximal run of letters (or path increments) lying in one peripheral
/// subgroup. Indices are 0-based and inclusive.
struct Excursion {
  int first = 0;
  int last = 0;
  int peripheral_id = 0;

  bool operator==(const Excursion&) const = default;
};

/// A reduced word together with its peripheral excursions.
struct RelativePath {
  Word word;
  std::vector<Excursion> excursions;
};

/// Splits a reduced word into maximal peripheral runs.
RelativePath decompose_relative(const GeneratorSet& gens, const Word& w);

/// A path defined on consecutive integers, with group-element values.
/// Finite windows stand in for bi-infinite paths.
struct PathWindow {
  int first_index = 0;
  std::vector<Word> points;

  int last_index() const { return first_index + static_cast<int>(points.size()) - 1; }
  const Word& at(int n) const { return points.at(static_cast<std::size_t>(n - first_index)); }
  bool contains(int n) const { return n >= first_index && n <= last_index(); }
};

/// The path n -> prefix of w of length n, on [0, |w|].
PathWindow prefix_path(const Word& w);

/// Increment n -> gamma(n)^{-1} gamma(n+1), reduced.
Word path_increment(const PathWindow& path, int n);

/// Excursions of a parametrized path: maximal runs of consecutive increments
/// lying in a common peripheral subgroup. Indices are increment indices
/// relative to first_index.
std::vector<Excursion> path_excursions(const GeneratorSet& gens, const PathWindow& path);

/// Depth of the path point at absolute index n: the distance (in the index
/// parameter) to the nearest well-defined point outside every peripheral
/// coset containing gamma(n), or the distance to the window edge when the
/// whole reachable window stays inside.
int path_depth(const GeneratorSet& gens, const PathWindow& path, int n);

/// Depth along the prefix path of p's word; n indexes points 0..|word|.
int depth(const RelativePath& p, int n);

}  // namespace reldom
