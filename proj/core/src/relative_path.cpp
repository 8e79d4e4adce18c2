#include "reldom/relative_path.hpp"

#include <algorithm>

namespace reldom {

RelativePath decompose_relative(const GeneratorSet& gens, const Word& w) {
  RelativePath out;
  out.word = w;
  int run_start = -1;
  int run_id = -1;
  for (int i = 0; i <= static_cast<int>(w.size()); ++i) {
    std::optional<int> id;
    if (i < static_cast<int>(w.size())) id = gens.peripheral_of(w.letter(i));
    if (run_id >= 0 && (!id || *id != run_id)) {
      out.excursions.push_back({run_start, i - 1, run_id});
      run_id = -1;
    }
    if (id && run_id < 0) {
      run_start = i;
      run_id = *id;
    }
  }
  return out;
}

PathWindow prefix_path(const Word& w) {
  PathWindow p;
  p.first_index = 0;
  p.points.reserve(w.size() + 1);
  for (std::size_t n = 0; n <= w.size(); ++n) p.points.push_back(w.prefix(n));
  return p;
}

Word path_increment(const PathWindow& path, int n) {
  return concat(path.at(n).inverse(), path.at(n + 1));
}

namespace {

/// Peripheral id of a nonempty word whose letters all share one tag.
std::optional<int> increment_peripheral(const GeneratorSet& gens, const Word& inc) {
  if (inc.empty()) return std::nullopt;
  auto id = gens.peripheral_of(inc.letter(0));
  if (!id) return std::nullopt;
  for (std::size_t i = 1; i < inc.size(); ++i)
    if (gens.peripheral_of(inc.letter(i)) != id) return std::nullopt;
  return id;
}

int depth_from_excursions(const std::vector<Excursion>& excursions, int q, int n_points) {
  // Point ranges: an excursion over increments [a, b] spans points [a, b+1].
  int lo = q, hi = q;
  bool inside = false;
  for (const Excursion& e : excursions) {
    if (e.first <= q && q <= e.last + 1) {
      inside = true;
      lo = std::min(lo, e.first);
      hi = std::max(hi, e.last + 1);
    }
  }
  if (!inside) return 0;
  for (int d = 0; d < n_points; ++d) {
    const int left = q - d, right = q + d;
    if (left >= 0 && left < lo) return d;
    if (right <= n_points - 1 && right > hi) return d;
  }
  return std::min(n_points - 1 - q, q);
}

}  // namespace

std::vector<Excursion> path_excursions(const GeneratorSet& gens, const PathWindow& path) {
  // Increment classification per peripheral subgroup: a trivial increment
  // keeps the path inside every coset it is currently in, so it extends a
  // run without starting one.
  const int m = static_cast<int>(path.points.size()) - 1;  // increment count
  std::vector<std::optional<int>> strict(m);
  std::vector<bool> trivial(m, false);
  for (int i = 0; i < m; ++i) {
    const Word inc = path_increment(path, path.first_index + i);
    if (inc.empty())
      trivial[i] = true;
    else
      strict[i] = increment_peripheral(gens, inc);
  }

  std::vector<Excursion> out;
  for (int p = 0; p < gens.peripheral_count(); ++p) {
    int run_start = -1;
    bool has_strict = false;
    for (int i = 0; i <= m; ++i) {
      const bool compatible = i < m && (trivial[i] || strict[i] == p);
      if (compatible) {
        if (run_start < 0) run_start = i;
        has_strict = has_strict || (strict[i] == p);
      } else if (run_start >= 0) {
        if (has_strict) out.push_back({run_start, i - 1, p});
        run_start = -1;
        has_strict = false;
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Excursion& a, const Excursion& b) { return a.first < b.first; });
  return out;
}

int path_depth(const GeneratorSet& gens, const PathWindow& path, int n) {
  if (!path.contains(n)) throw std::out_of_range("path index outside window");
  const auto excursions = path_excursions(gens, path);
  return depth_from_excursions(excursions, n - path.first_index,
                               static_cast<int>(path.points.size()));
}

int depth(const RelativePath& p, int n) {
  const int n_points = static_cast<int>(p.word.size()) + 1;
  if (n < 0 || n >= n_points) throw std::out_of_range("path index outside domain");
  return depth_from_excursions(p.excursions, n, n_points);
}

}  // namespace reldom
