#include "reldom/floyd.hpp"

#include "reldom/cusped_length.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace reldom {

FloydFunction FloydFunction::geometric(double lambda) {
  if (!(lambda > 0 && lambda < 1))
    throw std::invalid_argument("geometric Floyd function needs lambda in (0,1)");
  FloydFunction f;
  f.name_ = "geometric";
  f.parameter_ = lambda;
  return f;
}

FloydFunction FloydFunction::inverse_square() {
  FloydFunction f;
  f.name_ = "inverse_square";
  f.parameter_ = 0;
  return f;
}

double FloydFunction::value(long n) const {
  if (n < 0) throw std::invalid_argument("Floyd function argument must be nonnegative");
  if (name_ == "geometric") return std::pow(parameter_, static_cast<double>(n));
  const long m = std::max<long>(n, 1);
  return 1.0 / (static_cast<double>(m) * static_cast<double>(m));
}

double FloydFunction::tail_sum(long from) const {
  const long x = std::max<long>(from, 0);
  if (name_ == "geometric")
    return std::pow(parameter_, static_cast<double>(x)) / (1.0 - parameter_);
  // Inverse square: explicit partial block, then the Euler-Maclaurin tail of
  // sum_{k >= y} 1/k^2 = 1/y + 1/(2 y^2) + 1/(6 y^3) - 1/(30 y^5) + ...
  double sum = (x == 0) ? 1.0 : 0.0;  // f(0) := f(1)
  long y = std::max<long>(x, 1);
  const long block_end = y + 64;
  for (; y < block_end; ++y) sum += 1.0 / (static_cast<double>(y) * static_cast<double>(y));
  const double z = static_cast<double>(y);
  sum += 1.0 / z + 1.0 / (2 * z * z) + 1.0 / (6 * z * z * z) - 1.0 / (30 * std::pow(z, 5));
  return sum;
}

double FloydFunction::ratio_bound() const {
  if (name_ == "geometric") return 1.0 / parameter_;
  return 4.0;  // (k/(k+1))^2 >= 1/4 for k >= 1
}

double distance_to_infinity_gauge(double x, const FloydFunction& f) {
  if (!(x >= 0)) throw std::invalid_argument("gauge argument must be nonnegative");
  return 10.0 * f.tail_sum(static_cast<long>(std::floor(x / 2.0)));
}

namespace {

/// Dijkstra over the implicit Cayley ball; stops once `target` is settled.
double ball_shortest_path(const GeneratorSet& gens, const Word& g, const Word& h, int radius,
                          const FloydFunction& f) {
  if (static_cast<int>(g.size()) > radius || static_cast<int>(h.size()) > radius)
    throw std::invalid_argument("floyd_distance: endpoint outside the ball");
  if (g == h) return 0;

  auto key = [](const Word& w) {
    return std::string(reinterpret_cast<const char*>(w.letters().data()), w.size());
  };
  std::unordered_map<std::string, double> best;
  using Item = std::pair<double, Word>;
  auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  heap.push({0.0, g});
  best[key(g)] = 0.0;
  const std::string target = key(h);

  while (!heap.empty()) {
    auto [dist, w] = heap.top();
    heap.pop();
    const std::string k = key(w);
    if (dist > best[k]) continue;
    if (k == target) return dist;
    const long len_w = static_cast<long>(w.size());
    for (Letter l = 0; l < gens.letter_count(); ++l) {
      Word next = concat(w, Word::from_reduced({l}));
      if (static_cast<int>(next.size()) > radius) continue;
      const double weight = f.value(std::max(len_w, static_cast<long>(next.size())));
      const double cand = dist + weight;
      auto [it, inserted] = best.try_emplace(key(next), cand);
      if (!inserted && it->second <= cand) continue;
      it->second = cand;
      heap.push({cand, std::move(next)});
    }
  }
  throw std::logic_error("floyd_distance: target unreachable inside the ball");
}

}  // namespace

FloydDistance floyd_distance(const GeneratorSet& gens, const Word& g, const Word& h,
                             int ball_radius, const FloydFunction& f) {
  const double at_r = ball_shortest_path(gens, g, h, ball_radius, f);
  const double at_r1 = ball_shortest_path(gens, g, h, ball_radius + 1, f);
  return {at_r1, std::abs(at_r - at_r1) <= 1e-12 * std::max(1.0, at_r)};
}

std::vector<KarlssonViolation> check_karlsson_bounds(
    const GeneratorSet& gens, const std::vector<std::pair<Word, Word>>& pairs,
    const FloydFunction& f, int ball_radius) {
  std::vector<KarlssonViolation> out;
  for (const auto& [g, h] : pairs) {
    const FloydDistance d = floyd_distance(gens, g, h, ball_radius, f);
    if (!d.stable) {
      out.push_back({g, h, d.value, -1.0});
      continue;
    }
    const double bound = distance_to_infinity_gauge(gromov_product_word(g, h, Word{}), f);
    if (d.value > bound * (1 + 1e-12)) out.push_back({g, h, d.value, bound});
  }
  return out;
}

namespace {

bool cancellation_avoids_excursions(const GeneratorSet& gens, const Word& fw) {
  const Word square = concat(fw, fw);
  const long c = (2 * static_cast<long>(fw.size()) - static_cast<long>(square.size())) / 2;
  if (c == 0) return true;
  const long n = static_cast<long>(fw.size());
  for (const Excursion& e : decompose_relative(gens, fw).excursions) {
    if (e.first <= c - 1) return false;       // prefix cancellation reaches it
    if (e.last >= n - c) return false;        // suffix cancellation reaches it
  }
  return true;
}

}  // namespace

PropertyUReport property_u_search(const GeneratorSet& gens, const Word& w,
                                  const std::vector<Word>& candidate_f, double bound_l) {
  PropertyUReport report;
  report.word = w;
  report.bound_l = bound_l;
  for (const Word& f : candidate_f) {
    const Word fw = concat(f, w);
    const double stable = stable_word_length(fw, 1).lo;
    const double margin = stable - (static_cast<double>(fw.size()) - bound_l);
    if (margin < 0) continue;
    if (!cancellation_avoids_excursions(gens, fw)) continue;
    report.success = true;
    report.chosen_f = f;
    report.margin = margin;
    report.excursion_preserved = true;
    return report;
  }
  return report;
}

}  // namespace reldom
