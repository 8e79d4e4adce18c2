#pragma once

#include "reldom/relative_path.hpp"

#include <string>

namespace reldom {

/// Summable edge-rescaling weight with controlled decay: f is positive,
/// sum f(n) < infinity, and 1/m <= f(k+1)/f(k) <= 1 for some m.
class FloydFunction {
public:
  static FloydFunction geometric(double lambda);  // f(n) = lambda^n
  static FloydFunction inverse_square();          // f(n) = 1/n^2, f(0) := f(1)

  double value(long n) const;
  /// Closed-form sum_{k >= from} f(k); `from` is clamped to 0.
  double tail_sum(long from) const;
  /// The m in the ratio condition.
  double ratio_bound() const;

  const std::string& name() const { return name_; }
  double parameter() const { return parameter_; }

private:
  std::string name_;
  double parameter_ = 0;
};

/// Decreasing "distance to infinity" gauge: 10 * sum_{k >= floor(x/2)} f(k).
double distance_to_infinity_gauge(double x, const FloydFunction& f);

struct FloydDistance {
  double value = 0;
  bool stable = false;  // unchanged when the ball radius grows by one
};

/// Shortest-path distance between g and h inside the Cayley ball of the given
/// radius, edges weighted by f(max endpoint word length). Also computed at
/// radius + 1 to report stability.
FloydDistance floyd_distance(const GeneratorSet& gens, const Word& g, const Word& h,
                             int ball_radius, const FloydFunction& f);

struct KarlssonViolation {
  Word g, h;
  double distance = 0;
  double bound = 0;
};

/// Checks d_f(g, h) <= gauge(<g,h>_e) over the given pairs, with the word
/// metric Gromov product. Unstable distances are reported as violations with
/// bound = -1 so they are never silently accepted.
std::vector<KarlssonViolation> check_karlsson_bounds(
    const GeneratorSet& gens, const std::vector<std::pair<Word, Word>>& pairs,
    const FloydFunction& f, int ball_radius);

struct PropertyUReport {
  bool success = false;
  Word word;
  Word chosen_f;
  double bound_l = 0;
  double margin = 0;  // |fw|_inf - (|fw| - L), for the chosen f
  bool excursion_preserved = false;
};

/// Searches candidate_f for an f with |f w|_inf >= |f w| - L such that
/// squaring f w causes no cancellation into any peripheral excursion.
PropertyUReport property_u_search(const GeneratorSet& gens, const Word& w,
                                  const std::vector<Word>& candidate_f, double bound_l);

}  // namespace reldom
