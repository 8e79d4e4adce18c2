#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace reldom {

struct GapSample {
  double length = 0;   // the length coordinate the condition is fitted against
  double log_gap = 0;  // log of the relevant singular/eigenvalue ratio
  std::string word;
};

/// Fitted exponential bound for one domination condition. The fit is the
/// extreme slope of a line through the origin that is valid at every sample
/// point (an exact LP, equivalently a tangent of the convex hull), so the
/// reported pair never violates its own sample and refining the sample can
/// only tighten the slope.
struct GapFit {
  std::string condition;  // "D-", "D+", "Dlambda-", "Dlambda+"
  bool lower_bound = true;
  std::vector<GapSample> points;
  double mu = 0;
  double log_c = 0;
  std::string verdict;  // certified-on-sample | refuted-on-sample | inconclusive
  std::vector<std::string> violations;  // words violating the fitted pair (empty by soundness)
  std::vector<std::string> witnesses;   // words pinning a refuted slope
  std::int64_t excluded = 0;            // points dropped (e.g. unconfirmed lengths)

  /// Points whose length coordinate is treated as exactly zero only
  /// constrain log_c.
  static constexpr double kZeroLength = 1e-12;
};

/// Computes (mu, log_c) and the verdict for the collected points.
/// Lower bounds: mu = min log_gap/length, certified iff mu > 0.
/// Upper bounds: mu = max log_gap/length, certified iff mu <= mu_cap.
void fit_points(GapFit& fit, double mu_cap = -1);

/// Union of point clouds followed by a refit; associative and commutative.
GapFit merge_fits(const GapFit& a, const GapFit& b, double mu_cap = -1);

}  // namespace reldom
