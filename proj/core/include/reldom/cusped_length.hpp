#pragma once

#include "reldom/relative_path.hpp"

#include <optional>

namespace reldom {

/// Certified two-sided estimate of the cusped word length |w|_c, from the
/// biLipschitz comparison with the excursion-damped Cayley length.
struct CuspedLengthBracket {
  double modified_length = 0;  // ell(w) - sum ell(eta_i) + sum damped(eta_i)
  double lo = 0;               // modified_length / 3
  double hi = 0;               // 4 * modified_length
  std::optional<long> exact;   // set when an exact BFS oracle ran

  double tightest_lo() const { return exact ? static_cast<double>(*exact) : lo; }
  double tightest_hi() const { return exact ? static_cast<double>(*exact) : hi; }
};

/// max(log ell, 1), natural log; the damped length of one excursion.
double damped_excursion_length(long ell);

CuspedLengthBracket cusped_length_estimate(const GeneratorSet& gens, const Word& w);

using CuspedLengthFn = std::function<CuspedLengthBracket(const Word&)>;

/// Slack constants for metric quasigeodesic paths: `lower` controls the
/// lower distance clause, `upper` the upper one.
struct QgParams {
  double lower = 1;
  double upper = 1;
};

struct QgViolation {
  int clause = 0;  // 1, 2 or 3
  int m = 0;
  int n = 0;
};

struct QgResult {
  bool ok = true;
  std::optional<QgViolation> violation;
};

/// Checks the three metric-quasigeodesic clauses on a finite window.
/// Cusped lengths come from `length` (defaults to the bracket estimator);
/// a distance clause counts as violated only when it fails for every value
/// in the bracket.
QgResult is_metric_quasigeodesic(const GeneratorSet& gens, const PathWindow& path,
                                 const QgParams& params, const CuspedLengthFn& length = {});

/// Closed interval; used for quantities derived from brackets.
struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Gromov product in the word metric of a free group (exact).
double gromov_product_word(const Word& x, const Word& y, const Word& base);

/// Gromov product in the cusped metric, via length brackets.
Interval gromov_product_cusped(const Word& x, const Word& y, const Word& base,
                               const CuspedLengthFn& length);

}  // namespace reldom
