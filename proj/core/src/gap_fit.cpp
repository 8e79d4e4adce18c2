#include "reldom/gap_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace reldom {

void fit_points(GapFit& fit, double mu_cap) {
  if (fit.points.empty()) throw std::invalid_argument("gap fit needs at least one point");
  fit.violations.clear();
  fit.witnesses.clear();

  double slope = fit.lower_bound ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
  const GapSample* extreme = nullptr;
  bool any_positive_length = false;
  for (const GapSample& p : fit.points) {
    if (p.length <= GapFit::kZeroLength) continue;
    any_positive_length = true;
    const double r = p.log_gap / p.length;
    if (fit.lower_bound ? (r < slope) : (r > slope)) {
      slope = r;
      extreme = &p;
    }
  }
  if (!any_positive_length) slope = 0;
  fit.mu = std::max(slope, 0.0);

  // Zero-length points only constrain the constant.
  double intercept = 0;
  for (const GapSample& p : fit.points) {
    const double resid = p.log_gap - fit.mu * p.length;
    intercept = fit.lower_bound ? std::min(intercept, resid) : std::max(intercept, resid);
  }
  fit.log_c = intercept;

  const double tol = 1e-12;
  for (const GapSample& p : fit.points) {
    const double bound = fit.log_c + fit.mu * p.length;
    const bool bad = fit.lower_bound ? (p.log_gap < bound - tol) : (p.log_gap > bound + tol);
    if (bad) fit.violations.push_back(p.word);
  }

  if (!fit.violations.empty()) {
    fit.verdict = "refuted-on-sample";
    fit.witnesses = fit.violations;
    return;
  }
  if (fit.lower_bound) {
    if (fit.mu > tol) {
      fit.verdict = "certified-on-sample";
    } else {
      fit.verdict = "refuted-on-sample";
      if (extreme) fit.witnesses.push_back(extreme->word);
    }
    return;
  }
  if (mu_cap >= 0 && fit.mu > mu_cap) {
    fit.verdict = "refuted-on-sample";
    if (extreme) fit.witnesses.push_back(extreme->word);
    return;
  }
  fit.verdict = "certified-on-sample";
}

GapFit merge_fits(const GapFit& a, const GapFit& b, double mu_cap) {
  if (a.condition != b.condition || a.lower_bound != b.lower_bound)
    throw std::invalid_argument("cannot merge fits of different conditions");
  GapFit out;
  out.condition = a.condition;
  out.lower_bound = a.lower_bound;
  out.points = a.points;
  out.points.insert(out.points.end(), b.points.begin(), b.points.end());
  std::sort(out.points.begin(), out.points.end(), [](const GapSample& x, const GapSample& y) {
    return std::tie(x.length, x.log_gap, x.word) < std::tie(y.length, y.log_gap, y.word);
  });
  out.points.erase(std::unique(out.points.begin(), out.points.end(),
                               [](const GapSample& x, const GapSample& y) {
                                 return x.length == y.length && x.log_gap == y.log_gap &&
                                        x.word == y.word;
                               }),
                   out.points.end());
  out.excluded = a.excluded + b.excluded;
  fit_points(out, mu_cap);
  return out;
}

}  // namespace reldom
