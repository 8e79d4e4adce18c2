#include "reldom/domination.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace reldom {

namespace {

double stable_bracket_hi(const GeneratorSet& gens, const Word& cyc, int n_max) {
  // min over probed powers of the certified upper estimate, valid by
  // subadditivity.
  double best = std::numeric_limits<double>::infinity();
  for (long n = 1; n <= n_max; n *= 2) {
    const Word p = power(cyc, n);
    best = std::min(best, cusped_length_estimate(gens, p).hi / static_cast<double>(n));
  }
  return best;
}

double stable_bracket_lo(const GeneratorSet& gens, const Word& cyc) {
  // lim Q(w^n)/n via a difference quotient; exact once the excursion
  // structure of powers is periodic, which holds for cyclically reduced
  // words that are not peripheral powers.
  const int m = 4;
  const double q1 = cusped_length_estimate(gens, power(cyc, m)).modified_length;
  const double q2 = cusped_length_estimate(gens, power(cyc, 2 * m)).modified_length;
  return std::max(0.0, (q2 - q1) / static_cast<double>(m)) / 3.0;
}

bool is_peripheral_power(const GeneratorSet& gens, const Word& w) {
  if (w.empty()) return false;
  const auto id = gens.peripheral_of(w.letter(0));
  if (!id) return false;
  for (Letter l : w.letters())
    if (gens.peripheral_of(l) != id) return false;
  return true;
}

double lambda_spread_rate(const Matrix& g, long long rate_power) {
  NormalizedMatrix acc = normalize_matrix(g);
  long long n = 1;
  while (2 * n <= rate_power) {
    acc = nproduct(acc, acc);
    n *= 2;
  }
  return log_gap_full(acc.unit) / static_cast<double>(n);
}

}  // namespace

GapFit fit_d_minus(const Representation& rep, const std::vector<Word>& words,
                   const FitOptions& opts) {
  GapFit fit;
  fit.condition = "D-";
  fit.lower_bound = true;
  const GeneratorSet& gens = rep.generators();
  CuspedLengthFn exact;
  if (opts.mode == LengthMode::Exact) exact = exact_cusped_length_fn(gens, opts.vertex_budget);
  for (const Word& w : words) {
    const CuspedLengthBracket b =
        exact ? exact(w) : cusped_length_estimate(gens, w);
    if (opts.mode == LengthMode::Exact && !b.exact) {
      ++fit.excluded;
      continue;
    }
    const double x = b.exact ? static_cast<double>(*b.exact) : b.hi;
    fit.points.push_back({x, log_gap_top(rep.evaluate(w).unit), format_word(gens, w)});
  }
  fit_points(fit);
  return fit;
}

GapFit fit_d_plus(const Representation& rep, const std::vector<Word>& words,
                  const FitOptions& opts) {
  GapFit fit;
  fit.condition = "D+";
  fit.lower_bound = false;
  const GeneratorSet& gens = rep.generators();
  CuspedLengthFn exact;
  if (opts.mode == LengthMode::Exact) exact = exact_cusped_length_fn(gens, opts.vertex_budget);
  for (const Word& w : words) {
    const CuspedLengthBracket b =
        exact ? exact(w) : cusped_length_estimate(gens, w);
    if (opts.mode == LengthMode::Exact && !b.exact) {
      ++fit.excluded;
      continue;
    }
    const double x = b.exact ? static_cast<double>(*b.exact) : b.lo;
    fit.points.push_back({x, log_gap_full(rep.evaluate(w).unit), format_word(gens, w)});
  }
  fit_points(fit, opts.mu_cap);
  return fit;
}

LambdaFits fit_d_lambda(const Representation& rep, const std::vector<Word>& words,
                        const LambdaFitOptions& opts) {
  LambdaFits out;
  out.lower.condition = "Dlambda-";
  out.lower.lower_bound = true;
  out.upper.condition = "Dlambda+";
  out.upper.lower_bound = false;
  const GeneratorSet& gens = rep.generators();
  for (const Word& w : words) {
    const Word cyc = cyclic_reduce(w);
    const std::string text = format_word(gens, w);
    const Matrix m = rep.evaluate(w).unit;
    if (cyc.empty()) continue;  // identity carries no information here
    if (is_peripheral_power(gens, cyc)) {
      // Conjugate into a peripheral subgroup: stable length is exactly zero.
      PeripheralSpectrum s;
      s.word = text;
      s.log_lambda_spread = lambda_spread_rate(m, opts.rate_power);
      s.unit_moduli = std::abs(s.log_lambda_spread) <= opts.unit_moduli_tol;
      out.peripheral_ok = out.peripheral_ok && s.unit_moduli;
      out.peripheral.push_back(std::move(s));
      out.lower.points.push_back({0.0, log_eigen_gap_top(m), text});
      out.upper.points.push_back({0.0, log_eigen_gap_full(m), text});
      continue;
    }
    out.lower.points.push_back({stable_bracket_hi(gens, cyc, opts.stable_n_max),
                                log_eigen_gap_top(m), text});
    out.upper.points.push_back({stable_bracket_lo(gens, cyc), log_eigen_gap_full(m), text});
  }
  if (!out.lower.points.empty()) fit_points(out.lower);
  if (!out.upper.points.empty()) fit_points(out.upper, opts.mu_cap);
  return out;
}

namespace {

struct PowerLimit {
  bool defined = false;
  ProjSubspace line;
  ProjSubspace hyperplane;
  std::vector<double> trace;
};

PowerLimit follow_powers(const Matrix& g, long n_max) {
  PowerLimit out;
  NormalizedMatrix acc = normalize_matrix(g);
  const int d = static_cast<int>(g.rows());
  std::optional<ProjSubspace> prev_line;
  for (long n = 1; n <= n_max; n *= 2) {
    try {
      ProjSubspace line = u_subspace(acc.unit, 1);
      ProjSubspace hyper = u_subspace(acc.unit, d - 1);
      if (prev_line) out.trace.push_back(proj_distance(*prev_line, line));
      prev_line = line;
      out.line = std::move(line);
      out.hyperplane = std::move(hyper);
      out.defined = true;
    } catch (const GapError&) {
      out.defined = false;
    }
    if (2 * n > n_max) break;
    acc = nproduct(acc, acc);
  }
  return out;
}

}  // namespace

UniqueLimitsReport check_unique_limits(const Representation& rep, int peripheral_id, long n_max,
                                       double tol) {
  UniqueLimitsReport out;
  const Letter s = rep.generators().peripheral_letter(peripheral_id);
  const Matrix m = rep.letter_matrix(s);
  const PowerLimit fwd = follow_powers(m, n_max);
  const PowerLimit bwd = follow_powers(m.inverse(), n_max);
  out.forward_trace = fwd.trace;
  out.backward_trace = bwd.trace;
  if (!fwd.defined || !bwd.defined || fwd.trace.empty() || bwd.trace.empty()) return out;
  if (fwd.trace.back() > tol || bwd.trace.back() > tol) return out;  // not yet Cauchy
  out.conclusive = true;
  out.line_mismatch = proj_distance(fwd.line, bwd.line);
  out.hyperplane_mismatch = proj_distance(fwd.hyperplane, bwd.hyperplane);
  const double match_tol = std::max(tol * 100, 1e-6);
  out.unique = out.line_mismatch <= match_tol && out.hyperplane_mismatch <= match_tol;
  if (out.unique) {
    out.line = fwd.line;
    out.hyperplane = fwd.hyperplane;
  }
  return out;
}

PathWindow transversality_window(const GeneratorSet& gens, const Word& g, const Word& h,
                                 int p_left, int p_right, int tail_depth) {
  const Word sl = Word::from_reduced({gens.peripheral_letter(p_left)});
  const Word sr = Word::from_reduced({gens.peripheral_letter(p_right)});
  PathWindow path;
  path.first_index = -tail_depth;
  const Word gh = concat(g, h);
  for (int k = tail_depth; k >= 1; --k) path.points.push_back(power(sl, -((1L << (k + 1)) - 2)));
  path.points.push_back(Word{});
  path.points.push_back(g);
  path.points.push_back(gh);
  for (int k = 1; k <= tail_depth; ++k)
    path.points.push_back(concat(gh, power(sr, (1L << (k + 1)) - 2)));
  return path;
}

TransversalityReport check_uniform_transversality(const Representation& rep,
                                                  const TransversalityOptions& opts) {
  const GeneratorSet& gens = rep.generators();
  if (gens.peripheral_count() == 0)
    throw std::invalid_argument("transversality sweep needs at least one peripheral subgroup");

  std::vector<UniqueLimitsReport> limits;
  for (int p = 0; p < gens.peripheral_count(); ++p) {
    limits.push_back(check_unique_limits(rep, p, opts.limit_n_max));
    if (!limits.back().conclusive || !limits.back().unique)
      throw std::runtime_error("peripheral limits are not unique; sweep undefined");
  }

  TransversalityReport out;
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> pick_p(0, gens.peripheral_count() - 1);
  std::uniform_int_distribution<int> pick_len(0, opts.max_word_len);
  long attempts = 0;
  const long max_attempts = 50L * std::max(1, opts.sample_count);
  while (out.checked < opts.sample_count && attempts < max_attempts) {
    ++attempts;
    const int pl = pick_p(rng), pr = pick_p(rng);
    const Word g = random_reduced_word(gens, pick_len(rng), rng);
    const Word h = random_reduced_word(gens, pick_len(rng), rng);
    const PathWindow window = transversality_window(gens, g, h, pl, pr, opts.tail_depth);
    if (!is_metric_quasigeodesic(gens, window, opts.qg).ok) {
      ++out.filtered;
      continue;
    }
    const ProjSubspace moved_line =
        subspace_from_span(rep.evaluate(g.inverse()).unit * limits[pl].line.frame);
    const ProjSubspace moved_hyper =
        subspace_from_span(rep.evaluate(h).unit * limits[pr].hyperplane.frame);
    const double sin_angle = line_hyperplane_angle_sin(moved_line, moved_hyper);
    ++out.checked;
    if (sin_angle < out.min_sin) {
      out.min_sin = sin_angle;
      out.argmin = {g, h, pl, pr, sin_angle};
    }
  }
  if (out.checked == 0) throw std::runtime_error("no valid transversality configuration found");
  out.positive = out.min_sin >= opts.delta0_floor;
  return out;
}

namespace {

struct LogLinearFit {
  double slope = 0, intercept = 0, r_squared = 0;
  int n = 0;
};

LogLinearFit least_squares_log(const std::vector<std::pair<double, double>>& xy) {
  LogLinearFit f;
  f.n = static_cast<int>(xy.size());
  if (f.n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double n = f.n;
  const double denom = n * sxx - sx * sx;
  if (denom <= 0) return f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (auto [x, y] : xy) {
    const double e = y - (f.intercept + f.slope * x);
    ss_res += e * e;
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

FlagConvergenceReport measure_flag_convergence(const Representation& rep, const PathWindow& path,
                                               int k, int n_max, double noise_floor) {
  FlagConvergenceReport out;
  const int d = rep.dimension();
  const int back = std::min(n_max + 1, k - path.first_index);
  const int fwd = std::min(n_max + 1, path.last_index() - k);

  auto step_word = [&](int from, int to) {
    return concat(path.at(from).inverse(), path.at(to));
  };

  // Backward products rho(gamma(k)^{-1} gamma(k-n)).
  {
    NormalizedMatrix acc{Matrix::Identity(d, d), 0.0};
    std::optional<ProjSubspace> prev;
    for (int n = 1; n <= back; ++n) {
      acc = nproduct(acc, rep.evaluate(step_word(k - n + 1, k - n)).unit);
      std::optional<ProjSubspace> cur;
      try {
        cur = u_subspace(acc.unit, 1);
      } catch (const GapError&) {
        ++out.excluded;
      }
      if (prev && cur)
        out.step_u1.push_back(proj_distance(*prev, *cur));
      else if (n > 1)
        out.step_u1.push_back(std::numeric_limits<double>::quiet_NaN());
      prev = cur;
    }
  }

  // Forward duals U_{d-1}(rho(gamma(k)^{-1} gamma(k+n))).
  {
    NormalizedMatrix acc{Matrix::Identity(d, d), 0.0};
    std::optional<ProjSubspace> prev;
    for (int n = 1; n <= fwd; ++n) {
      acc = nproduct(acc, rep.evaluate(step_word(k + n - 1, k + n)).unit);
      std::optional<ProjSubspace> cur;
      try {
        cur = u_subspace(acc.unit, d - 1);
      } catch (const GapError&) {
        ++out.excluded;
      }
      if (prev && cur)
        out.step_dual.push_back(proj_distance(*prev, *cur));
      else if (n > 1)
        out.step_dual.push_back(std::numeric_limits<double>::quiet_NaN());
      prev = cur;
    }
  }

  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < out.step_u1.size(); ++i) {
    const double v = out.step_u1[i];
    if (std::isnan(v) || v < noise_floor) {
      ++out.excluded;
      continue;
    }
    xy.push_back({static_cast<double>(i + 1), std::log(v)});
  }
  const LogLinearFit f = least_squares_log(xy);
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.r_squared = f.r_squared;
  out.defined_points = f.n;
  return out;
}

LimitSampleReport sample_limit_map(const Representation& rep, const RayDescriptor& ray, int n_max,
                                   double tol) {
  LimitSampleReport out;
  if (ray.period.empty()) throw std::invalid_argument("ray period must be nontrivial");
  const int d = rep.dimension();
  NormalizedMatrix acc = normalize_matrix(rep.evaluate(ray.prefix).unit);
  const Matrix step = rep.evaluate(ray.period).unit;
  std::optional<ProjSubspace> prev;
  for (int n = 1; n <= n_max; ++n) {
    acc = nproduct(acc, step);
    try {
      ProjSubspace line = u_subspace(acc.unit, 1);
      out.hyperplane = u_subspace(acc.unit, d - 1);
      if (prev) out.line_trace.push_back(proj_distance(*prev, line));
      prev = line;
      out.line = std::move(line);
    } catch (const GapError&) {
      prev.reset();
    }
  }
  if (!out.line_trace.empty()) {
    out.last_step = out.line_trace.back();
    out.converged = prev.has_value() && out.last_step <= tol;
  }
  return out;
}

}  // namespace reldom
