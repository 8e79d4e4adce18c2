#include "reldom/cusped_length.hpp"

#include <cmath>

namespace reldom {

double damped_excursion_length(long ell) {
  return std::max(std::log(static_cast<double>(ell)), 1.0);
}

CuspedLengthBracket cusped_length_estimate(const GeneratorSet& gens, const Word& w) {
  CuspedLengthBracket b;
  if (w.empty()) {
    b.exact = 0;
    return b;
  }
  double q = static_cast<double>(w.size());
  for (const Excursion& e : decompose_relative(gens, w).excursions) {
    const long ell = e.last - e.first + 1;
    q += damped_excursion_length(ell) - static_cast<double>(ell);
  }
  b.modified_length = q;
  b.lo = q / 3.0;
  b.hi = 4.0 * q;
  return b;
}

namespace {

CuspedLengthFn default_length(const GeneratorSet& gens) {
  return [&gens](const Word& w) { return cusped_length_estimate(gens, w); };
}

}  // namespace

QgResult is_metric_quasigeodesic(const GeneratorSet& gens, const PathWindow& path,
                                 const QgParams& params, const CuspedLengthFn& length) {
  if (params.lower <= 0 || params.upper <= 0)
    throw std::invalid_argument("quasigeodesic constants must be positive");
  const CuspedLengthFn len = length ? length : default_length(gens);
  const int a = path.first_index, b = path.last_index();
  const int n_points = static_cast<int>(path.points.size());

  std::vector<int> depths(n_points);
  for (int n = a; n <= b; ++n) depths[n - a] = path_depth(gens, path, n);

  // Clause 1: cusped increments grow at least linearly in the parameter.
  for (int n = a; n <= b; ++n)
    for (int m = n + 1; m <= b; ++m) {
      const auto d = len(concat(path.at(n).inverse(), path.at(m)));
      const double bound = (m - n) / params.lower - params.lower;
      if (d.tightest_hi() < bound) return {false, QgViolation{1, m, n}};
    }

  // Clause 2: cusped increments are bounded by the parameter plus depth.
  for (int n = a; n <= b; ++n)
    for (int m = n + 1; m <= b; ++m) {
      const auto d = len(concat(path.at(n).inverse(), path.at(m)));
      const double bound =
          params.upper * ((m - n) + std::min(depths[m - a], depths[n - a])) + params.upper;
      if (d.tightest_lo() > bound) return {false, QgViolation{2, m, n}};
    }

  // Clause 3: peripheral steps are spelled in the peripheral generator and
  // track 2^depth.
  for (int n = a; n < b; ++n) {
    const Word inc = path_increment(path, n);
    if (inc.empty()) continue;
    auto id = gens.peripheral_of(inc.letter(0));
    bool peripheral = id.has_value();
    for (std::size_t i = 1; peripheral && i < inc.size(); ++i)
      peripheral = gens.peripheral_of(inc.letter(i)) == id;
    if (!peripheral) continue;
    const double ell = static_cast<double>(inc.size());
    const double dn = static_cast<double>(depths[n - a]);
    if (ell < std::exp2(dn - 1) || ell > std::exp2(dn + 1))
      return {false, QgViolation{3, n + 1, n}};
  }
  return {true, std::nullopt};
}

double gromov_product_word(const Word& x, const Word& y, const Word& base) {
  const double dxb = static_cast<double>(concat(x.inverse(), base).size());
  const double dyb = static_cast<double>(concat(y.inverse(), base).size());
  const double dxy = static_cast<double>(concat(x.inverse(), y).size());
  return 0.5 * (dxb + dyb - dxy);
}

Interval gromov_product_cusped(const Word& x, const Word& y, const Word& base,
                               const CuspedLengthFn& length) {
  const auto dxb = length(concat(x.inverse(), base));
  const auto dyb = length(concat(y.inverse(), base));
  const auto dxy = length(concat(x.inverse(), y));
  return {0.5 * (dxb.tightest_lo() + dyb.tightest_lo() - dxy.tightest_hi()),
          0.5 * (dxb.tightest_hi() + dyb.tightest_hi() - dxy.tightest_lo())};
}

}  // namespace reldom
