#include "reldom/pingpong.hpp"
#include <sstream>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace reldom {

namespace {

Vector unit_line_vector(const ProjSubspace& line) {
  if (line.dim() != 1) throw std::invalid_argument("expected a line");
  return line.frame.col(0).normalized();
}

/// Unit normal of a hyperplane frame.
Vector hyperplane_normal(const ProjSubspace& hyper) {
  const int d = hyper.ambient();
  if (hyper.dim() != d - 1) throw std::invalid_argument("expected a hyperplane");
  Eigen::FullPivLU<Matrix> lu(hyper.frame.transpose());
  Matrix kernel = lu.kernel();
  return kernel.col(0).normalized();
}

double sin_between_lines(const Vector& a, const Vector& b) {
  const double c = std::min(1.0, std::abs(a.dot(b)));
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

std::vector<Vector> sphere_sample(int d, int n, std::uint64_t seed) {
  std::vector<Vector> pts;
  pts.reserve(n);
  if (d == 2) {
    for (int i = 0; i < n; ++i) {
      const double t = std::numbers::pi * i / n;  // half circle covers P(R^2)
      Vector v(2);
      v << std::cos(t), std::sin(t);
      pts.push_back(v);
    }
    return pts;
  }
  if (d == 3) {
    // Spherical Fibonacci lattice.
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = 2.0 * std::numbers::pi * i / golden;
      Vector v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      pts.push_back(v);
    }
    return pts;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < n; ++i) {
    Vector v(d);
    for (int j = 0; j < d; ++j) v(j) = gauss(rng);
    pts.push_back(v.normalized());
  }
  return pts;
}

/// Empirical covering radius in the sin-angle metric, inflated for safety.
double estimate_mesh(const std::vector<Vector>& pts, std::uint64_t seed) {
  const int d = static_cast<int>(pts.front().size());
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss;
  const int probes = 2000;
  double worst = 0;
  for (int i = 0; i < probes; ++i) {
    Vector p(d);
    for (int j = 0; j < d; ++j) p(j) = gauss(rng);
    p.normalize();
    double best = 1;
    for (const Vector& q : pts) best = std::min(best, sin_between_lines(p, q));
    worst = std::max(worst, best);
  }
  return 1.3 * worst;
}

struct LogLogFit {
  double slope = 0, r2 = 0;
};

LogLogFit fit_line(const std::vector<std::pair<double, double>>& xy) {
  LogLogFit f;
  const double n = static_cast<double>(xy.size());
  if (xy.size() < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0) return f;
  f.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - f.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (auto [x, y] : xy) {
    const double e = y - (intercept + f.slope * x);
    ss_res += e * e;
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

double neighborhood_distance(const ProjNeighborhood& nb, const ProjSubspace& line) {
  if (nb.kind == ProjNeighborhood::Kind::LineBall) return proj_distance(nb.center, line);
  return line_hyperplane_angle_sin(line, nb.center);
}

ProjSubspace attracting_line(const Matrix& t) {
  Eigen::EigenSolver<Matrix> es(t);
  const auto vals = es.eigenvalues();
  int top = 0;
  for (int i = 1; i < vals.size(); ++i)
    if (std::abs(vals(i)) > std::abs(vals(top))) top = i;
  double second = 0;
  for (int i = 0; i < vals.size(); ++i)
    if (i != top) second = std::max(second, std::abs(vals(i)));
  if (!(std::abs(vals(top)) > second * (1.0 + kGapTolerance)))
    throw GapError("attracting_line: no eigenvalue modulus gap");
  Vector v = es.eigenvectors().col(top).real();
  if (v.norm() < 1e-12) throw GapError("attracting_line: eigenvector not real");
  Matrix frame(t.rows(), 1);
  frame.col(0) = v.normalized();
  return {frame};
}

bool is_proximal(const Matrix& t) {
  try {
    attracting_line(t);
    return true;
  } catch (const GapError&) {
    return false;
  }
}

bool is_biproximal(const Matrix& t) { return is_proximal(t) && is_proximal(t.inverse()); }

ProjSubspace repelling_hyperplane(const Matrix& t) {
  // Invariant complement of the attracting line; its normal is the top
  // eigenvector of the transpose.
  const Vector normal = unit_line_vector(attracting_line(t.transpose()));
  Eigen::HouseholderQR<Matrix> qr(normal);
  Matrix q = qr.householderQ();
  return {q.rightCols(t.rows() - 1)};
}

ProjSubspace unipotent_attracting_line(const Matrix& s, double tol) {
  const int d = static_cast<int>(s.rows());
  const Matrix n = s - Matrix::Identity(d, d);
  const double scale = std::max(1.0, n.norm());
  Matrix p = Matrix::Identity(d, d);
  int index = 0;
  while (index < d && p.norm() > tol * std::pow(scale, index)) {
    p = p * n;
    ++index;
  }
  if (index == d && p.norm() > tol * std::pow(scale, index))
    throw std::invalid_argument("unipotent_attracting_line: matrix is not unipotent");
  // index = nilpotency degree m; the line is the image of (S-I)^{m-1}.
  if (index < 1) throw std::invalid_argument("unipotent_attracting_line: identity has no line");
  Matrix top = Matrix::Identity(d, d);
  for (int i = 0; i < index - 1; ++i) top = top * n;
  Eigen::JacobiSVD<Matrix> svd(top, Eigen::ComputeFullU);
  const Vector sv = svd.singularValues();
  if (index >= 2 && sv(1) > 1e-8 * sv(0))
    throw std::invalid_argument(
        "unipotent_attracting_line: largest Jordan block is not unique");
  if (index == 1)
    throw std::invalid_argument("unipotent_attracting_line: identity has no line");
  Matrix frame(d, 1);
  frame.col(0) = svd.matrixU().col(0);
  return {frame};
}

namespace {

/// The S-invariant hyperplane ker((S-I)^{m-1}); it contains the attracting
/// line and every direction the powers of S move slowly.
ProjSubspace unipotent_slow_hyperplane(const Matrix& s) {
  const int d = static_cast<int>(s.rows());
  const Matrix n = s - Matrix::Identity(d, d);
  Matrix p = Matrix::Identity(d, d);
  int index = 0;
  const double scale = std::max(1.0, n.norm());
  while (index < d && p.norm() > 1e-9 * std::pow(scale, index)) {
    p = p * n;
    ++index;
  }
  Matrix top = Matrix::Identity(d, d);
  for (int i = 0; i < index - 1; ++i) top = top * n;
  // ker(top) is the orthocomplement of the row space.
  Eigen::JacobiSVD<Matrix> svd(top, Eigen::ComputeFullV);
  return {svd.matrixV().rightCols(d - 1)};
}

struct LetterGeometry {
  Matrix m;
  std::string label;
  const ProjNeighborhood* target = nullptr;
  const ProjNeighborhood* excluded = nullptr;
  bool unipotent = false;
  int generator = -1;  // index within its family
  int sign = +1;
};

std::vector<LetterGeometry> letter_table(const PingPongDatum& datum) {
  std::vector<LetterGeometry> out;
  for (std::size_t i = 0; i < datum.proximal.size(); ++i) {
    out.push_back({datum.proximal[i], "T" + std::to_string(i + 1), &datum.attract_pos[i],
                   &datum.repel_pos[i], false, static_cast<int>(i), +1});
    out.push_back({datum.proximal[i].inverse(), "T" + std::to_string(i + 1) + "^-1",
                   &datum.attract_neg[i], &datum.repel_neg[i], false, static_cast<int>(i), -1});
  }
  for (std::size_t j = 0; j < datum.unipotent.size(); ++j) {
    out.push_back({datum.unipotent[j], "S" + std::to_string(j + 1), &datum.para_pos[j],
                   &datum.para_repel[j], true, static_cast<int>(j), +1});
    out.push_back({datum.unipotent[j].inverse(), "S" + std::to_string(j + 1) + "^-1",
                   &datum.para_neg[j], &datum.para_repel[j], true, static_cast<int>(j), -1});
  }
  return out;
}

bool same_base(const LetterGeometry& a, const LetterGeometry& b) {
  return a.unipotent == b.unipotent && a.generator == b.generator;
}

double center_distance(const ProjNeighborhood& ball, const ProjNeighborhood& other) {
  if (other.kind == ProjNeighborhood::Kind::LineBall)
    return proj_distance(ball.center, other.center);
  return line_hyperplane_angle_sin(ball.center, other.center);
}

InclusionReport sweep_inclusion(const Matrix& m, const ProjNeighborhood& excluded,
                                const ProjNeighborhood& target, const std::string& label,
                                const std::vector<Vector>& samples, double mesh,
                                std::string* witness) {
  InclusionReport rep;
  rep.label = label;
  const Vector sv = singular_values(m);
  const double s1 = sv(0), s2 = sv(std::min<int>(1, sv.size() - 1));
  const Vector excl_normal = excluded.kind == ProjNeighborhood::Kind::HyperplaneTube
                                 ? hyperplane_normal(excluded.center)
                                 : unit_line_vector(excluded.center);
  const Vector target_center = unit_line_vector(target.center);
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_slack = std::numeric_limits<double>::infinity();
  bool refuted = false;
  for (const Vector& u : samples) {
    double excl_dist;
    if (excluded.kind == ProjNeighborhood::Kind::HyperplaneTube)
      excl_dist = std::abs(u.dot(excl_normal));
    else
      excl_dist = sin_between_lines(u, excl_normal);
    if (excl_dist < excluded.radius - mesh) continue;  // not in the enlarged complement
    const Vector img = m * u;
    const double norm = img.norm();
    const Vector v = img / norm;
    const double dist = sin_between_lines(v, target_center);
    if (excl_dist >= excluded.radius && dist >= target.radius) {
      refuted = true;
      if (witness && witness->empty())
        *witness = label + ": image of a complement point misses the target";
    }
    const double shrink = std::max(norm - 1.2 * s1 * mesh, 1e-300);
    const double lip = s1 * s2 / (norm * shrink);
    worst_margin = std::min(worst_margin, target.radius - dist);
    worst_slack = std::min(worst_slack, target.radius - dist - lip * mesh);
  }
  rep.worst_margin = worst_margin;
  rep.slack = worst_slack;
  rep.status = refuted           ? CertStatus::Refuted
               : worst_slack > 0 ? CertStatus::Certified
                                 : CertStatus::Inconclusive;
  return rep;
}

}  // namespace

PingPongCertificate verify_pingpong(const PingPongDatum& datum, int sphere_samples,
                                    std::uint64_t seed) {
  PingPongCertificate cert;
  cert.sphere_samples = sphere_samples;
  const auto letters = letter_table(datum);

  // Disjointness table. Targets of distinct generators must be pairwise
  // disjoint; the two one-sided targets of one unipotent generator may meet
  // near the parabolic fixed line. A syllable's target must avoid the
  // excluded zone of any syllable of a different base that can follow, and
  // for proximal generators the same-sign pair A/B must be disjoint so that
  // powers nest.
  cert.min_target_separation = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < letters.size(); ++a)
    for (std::size_t b = a + 1; b < letters.size(); ++b) {
      const auto& ta = *letters[a].target;
      const auto& tb = *letters[b].target;
      const double sep = proj_distance(ta.center, tb.center) - ta.radius - tb.radius;
      if (same_base(letters[a], letters[b])) continue;
      cert.min_target_separation = std::min(cert.min_target_separation, sep);
      if (sep < 0) cert.disjointness_failures.push_back(ta.label + " overlaps " + tb.label);
    }
  for (std::size_t g = 0; g < letters.size(); ++g)
    for (std::size_t gp = 0; gp < letters.size(); ++gp) {
      const bool required =
          !same_base(letters[g], letters[gp]) ||
          (!letters[g].unipotent && letters[g].sign == letters[gp].sign);
      if (!required) continue;
      const auto& target = *letters[gp].target;
      const auto& excluded = *letters[g].excluded;
      if (center_distance(target, excluded) < target.radius + excluded.radius)
        cert.disjointness_failures.push_back(target.label + " meets " + excluded.label);
    }
  std::sort(cert.disjointness_failures.begin(), cert.disjointness_failures.end());
  cert.disjointness_failures.erase(
      std::unique(cert.disjointness_failures.begin(), cert.disjointness_failures.end()),
      cert.disjointness_failures.end());
  if (!cert.disjointness_failures.empty()) {
    cert.status = CertStatus::Refuted;
    cert.witness = "disjointness table violated";
    return cert;
  }

  // epsilon0 proximity of power limits, tracked per generator.
  const int prox_sweep = 64;
  auto probe_powers = [&](const Matrix& m, const ProjSubspace& line_target,
                          const ProjSubspace* hyper_target) {
    double worst = 0;
    NormalizedMatrix acc{Matrix::Identity(datum.dimension, datum.dimension), 0.0};
    for (int n = 1; n <= prox_sweep; ++n) {
      acc = nproduct(acc, m);
      const Vector sv = singular_values(acc.unit);
      if (sv(sv.size() - 1) < 1e-140) break;  // converged beyond double resolution
      try {
        worst = std::max(worst, proj_distance(u_subspace(acc.unit, 1), line_target));
        if (hyper_target)
          worst = std::max(
              worst, proj_distance(u_subspace(acc.unit, datum.dimension - 1), *hyper_target));
      } catch (const GapError&) {
        worst = std::max(worst, 1.0);
      }
    }
    return worst;
  };
  cert.epsilon0_attained = 0;
  for (std::size_t i = 0; i < datum.proximal.size(); ++i) {
    const double w = std::max(
        probe_powers(datum.proximal[i], datum.attract_pos[i].center, &datum.repel_neg[i].center),
        probe_powers(datum.proximal[i].inverse(), datum.attract_neg[i].center,
                     &datum.repel_pos[i].center));
    cert.epsilon0_attained = std::max(cert.epsilon0_attained, w);
    if (w > datum.epsilon0) cert.proximity_failures.push_back("T" + std::to_string(i + 1));
  }
  for (std::size_t j = 0; j < datum.unipotent.size(); ++j) {
    const ProjSubspace fixed_line = unipotent_attracting_line(datum.unipotent[j]);
    const double w = std::max(probe_powers(datum.unipotent[j], fixed_line, nullptr),
                              probe_powers(datum.unipotent[j].inverse(), fixed_line, nullptr));
    cert.epsilon0_attained = std::max(cert.epsilon0_attained, w);
    if (w > datum.epsilon0) cert.proximity_failures.push_back("S" + std::to_string(j + 1));
  }
  if (!cert.proximity_failures.empty()) {
    cert.status = CertStatus::Refuted;
    cert.witness =
        "epsilon0 proximity fails: attained " + std::to_string(cert.epsilon0_attained);
    return cert;
  }

  const auto samples = sphere_sample(datum.dimension, sphere_samples, seed);
  cert.mesh = estimate_mesh(samples, seed);

  for (std::size_t i = 0; i < datum.proximal.size(); ++i) {
    const Matrix& t = datum.proximal[i];
    cert.inclusions.push_back(sweep_inclusion(t, datum.repel_pos[i], datum.attract_pos[i],
                                              "T" + std::to_string(i + 1), samples, cert.mesh,
                                              &cert.witness));
    cert.inclusions.push_back(sweep_inclusion(t.inverse(), datum.repel_neg[i],
                                              datum.attract_neg[i],
                                              "T" + std::to_string(i + 1) + "^-1", samples,
                                              cert.mesh, &cert.witness));
  }
  for (std::size_t j = 0; j < datum.unipotent.size(); ++j) {
    Matrix fwd = Matrix::Identity(datum.dimension, datum.dimension);
    Matrix bwd = fwd;
    const Matrix inv = datum.unipotent[j].inverse();
    for (int k = 1; k <= datum.power_sweep; ++k) {
      fwd = fwd * datum.unipotent[j];
      bwd = bwd * inv;
      cert.inclusions.push_back(sweep_inclusion(
          fwd, datum.para_repel[j], datum.para_pos[j],
          "S" + std::to_string(j + 1) + "^" + std::to_string(k), samples, cert.mesh,
          &cert.witness));
      cert.inclusions.push_back(sweep_inclusion(
          bwd, datum.para_repel[j], datum.para_neg[j],
          "S" + std::to_string(j + 1) + "^-" + std::to_string(k), samples, cert.mesh,
          &cert.witness));
    }
  }

  cert.slack = std::numeric_limits<double>::infinity();
  bool inconclusive = false, refuted = false;
  for (const auto& inc : cert.inclusions) {
    cert.slack = std::min(cert.slack, inc.slack);
    refuted = refuted || inc.status == CertStatus::Refuted;
    inconclusive = inconclusive || inc.status == CertStatus::Inconclusive;
  }
  cert.status = refuted        ? CertStatus::Refuted
                : inconclusive ? CertStatus::Inconclusive
                               : CertStatus::Certified;
  return cert;
}

namespace {

Matrix matrix_power(const Matrix& m, long e) {
  Matrix acc = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  long k = e;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

ProjSubspace top_singular_line(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  Matrix frame(m.rows(), 1);
  frame.col(0) = svd.matrixU().col(0);
  return {frame};
}

}  // namespace

PingPongDatum power_up(const std::vector<Matrix>& proximal, const std::vector<Matrix>& unipotent,
                       const PowerUpOptions& opts) {
  if (proximal.empty() && unipotent.empty())
    throw std::invalid_argument("power_up: no generators");
  const int d = static_cast<int>((proximal.empty() ? unipotent : proximal)[0].rows());

  std::vector<ProjSubspace> t_plus, t_minus, h_plus, h_minus, s_plus, s_slow;
  for (const Matrix& t : proximal) {
    if (!is_biproximal(t)) throw std::invalid_argument("power_up: generator is not biproximal");
    t_plus.push_back(attracting_line(t));
    t_minus.push_back(attracting_line(t.inverse()));
    h_plus.push_back(repelling_hyperplane(t));
    h_minus.push_back(repelling_hyperplane(t.inverse()));
  }
  for (const Matrix& s : unipotent) {
    s_plus.push_back(unipotent_attracting_line(s));
    s_slow.push_back(unipotent_slow_hyperplane(s));
  }

  // Configuration preconditions: attracting objects pairwise distinct and
  // off the repelling loci they will need to avoid.
  {
    std::vector<ProjSubspace> lines;
    for (auto& l : t_plus) lines.push_back(l);
    for (auto& l : t_minus) lines.push_back(l);
    for (auto& l : s_plus) lines.push_back(l);
    for (std::size_t a = 0; a < lines.size(); ++a)
      for (std::size_t b = a + 1; b < lines.size(); ++b)
        if (proj_distance(lines[a], lines[b]) < 1e-6)
          throw std::invalid_argument("power_up: attracting lines are not pairwise distinct");
  }

  std::vector<long> exp_t(proximal.size(), 1), exp_s(unipotent.size(), 1);
  PingPongCertificate last;
  for (int attempt = 0; attempt < 40; ++attempt) {
    PingPongDatum datum;
    datum.dimension = d;
    datum.epsilon0 = opts.epsilon0;
    datum.power_sweep = opts.power_sweep;
    datum.proximal_exponent = exp_t;
    datum.unipotent_exponent = exp_s;
    for (std::size_t i = 0; i < proximal.size(); ++i)
      datum.proximal.push_back(matrix_power(proximal[i], exp_t[i]));
    for (std::size_t j = 0; j < unipotent.size(); ++j)
      datum.unipotent.push_back(matrix_power(unipotent[j], exp_s[j]));
    for (const Matrix& m : datum.proximal)
      if (!m.allFinite() || !m.inverse().allFinite())
        throw std::runtime_error("power_up: powered generator left double range");
    for (const Matrix& m : datum.unipotent)
      if (!m.allFinite())
        throw std::runtime_error("power_up: powered generator left double range");

    // Separation budgets from the fixed spectral geometry, over exactly the
    // pairs the disjointness table will check.
    struct CenterLine {
      const ProjSubspace* line;
      bool unipotent;
      int gen;
      int sign;
    };
    struct CenterTube {
      const ProjSubspace* hyper;
      bool unipotent;
      int gen;
      int sign;
    };
    std::vector<CenterLine> targets;
    for (std::size_t i = 0; i < t_plus.size(); ++i) {
      targets.push_back({&t_plus[i], false, static_cast<int>(i), +1});
      targets.push_back({&t_minus[i], false, static_cast<int>(i), -1});
    }
    for (std::size_t j = 0; j < s_plus.size(); ++j)
      targets.push_back({&s_plus[j], true, static_cast<int>(j), 0});
    std::vector<CenterTube> tubes;
    for (std::size_t i = 0; i < h_plus.size(); ++i) {
      tubes.push_back({&h_plus[i], false, static_cast<int>(i), +1});
      tubes.push_back({&h_minus[i], false, static_cast<int>(i), -1});
    }
    for (std::size_t j = 0; j < s_slow.size(); ++j)
      tubes.push_back({&s_slow[j], true, static_cast<int>(j), 0});

    double sep_targets = 1, sep_table = 1;
    for (std::size_t a = 0; a < targets.size(); ++a)
      for (std::size_t b = a + 1; b < targets.size(); ++b) {
        if (targets[a].unipotent == targets[b].unipotent && targets[a].gen == targets[b].gen)
          continue;
        sep_targets = std::min(sep_targets, proj_distance(*targets[a].line, *targets[b].line));
      }
    for (const CenterLine& t : targets)
      for (const CenterTube& e : tubes) {
        const bool base_equal = t.unipotent == e.unipotent && t.gen == e.gen;
        const bool required = !base_equal || (!t.unipotent && t.sign == e.sign);
        if (!required) continue;
        const double sep = line_hyperplane_angle_sin(*t.line, *e.hyper);
        if (sep < 1e-6)
          throw std::invalid_argument(
              "power_up: an attracting line lies in a repelling locus it must avoid");
        sep_table = std::min(sep_table, sep);
      }

    const double r_ball = std::min(0.45 * sep_targets, 0.35 * sep_table);
    const double r_tube = 0.5 * sep_table;
    if (r_ball < 2 * opts.epsilon0 || r_tube < 2 * opts.epsilon0)
      throw std::invalid_argument(
          "power_up: requested epsilon0 exceeds the configuration's separation budget");

    for (std::size_t i = 0; i < proximal.size(); ++i) {
      const std::string idx = std::to_string(i + 1);
      datum.attract_pos.push_back(
          {ProjNeighborhood::Kind::LineBall, t_plus[i], r_ball, "A" + idx + "+"});
      datum.attract_neg.push_back(
          {ProjNeighborhood::Kind::LineBall, t_minus[i], r_ball, "A" + idx + "-"});
      datum.repel_pos.push_back(
          {ProjNeighborhood::Kind::HyperplaneTube, h_plus[i], r_tube, "B" + idx + "+"});
      datum.repel_neg.push_back(
          {ProjNeighborhood::Kind::HyperplaneTube, h_minus[i], r_tube, "B" + idx + "-"});
    }
    for (std::size_t j = 0; j < unipotent.size(); ++j) {
      const std::string idx = std::to_string(j + 1);
      const ProjSubspace c_pos = top_singular_line(datum.unipotent[j]);
      const ProjSubspace c_neg = top_singular_line(datum.unipotent[j].inverse());
      // Radius covers the drift of U_1 of higher powers toward the fixed
      // line, so the whole power tail stays strictly inside.
      const double r_pos =
          std::max(1.05 * proj_distance(c_pos, s_plus[j]), 1.2 * opts.epsilon0);
      const double r_neg =
          std::max(1.05 * proj_distance(c_neg, s_plus[j]), 1.2 * opts.epsilon0);
      datum.para_pos.push_back(
          {ProjNeighborhood::Kind::LineBall, c_pos, r_pos, "C" + idx + "+"});
      datum.para_neg.push_back(
          {ProjNeighborhood::Kind::LineBall, c_neg, r_neg, "C" + idx + "-"});
      datum.para_repel.push_back(
          {ProjNeighborhood::Kind::HyperplaneTube, s_slow[j], r_tube, "R" + idx});
    }

    last = verify_pingpong(datum, opts.sphere_samples, opts.seed);
    if (last.status == CertStatus::Certified) return datum;

    // Double the exponents implicated by the failure; everything, if unclear.
    std::vector<bool> bump_t(proximal.size(), false), bump_s(unipotent.size(), false);
    bool any = false;
    auto mark = [&](const std::string& label) {
      if (label[0] == 'T') {
        bump_t[std::stoi(label.substr(1)) - 1] = true;
        any = true;
      } else if (label[0] == 'S') {
        bump_s[std::stoi(label.substr(1)) - 1] = true;
        any = true;
      }
    };
    auto mark_neighborhood = [&](const std::string& label) {
      if (label.empty()) return;
      const char c = label[0];
      std::size_t end = 1;
      while (end < label.size() && std::isdigit(label[end])) ++end;
      if (end == 1) return;
      const int idx = std::stoi(label.substr(1, end - 1)) - 1;
      // Powering a proximal generator leaves its spectral data unchanged, so
      // only the unipotent side of an overlap can be repaired by powers.
      if (c == 'C' || c == 'R') {
        bump_s[idx] = true;
        any = true;
      }
    };
    for (const auto& inc : last.inclusions)
      if (inc.status != CertStatus::Certified) mark(inc.label);
    for (const auto& label : last.proximity_failures) mark(label);
    for (const auto& failure : last.disjointness_failures) {
      std::istringstream parts(failure);
      std::string tok;
      while (parts >> tok) mark_neighborhood(tok);
    }
    for (std::size_t i = 0; i < exp_t.size(); ++i)
      if (!any || bump_t[i]) exp_t[i] *= 2;
    for (std::size_t j = 0; j < exp_s.size(); ++j)
      if (!any || bump_s[j]) exp_s[j] *= 2;
    long worst = 0;
    for (long e : exp_t) worst = std::max(worst, e);
    for (long e : exp_s) worst = std::max(worst, e);
    if (worst > opts.max_exponent) break;
  }
  throw std::runtime_error("power_up: search budget exhausted; last status " +
                           std::string(last.witness));
}

std::pair<GeneratorSet, Representation> build_relative_structure(const PingPongDatum& datum,
                                                                 int sphere_samples) {
  const PingPongCertificate cert = verify_pingpong(datum, sphere_samples);
  if (cert.status != CertStatus::Certified)
    throw std::runtime_error("build_relative_structure: datum does not certify: " + cert.witness);
  GeneratorSet gens;
  std::vector<Letter> t_letters, s_letters;
  for (std::size_t i = 0; i < datum.proximal.size(); ++i)
    t_letters.push_back(gens.add_generator(
        datum.proximal.size() == 1 ? "t" : "t" + std::to_string(i + 1)));
  for (std::size_t j = 0; j < datum.unipotent.size(); ++j)
    s_letters.push_back(gens.add_generator(
        datum.unipotent.size() == 1 ? "s" : "s" + std::to_string(j + 1), static_cast<int>(j)));
  Representation rep(gens, datum.dimension);
  for (std::size_t i = 0; i < datum.proximal.size(); ++i)
    rep.set_generator(t_letters[i], datum.proximal[i]);
  for (std::size_t j = 0; j < datum.unipotent.size(); ++j)
    rep.set_generator(s_letters[j], datum.unipotent[j]);
  return {gens, std::move(rep)};
}

GapPolynomialFit unipotent_gap_polynomials(const Matrix& s, long n_max) {
  GapPolynomialFit out;
  std::vector<std::pair<double, double>> spread, top;
  NormalizedMatrix acc = normalize_matrix(s);
  double max_gap = 0;
  for (long n = 1; n <= n_max; n *= 2) {
    const double g_full = log_gap_full(acc.unit);
    const double g_top = log_gap_top(acc.unit);
    max_gap = std::max({max_gap, g_full, g_top});
    if (n >= 2) {  // log n = 0 at n = 1 adds no slope information
      spread.push_back({std::log(static_cast<double>(n)), g_full});
      top.push_back({std::log(static_cast<double>(n)), g_top});
    }
    if (2 * n > n_max) break;
    acc = nproduct(acc, acc);
  }
  if (max_gap < 1e-6) {
    out.degenerate = true;
    return out;
  }
  const LogLogFit f1 = fit_line(spread);
  const LogLogFit f2 = fit_line(top);
  out.spread_slope = f1.slope;
  out.spread_r2 = f1.r2;
  out.top_slope = f2.slope;
  out.top_r2 = f2.r2;
  return out;
}

}  // namespace reldom
