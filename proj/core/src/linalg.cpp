#include "reldom/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace reldom {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& g) {
  return Eigen::JacobiSVD<Matrix>(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

void require_square(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw std::invalid_argument("matrix must be square");
}

void require_gap(const Vector& sigma, int i, const char* where) {
  const int d = static_cast<int>(sigma.size());
  if (i < 1 || i > d - 1) throw std::invalid_argument("subspace index out of range");
  if (!(sigma(i - 1) > sigma(i) * (1.0 + kGapTolerance)))
    throw GapError(std::string(where) + ": no singular value gap at index " + std::to_string(i));
}

}  // namespace

CartanData cartan(const Matrix& g) {
  require_square(g);
  auto svd = full_svd(g);
  const Vector sigma = svd.singularValues();
  if (!(sigma(sigma.size() - 1) > 0)) throw std::invalid_argument("cartan: singular matrix");
  CartanData out;
  out.k = svd.matrixU();
  out.log_sigma = sigma.array().log().matrix();
  out.l = svd.matrixV().transpose();
  return out;
}

Vector singular_values(const Matrix& g) {
  require_square(g);
  return Eigen::JacobiSVD<Matrix>(g).singularValues();
}

ProjSubspace subspace_from_span(const Matrix& span_columns) {
  Eigen::HouseholderQR<Matrix> qr(span_columns);
  Matrix q = qr.householderQ() * Matrix::Identity(span_columns.rows(), span_columns.cols());
  return {q};
}

ProjSubspace u_subspace(const Matrix& g, int i) {
  require_square(g);
  auto svd = full_svd(g);
  require_gap(svd.singularValues(), i, "u_subspace");
  return {svd.matrixU().leftCols(i)};
}

ProjSubspace s_subspace(const Matrix& g, int i) { return u_subspace(g.inverse(), i); }

Vector eigen_moduli(const Matrix& g) {
  require_square(g);
  Eigen::EigenSolver<Matrix> es(g, /*computeEigenvectors=*/false);
  Vector moduli = es.eigenvalues().array().abs();
  std::sort(moduli.data(), moduli.data() + moduli.size(), std::greater<double>());
  return moduli;
}

SigmaLimitResult eigen_via_sigma_limit(const Matrix& g, long n_max) {
  require_square(g);
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  SigmaLimitResult out;
  NormalizedMatrix acc = normalize_matrix(g);
  long n = 1;
  while (true) {
    const Vector sigma = singular_values(acc.unit);
    if (!(sigma(sigma.size() - 1) > 0))
      throw std::domain_error("eigen_via_sigma_limit: power became numerically singular");
    Vector rates = (sigma.array().log() + acc.log_scale).matrix() / static_cast<double>(n);
    out.exponents.push_back(n);
    out.rate_trace.push_back(rates);
    if (2 * n > n_max) break;
    acc = nproduct(acc, acc);
    n *= 2;
  }
  out.log_rates = out.rate_trace.back();
  return out;
}

namespace {

/// Singular values of (I - P_Y) X are the sines of the principal angles
/// between the subspaces; this form stays accurate for small angles.
Vector principal_angle_sines(const ProjSubspace& x, const ProjSubspace& y) {
  const Matrix residual = x.frame - y.frame * (y.frame.transpose() * x.frame);
  return Eigen::JacobiSVD<Matrix>(residual).singularValues();
}

}  // namespace

double proj_distance(const ProjSubspace& x, const ProjSubspace& y) {
  if (x.dim() != y.dim() || x.ambient() != y.ambient())
    throw std::invalid_argument("proj_distance: dimension mismatch");
  return std::min(1.0, principal_angle_sines(x, y)(0));
}

double min_principal_angle_sin(const ProjSubspace& x, const ProjSubspace& y) {
  const Vector s = principal_angle_sines(x, y);
  return std::min(1.0, s(s.size() - 1));
}

double line_hyperplane_angle_sin(const ProjSubspace& line, const ProjSubspace& hyperplane) {
  if (line.dim() != 1 || hyperplane.dim() != hyperplane.ambient() - 1)
    throw std::invalid_argument("expected a line and a hyperplane");
  return min_principal_angle_sin(line, hyperplane);
}

Matrix wedge2(const Matrix& m) {
  require_square(m);
  const int d = static_cast<int>(m.rows());
  const int n = d * (d - 1) / 2;
  Matrix out(n, n);
  int row = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j, ++row) {
      int col = 0;
      for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l, ++col)
          out(row, col) = m(i, k) * m(j, l) - m(i, l) * m(j, k);
    }
  return out;
}

double log_gap_top(const Matrix& g) {
  const double s1 = singular_values(g)(0);
  const double s1_wedge = singular_values(wedge2(g))(0);
  return 2.0 * std::log(s1) - std::log(s1_wedge);
}

double log_gap_full(const Matrix& g) {
  const double s1 = singular_values(g)(0);
  const double s1_inv = singular_values(g.inverse())(0);
  return std::log(s1) + std::log(s1_inv);
}

namespace {

double spectral_radius(const Matrix& g) {
  Eigen::EigenSolver<Matrix> es(g, false);
  return es.eigenvalues().array().abs().maxCoeff();
}

}  // namespace

double log_eigen_gap_top(const Matrix& g) {
  return 2.0 * std::log(spectral_radius(g)) - std::log(spectral_radius(wedge2(g)));
}

double log_eigen_gap_full(const Matrix& g) {
  return std::log(spectral_radius(g)) + std::log(spectral_radius(g.inverse()));
}

bool is_P1_regular_gaps(double log_gap_12, double log_gap_1d, double c_big, double c_small) {
  return log_gap_12 >= c_big * log_gap_1d - c_small;
}

bool is_P1_regular(const Matrix& g, double c_big, double c_small) {
  return is_P1_regular_gaps(log_gap_top(g), log_gap_full(g), c_big, c_small);
}

double check_A5(const Matrix& a, const Matrix& b, int p) {
  const Vector sa = singular_values(a);
  const Vector sba = singular_values(b * a);
  require_gap(sa, p, "check_A5(A)");
  require_gap(sba, p, "check_A5(BA)");
  const ProjSubspace moved = subspace_from_span(b * u_subspace(a, p).frame);
  const double lhs = proj_distance(moved, u_subspace(b * a, p));
  const Vector sb = singular_values(b);
  const double rhs = (sb(0) / sb(sb.size() - 1)) * (sa(p) / sa(p - 1));
  return rhs - lhs;
}

A7Residuals check_A7(const Matrix& a, const Matrix& b, int p) {
  const int d = static_cast<int>(a.rows());
  const Vector sa = singular_values(a);
  const Vector sb = singular_values(b);
  const Vector sab = singular_values(a * b);
  require_gap(sb, p, "check_A7(B)");
  require_gap(sa, p, "check_A7(A)");
  A7Residuals out;
  out.sin_alpha = min_principal_angle_sin(u_subspace(b, p), s_subspace(a, d - p));
  out.lower = sab(p - 1) - out.sin_alpha * sa(p - 1) * sb(p - 1);
  if (out.sin_alpha > 0)
    out.upper = sa(p) * sb(p) / out.sin_alpha - sab(p);
  else
    out.upper = std::numeric_limits<double>::infinity();
  return out;
}

NormalizedMatrix normalize_matrix(const Matrix& m) {
  const double n = m.norm();
  if (!(n > 0)) throw std::invalid_argument("cannot normalize the zero matrix");
  return {m / n, std::log(n)};
}

NormalizedMatrix nproduct(const NormalizedMatrix& a, const Matrix& b) {
  NormalizedMatrix out = normalize_matrix(a.unit * b);
  out.log_scale += a.log_scale;
  return out;
}

NormalizedMatrix nproduct(const NormalizedMatrix& a, const NormalizedMatrix& b) {
  NormalizedMatrix out = normalize_matrix(a.unit * b.unit);
  out.log_scale += a.log_scale + b.log_scale;
  return out;
}

}  // namespace reldom
