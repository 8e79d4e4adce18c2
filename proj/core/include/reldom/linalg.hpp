#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace reldom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A singular-value gap required by an operation is absent (within tolerance).
struct GapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A gap at index i exists when sigma_i / sigma_{i+1} >= 1 + kGapTolerance.
inline constexpr double kGapTolerance = 1e-8;

/// g = K exp(diag(log_sigma)) L with K, L orthogonal and log_sigma nonincreasing.
struct CartanData {
  Matrix k;
  Vector log_sigma;
  Matrix l;

  Matrix reconstruct() const { return k * log_sigma.array().exp().matrix().asDiagonal() * l; }
};

CartanData cartan(const Matrix& g);
Vector singular_values(const Matrix& g);

/// Subspace of projective space, stored as an orthonormal frame (d x p).
struct ProjSubspace {
  Matrix frame;

  int dim() const { return static_cast<int>(frame.cols()); }
  int ambient() const { return static_cast<int>(frame.rows()); }
};

ProjSubspace subspace_from_span(const Matrix& span_columns);

/// Span of the i most expanded axes of g (the first i columns of K).
/// Throws GapError when sigma_i / sigma_{i+1} is below tolerance.
ProjSubspace u_subspace(const Matrix& g, int i);
/// S_i(g) = U_i(g^{-1}).
ProjSubspace s_subspace(const Matrix& g, int i);

/// Eigenvalue moduli, sorted nonincreasing.
Vector eigen_moduli(const Matrix& g);

struct SigmaLimitResult {
  std::vector<long> exponents;       // 1, 2, 4, ..., n_max
  std::vector<Vector> rate_trace;    // (1/n) log sigma(g^n) at each exponent
  Vector log_rates;                  // the final entry of the trace
};

/// The per-axis growth rates (1/n) log sigma_i(g^n), computed by normalized
/// repeated squaring; converges to log |lambda_i(g)|.
SigmaLimitResult eigen_via_sigma_limit(const Matrix& g, long n_max);

/// sin of the largest principal angle; a metric on each Grassmannian.
double proj_distance(const ProjSubspace& x, const ProjSubspace& y);
/// sin of the smallest principal angle; zero iff the subspaces intersect.
double min_principal_angle_sin(const ProjSubspace& x, const ProjSubspace& y);
/// sin of the angle between a line and a hyperplane.
double line_hyperplane_angle_sin(const ProjSubspace& line, const ProjSubspace& hyperplane);

/// log sigma_1/sigma_2 via the induced map on 2-vectors (accurate for any gap size).
double log_gap_top(const Matrix& g);
/// log sigma_1/sigma_d via the inverse.
double log_gap_full(const Matrix& g);
/// log lambda_1/lambda_2 and log lambda_1/lambda_d, same wedge/inverse routes.
double log_eigen_gap_top(const Matrix& g);
double log_eigen_gap_full(const Matrix& g);

/// Induced action on the second exterior power, pair basis (i<j) in
/// lexicographic order.
Matrix wedge2(const Matrix& m);

/// log sigma_1/sigma_2 >= c_big * log sigma_1/sigma_d - c_small.
bool is_P1_regular(const Matrix& g, double c_big, double c_small);
bool is_P1_regular_gaps(double log_gap_12, double log_gap_1d, double c_big, double c_small);

/// Residual of d(B U_p(A), U_p(BA)) <= (sigma_1/sigma_d)(B) (sigma_{p+1}/sigma_p)(A);
/// nonnegative when the bound holds.
double check_A5(const Matrix& a, const Matrix& b, int p);

struct A7Residuals {
  double sin_alpha = 0;   // angle between U_p(B) and S_{d-p}(A)
  double lower = 0;       // sigma_p(AB) - sin(alpha) sigma_p(A) sigma_p(B)
  double upper = 0;       // sigma_{p+1}(A) sigma_{p+1}(B) / sin(alpha) - sigma_{p+1}(AB)
};

A7Residuals check_A7(const Matrix& a, const Matrix& b, int p);

/// exp(log_scale) * unit; keeps long products inside double range.
struct NormalizedMatrix {
  Matrix unit;
  double log_scale = 0;
};

NormalizedMatrix normalize_matrix(const Matrix& m);
NormalizedMatrix nproduct(const NormalizedMatrix& a, const Matrix& b);
NormalizedMatrix nproduct(const NormalizedMatrix& a, const NormalizedMatrix& b);

}  // namespace reldom
