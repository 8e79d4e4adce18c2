#pragma once

#include "reldom/representation.hpp"

#include <string>

namespace reldom {

/// Ball in projective space, sin-angle metric, around either a line or a
/// hyperplane (a tube).
struct ProjNeighborhood {
  enum class Kind { LineBall, HyperplaneTube };
  Kind kind = Kind::LineBall;
  ProjSubspace center;
  double radius = 0;
  std::string label;
};

/// sin-angle distance from a line to the neighborhood's center object.
double neighborhood_distance(const ProjNeighborhood& nb, const ProjSubspace& line);

/// Weak ping-pong configuration: proximal generators with attracting balls
/// A_i^+- and repelling tubes B_i^+-, unipotent generators with one-sided
/// attracting balls C_j^+- around U_1(S_j^{+-1}) (their closures meet at the
/// parabolic fixed line) and a repelling tube R_j around im(S_j - I).
///
/// The repelling tube is what a unipotent power sweep actually needs to be
/// excluded in d >= 3: a ball around the fixed line does not trap the second
/// singular direction, whose image under S_j^k stays far from the fixed line
/// for every k.
struct PingPongDatum {
  int dimension = 3;
  std::vector<Matrix> proximal;
  std::vector<Matrix> unipotent;
  std::vector<long> proximal_exponent;
  std::vector<long> unipotent_exponent;
  std::vector<ProjNeighborhood> attract_pos, attract_neg;  // A_i^+- (line balls)
  std::vector<ProjNeighborhood> repel_pos, repel_neg;      // B_i^+- (tubes)
  std::vector<ProjNeighborhood> para_pos, para_neg;        // C_j^+- (line balls)
  std::vector<ProjNeighborhood> para_repel;                // R_j (tubes)
  double epsilon0 = 0;
  int power_sweep = 12;  // unipotent inclusions checked for |k| up to this
};

/// Top eigenline; requires a strict eigenvalue-modulus gap.
ProjSubspace attracting_line(const Matrix& t);
/// The t-invariant complement of the attracting line.
ProjSubspace repelling_hyperplane(const Matrix& t);
bool is_proximal(const Matrix& t);
bool is_biproximal(const Matrix& t);

/// lim U_1(S^n) = image of (S - I)^{m-1}, m the nilpotency index; requires a
/// unique largest Jordan block.
ProjSubspace unipotent_attracting_line(const Matrix& s, double tol = 1e-9);

enum class CertStatus { Certified, Refuted, Inconclusive };

struct InclusionReport {
  std::string label;
  double worst_margin = 0;  // target radius minus worst image distance
  double slack = 0;         // worst_margin minus the Lipschitz sampling correction
  CertStatus status = CertStatus::Inconclusive;
};

struct PingPongCertificate {
  CertStatus status = CertStatus::Inconclusive;
  double slack = 0;  // min slack over all inclusions; positive when certified
  double mesh = 0;   // estimated covering radius of the sphere sample
  int sphere_samples = 0;
  std::vector<InclusionReport> inclusions;
  std::vector<std::string> disjointness_failures;
  std::vector<std::string> proximity_failures;  // generators whose power limits miss epsilon0
  double min_target_separation = 0;
  double epsilon0_attained = 0;  // worst sampled proximity of power limits
  std::string witness;
};

/// Samples projective space and certifies every required inclusion with a
/// Lipschitz slack margin, checks the pairwise disjointness table, and
/// validates the epsilon0 proximity conditions.
PingPongCertificate verify_pingpong(const PingPongDatum& datum, int sphere_samples,
                                    std::uint64_t seed = 7);

struct PowerUpOptions {
  double epsilon0 = 0.05;
  int sphere_samples = 20000;
  long max_exponent = 1 << 18;
  int power_sweep = 12;
  std::uint64_t seed = 7;
};

/// Replaces the generators by powers (doubling search) until verify_pingpong
/// certifies the configuration at the requested epsilon0.
PingPongDatum power_up(const std::vector<Matrix>& proximal, const std::vector<Matrix>& unipotent,
                       const PowerUpOptions& opts = {});

/// Free generating set with the unipotent letters tagged peripheral, plus
/// the representation sending letters to the powered matrices. Refuses a
/// datum that does not certify.
std::pair<GeneratorSet, Representation> build_relative_structure(const PingPongDatum& datum,
                                                                 int sphere_samples = 20000);

struct GapPolynomialFit {
  double spread_slope = 0, spread_r2 = 0;  // log sigma_1/sigma_d(S^n) against log n
  double top_slope = 0, top_r2 = 0;        // log sigma_1/sigma_2(S^n) against log n
  bool degenerate = false;                 // ratios stay at 1 (e.g. the identity)
};

/// Log-log growth fits of the singular value ratios of unipotent powers.
GapPolynomialFit unipotent_gap_polynomials(const Matrix& s, long n_max);

}  // namespace reldom
