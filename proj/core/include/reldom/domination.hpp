#pragma once

#include "reldom/cusped_graph.hpp"
#include "reldom/gap_fit.hpp"
#include "reldom/representation.hpp"

namespace reldom {

enum class LengthMode { Bracket, Exact };

struct FitOptions {
  LengthMode mode = LengthMode::Bracket;
  double mu_cap = -1;  // upper fits refute above this slope when >= 0
  std::int64_t vertex_budget = 4'000'000;
};

/// Exponential lower bound on the top singular value gap against cusped
/// length. Fitted against the bracket's upper end (or the exact value), so a
/// certificate is conservative with respect to estimator slack.
GapFit fit_d_minus(const Representation& rep, const std::vector<Word>& words,
                   const FitOptions& opts = {});

/// Exponential upper bound on the full singular value spread against cusped
/// length, fitted against the bracket's lower end.
GapFit fit_d_plus(const Representation& rep, const std::vector<Word>& words,
                  const FitOptions& opts = {});

struct PeripheralSpectrum {
  std::string word;
  double log_lambda_spread = 0;  // log lambda_1/lambda_d via the power-rate identity
  bool unit_moduli = false;      // |log spread| below tolerance
};

struct LambdaFitOptions {
  int rate_power = 1L << 20;   // exponent used for the eigenvalue-rate identity
  int stable_n_max = 256;      // powers probed for the stable-length bracket
  double unit_moduli_tol = 1e-9;
  double mu_cap = -1;
};

struct LambdaFits {
  GapFit lower;  // Dlambda-
  GapFit upper;  // Dlambda+
  std::vector<PeripheralSpectrum> peripheral;  // words of exactly-zero stable length
  bool peripheral_ok = true;                   // all peripheral spectra have unit moduli
};

/// Eigenvalue-gap analogues fitted against stable cusped length brackets.
/// Words conjugate into a peripheral subgroup have stable length exactly
/// zero (cyclic reduction is exact here); they are checked for unit
/// eigenvalue moduli instead of contributing slope.
LambdaFits fit_d_lambda(const Representation& rep, const std::vector<Word>& words,
                        const LambdaFitOptions& opts = {});

struct UniqueLimitsReport {
  bool conclusive = false;
  bool unique = false;
  ProjSubspace line;        // agreed U_1 limit when unique
  ProjSubspace hyperplane;  // agreed U_{d-1} limit when unique
  double line_mismatch = 0;
  double hyperplane_mismatch = 0;
  std::vector<double> forward_trace;  // consecutive U_1 step sizes along s^n
  std::vector<double> backward_trace;
};

/// Compares the attracting line / hyperplane limits along s^n and s^{-n}.
UniqueLimitsReport check_unique_limits(const Representation& rep, int peripheral_id, long n_max,
                                       double tol = 1e-9);

struct TransversalityConfig {
  Word g, h;
  int p_left = 0, p_right = 0;
  double sin_angle = 0;
};

struct TransversalityOptions {
  int sample_count = 1000;
  int max_word_len = 5;
  int tail_depth = 5;
  QgParams qg{4, 4};
  double delta0_floor = 0;
  std::uint64_t seed = 1;
  long limit_n_max = 1L << 16;
};

struct TransversalityReport {
  double min_sin = 1;
  int checked = 0;
  int filtered = 0;  // sampled configurations rejected by the path condition
  bool positive = false;
  TransversalityConfig argmin;
};

/// Minimum sin-angle between translated peripheral limit lines and
/// hyperplanes over sampled quasigeodesic configurations.
TransversalityReport check_uniform_transversality(const Representation& rep,
                                                  const TransversalityOptions& opts);

/// The quasigeodesic window realizing a peripheral-tail configuration
///   ... s_P^{-e_k} ... e, g, g h, g h s_{P'}^{+e_k} ...
/// with doubling tail exponents. Exposed for tests and sweeps.
PathWindow transversality_window(const GeneratorSet& gens, const Word& g, const Word& h,
                                 int p_left, int p_right, int tail_depth);

struct FlagConvergenceReport {
  std::vector<double> step_u1;    // d(U_1(B_n), U_1(B_{n+1})), backward products
  std::vector<double> step_dual;  // the U_{d-1} forward analogue
  double slope = 0;               // least-squares fit of log step_u1 against n
  double intercept = 0;
  double r_squared = 0;
  int defined_points = 0;
  int excluded = 0;  // gap-undefined or below the noise floor
};

/// Convergence rate of the most-expanded line along the matrix sequence of a
/// path window, measured at basepoint k.
FlagConvergenceReport measure_flag_convergence(const Representation& rep, const PathWindow& path,
                                               int k, int n_max, double noise_floor = 1e-12);

struct RayDescriptor {
  Word prefix;
  Word period;
};

struct LimitSampleReport {
  bool converged = false;
  ProjSubspace line;
  ProjSubspace hyperplane;
  std::vector<double> line_trace;
  double last_step = 0;
};

/// Limits of U_1 and U_{d-1} along prefix * period^n.
LimitSampleReport sample_limit_map(const Representation& rep, const RayDescriptor& ray, int n_max,
                                   double tol = 1e-10);

}  // namespace reldom
