#pragma once

#include "reldom/cusped_length.hpp"
#include "reldom/horoball.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>

namespace reldom {

struct CuspedGraphParams {
  int cayley_radius = 4;
  int depth_cap = 6;
};

/// Finite truncation of the cusped space of a free group with cyclic
/// peripheral subgroups: the Cayley ball of the given radius, with a
/// combinatorial horoball over every peripheral coset segment it meets.
/// Immutable once built; BFS queries are read-only.
class CuspedGraph {
public:
  CuspedGraph(const GeneratorSet& gens, CuspedGraphParams params);

  const CuspedGraphParams& params() const { return params_; }
  int vertex_count() const { return n_vertices_; }
  int cayley_count() const { return n_cayley_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(adjacency_.size()) / 2; }

  /// Vertex id of a Cayley-ball element, if inside the truncation.
  std::optional<int> cayley_vertex(const Word& w) const;
  Word cayley_word(int id) const;
  bool is_cayley(int id) const { return id < n_cayley_; }

  /// BFS distances from `source` to every vertex (-1: unreachable).
  std::vector<int> bfs_distances(int source) const;

  /// Plain adjacency list, one edge per line: "u v".
  void export_adjacency(std::ostream& os) const;

private:
  void build(const GeneratorSet& gens);

  CuspedGraphParams params_;
  int n_vertices_ = 0;
  int n_cayley_ = 0;
  int letter_count_ = 0;
  std::vector<int> parent_;        // Cayley tree parent (letter applied last)
  std::vector<Letter> via_;        // letter from parent to this word
  std::vector<int> children_;      // n_cayley * letter_count, -1 when absent
  std::vector<std::int64_t> offsets_;
  std::vector<int> adjacency_;
};

struct CertifiedDistance {
  long distance = -1;
  bool confirmed = false;
};

/// Exact cusped distance d_c(g, h) via BFS on adaptively enlarged
/// truncations. A value is confirmed when it is stable under one further
/// enlargement; when the vertex budget runs out the best known upper bound
/// is returned with confirmed = false.
CertifiedDistance exact_cusped_distance(const GeneratorSet& gens, const Word& g, const Word& h,
                                        std::int64_t vertex_budget = 8'000'000);

struct CertifiedDistances {
  std::vector<CertifiedDistance> values;
  CuspedGraphParams final_params;
};

/// Distances from one source to many targets, sharing the truncations.
CertifiedDistances certified_cusped_distances(const GeneratorSet& gens, const Word& source,
                                              const std::vector<Word>& targets,
                                              std::int64_t vertex_budget = 8'000'000);

/// A cusped-length oracle backed by the exact BFS, with the bracket
/// estimator as a fallback past the budget.
CuspedLengthFn exact_cusped_length_fn(const GeneratorSet& gens, std::int64_t vertex_budget);

struct DeltaEstimate {
  double delta = 0;  // max sampled four-point defect; a lower bound for the true constant
  int quadruples = 0;
  int pool = 0;
};

/// Hyperbolicity estimate by sampling the four-point condition.
DeltaEstimate estimate_delta(const CuspedGraph& graph, int quadruple_count, std::uint64_t seed);

struct TranslationSample {
  double value = 0;  // min over sampled basepoints of d(x, wx); upper bound for ell_X
  int samples = 0;
};

TranslationSample sample_translation_length(const CuspedGraph& graph, const Word& w,
                                            int sample_count, std::uint64_t seed);

struct StableCuspedOptions {
  int n_max = 8;
  int bfs_radius_budget = 12;  // exact BFS allowed while |w^n| fits this radius
  std::int64_t vertex_budget = 8'000'000;
  const CuspedGraph* graph = nullptr;  // enables the translation-length lower route
  double delta_hat = 0;
  int translation_samples = 12;
  std::uint64_t seed = 1;
};

struct StableCuspedLength {
  double upper = 0;          // min over n of the best upper bound for |w^n|_c / n
  double lower = 0;          // sampled translation-length route, clipped at 0
  int exact_powers = 0;      // how many powers used a confirmed BFS value
  int unconfirmed_powers = 0;
};

/// Bracket for the stable cusped length |w|_{c,inf} = lim |w^n|_c / n.
StableCuspedLength stable_cusped_length(const GeneratorSet& gens, const Word& w,
                                        const StableCuspedOptions& opts);

enum class Metric { Word, Cusped };

/// Gromov product <x, y> at `base`; exact in the word metric, an interval in
/// the cusped metric.
Interval gromov_product(const GeneratorSet& gens, const Word& x, const Word& y, const Word& base,
                        Metric metric, const CuspedLengthFn& length = {});

struct TranslationRelationReport {
  double translation_upper = 0;  // sampled upper bound for ell_X(w)
  double stable_upper = 0;
  double delta_hat = 0;
  bool violation = false;  // translation_upper - 16 delta_hat > stable_upper + tol
};

/// Checks the coarse equivalence of translation length and stable length,
/// one-sidedly (only a sound direction can be flagged).
TranslationRelationReport check_translation_length_relation(const GeneratorSet& gens,
                                                            const Word& w,
                                                            const CuspedGraph& graph,
                                                            double delta_hat, int n_max,
                                                            std::uint64_t seed,
                                                            double tolerance = 1e-9);

struct ProductStableGapReport {
  double max_twice_product = 0;  // max_n 2 <w^n, w^{-1}>_e
  double length = 0;             // |w| in the chosen metric (lower end if bracketed)
  double stable_upper = 0;
  bool holds = false;  // max_twice_product >= length - stable_upper - tol
};

/// Checks the Gromov-product lower bound for the defect |w| - |w|_inf.
ProductStableGapReport gromov_product_stable_length_gap(const GeneratorSet& gens, const Word& w,
                                                        int n_max, Metric metric,
                                                        const CuspedLengthFn& length = {},
                                                        double tolerance = 1e-9);

}  // namespace reldom
