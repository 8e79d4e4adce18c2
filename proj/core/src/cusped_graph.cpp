#include "reldom/cusped_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <set>

namespace reldom {

namespace {

int ceil_log2(long x) {
  int m = 0;
  long p = 1;
  while (p < x) {
    p *= 2;
    ++m;
  }
  return m;
}

/// Rough vertex-count estimate used to respect build budgets.
double estimated_vertex_count(int rank, int radius) {
  double total = 1, layer = 1;
  for (int j = 1; j <= radius; ++j) {
    layer *= (j == 1) ? 2.0 * rank : 2.0 * rank - 1.0;
    total += layer;
  }
  return 3.0 * total;  // Cayley ball plus horoball overhead
}

}  // namespace

CuspedGraph::CuspedGraph(const GeneratorSet& gens, CuspedGraphParams params) : params_(params) {
  if (params_.cayley_radius < 1) throw std::invalid_argument("cayley_radius must be >= 1");
  if (params_.depth_cap < 0) throw std::invalid_argument("depth_cap must be >= 0");
  build(gens);
}

void CuspedGraph::build(const GeneratorSet& gens) {
  const int R = params_.cayley_radius;
  const int L = letter_count_ = gens.letter_count();

  parent_ = {-1};
  via_ = {0};
  std::vector<int> word_len = {0};
  for (int id = 0; id < static_cast<int>(parent_.size()); ++id) {
    if (word_len[id] == R) continue;
    for (Letter x = 0; x < L; ++x) {
      if (id != 0 && x == inverse_letter(via_[id])) continue;
      parent_.push_back(id);
      via_.push_back(x);
      word_len.push_back(word_len[id] + 1);
    }
  }
  n_cayley_ = static_cast<int>(parent_.size());
  children_.assign(static_cast<std::size_t>(n_cayley_) * L, -1);
  for (int id = 1; id < n_cayley_; ++id)
    children_[static_cast<std::size_t>(parent_[id]) * L + via_[id]] = id;

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n_cayley_) * 2);
  for (int id = 1; id < n_cayley_; ++id) edges.emplace_back(parent_[id], id);

  int next_id = n_cayley_;
  for (int p = 0; p < gens.peripheral_count(); ++p) {
    const Letter sp = gens.peripheral_letter(p);
    const Letter sp_inv = inverse_letter(sp);
    for (int rep = 0; rep < n_cayley_; ++rep) {
      if (rep != 0 && (via_[rep] == sp || via_[rep] == sp_inv)) continue;  // not a coset rep
      const int half = R - word_len[rep];
      if (half < 1) continue;
      const int width = 2 * half + 1;
      const int cap = std::min(params_.depth_cap, ceil_log2(width) + 1);
      if (cap < 1) continue;

      std::vector<int> level0(width);
      level0[half] = rep;
      for (int k = 1; k <= half; ++k) {
        level0[half + k] = children_[static_cast<std::size_t>(level0[half + k - 1]) * L + sp];
        level0[half - k] = children_[static_cast<std::size_t>(level0[half - k + 1]) * L + sp_inv];
      }

      const int base = next_id;
      next_id += width * cap;
      auto horo_id = [&](int slot, int level) { return base + slot * cap + (level - 1); };

      for (int slot = 0; slot < width; ++slot) {
        edges.emplace_back(level0[slot], horo_id(slot, 1));
        for (int lv = 1; lv < cap; ++lv)
          edges.emplace_back(horo_id(slot, lv), horo_id(slot, lv + 1));
      }
      for (int lv = 1; lv <= cap; ++lv) {
        const long reach = std::min<long>(1L << lv, width - 1);
        for (int slot = 0; slot < width; ++slot)
          for (long j = 1; j <= reach && slot + j < width; ++j)
            edges.emplace_back(horo_id(slot, lv), horo_id(slot + static_cast<int>(j), lv));
      }
    }
  }
  n_vertices_ = next_id;

  std::vector<std::int64_t> degree(n_vertices_ + 1, 0);
  for (auto [u, v] : edges) {
    ++degree[u + 1];
    ++degree[v + 1];
  }
  offsets_.assign(n_vertices_ + 1, 0);
  for (int i = 0; i < n_vertices_; ++i) offsets_[i + 1] = offsets_[i] + degree[i + 1];
  adjacency_.assign(static_cast<std::size_t>(offsets_[n_vertices_]), 0);
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges) {
    adjacency_[static_cast<std::size_t>(cursor[u]++)] = v;
    adjacency_[static_cast<std::size_t>(cursor[v]++)] = u;
  }
}

std::optional<int> CuspedGraph::cayley_vertex(const Word& w) const {
  int cur = 0;
  for (Letter l : w.letters()) {
    cur = children_[static_cast<std::size_t>(cur) * letter_count_ + l];
    if (cur < 0) return std::nullopt;
  }
  return cur;
}

Word CuspedGraph::cayley_word(int id) const {
  if (id < 0 || id >= n_cayley_) throw std::out_of_range("not a Cayley vertex");
  std::vector<Letter> rev;
  while (id != 0) {
    rev.push_back(via_[id]);
    id = parent_[id];
  }
  std::reverse(rev.begin(), rev.end());
  return Word::from_reduced(std::move(rev));
}

std::vector<int> CuspedGraph::bfs_distances(int source) const {
  std::vector<int> dist(n_vertices_, -1);
  std::vector<int> queue;
  queue.reserve(n_vertices_);
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (std::int64_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      const int v = adjacency_[static_cast<std::size_t>(e)];
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

void CuspedGraph::export_adjacency(std::ostream& os) const {
  for (int u = 0; u < n_vertices_; ++u)
    for (std::int64_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      const int v = adjacency_[static_cast<std::size_t>(e)];
      if (u < v) os << u << ' ' << v << '\n';
    }
}

CertifiedDistances certified_cusped_distances(const GeneratorSet& gens, const Word& source,
                                              const std::vector<Word>& targets,
                                              std::int64_t vertex_budget) {
  std::size_t max_len = source.size();
  for (const Word& t : targets) max_len = std::max(max_len, t.size());

  int radius = std::max(4, static_cast<int>(max_len));
  if (estimated_vertex_count(gens.rank(), static_cast<int>(max_len)) >
      static_cast<double>(vertex_budget))
    throw std::runtime_error("vertex budget too small to contain the query endpoints");
  while (radius > static_cast<int>(max_len) &&
         estimated_vertex_count(gens.rank(), radius) > static_cast<double>(vertex_budget))
    --radius;

  CertifiedDistances out;
  out.values.assign(targets.size(), CertifiedDistance{});
  std::optional<std::vector<long>> previous;
  CuspedGraphParams params{radius, ceil_log2(2L * radius) + 2};
  while (true) {
    CuspedGraph graph(gens, params);
    const auto dist = graph.bfs_distances(*graph.cayley_vertex(source));
    std::vector<long> current(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
      current[i] = dist[*graph.cayley_vertex(targets[i])];
    if (previous && *previous == current) {
      for (std::size_t i = 0; i < targets.size(); ++i) out.values[i] = {current[i], true};
      out.final_params = params;
      return out;
    }
    previous = std::move(current);
    out.final_params = params;
    const CuspedGraphParams next{params.cayley_radius + 2, params.depth_cap + 1};
    if (estimated_vertex_count(gens.rank(), next.cayley_radius) >
        static_cast<double>(vertex_budget)) {
      // Truncation distances only overestimate, so report an upper bound.
      for (std::size_t i = 0; i < targets.size(); ++i) out.values[i] = {(*previous)[i], false};
      return out;
    }
    params = next;
  }
}

CertifiedDistance exact_cusped_distance(const GeneratorSet& gens, const Word& g, const Word& h,
                                        std::int64_t vertex_budget) {
  return certified_cusped_distances(gens, g, {h}, vertex_budget).values[0];
}

CuspedLengthFn exact_cusped_length_fn(const GeneratorSet& gens, std::int64_t vertex_budget) {
  struct Cache {
    std::optional<CuspedGraph> small, large;
    std::vector<int> dist_small, dist_large;
  };
  auto cache = std::make_shared<Cache>();
  return [&gens, vertex_budget, cache](const Word& w) {
    CuspedLengthBracket b = cusped_length_estimate(gens, w);
    const int needed = static_cast<int>(w.size()) + 2;
    if (estimated_vertex_count(gens.rank(), needed + 2) > static_cast<double>(vertex_budget))
      return b;
    if (!cache->small || cache->small->params().cayley_radius < needed) {
      CuspedGraphParams ps{needed, ceil_log2(2L * needed) + 2};
      cache->small.emplace(gens, ps);
      cache->dist_small = cache->small->bfs_distances(0);
      CuspedGraphParams pl{needed + 2, ps.depth_cap + 1};
      cache->large.emplace(gens, pl);
      cache->dist_large = cache->large->bfs_distances(0);
    }
    const auto id_s = cache->small->cayley_vertex(w);
    const auto id_l = cache->large->cayley_vertex(w);
    if (id_s && id_l && cache->dist_small[*id_s] == cache->dist_large[*id_l])
      b.exact = cache->dist_large[*id_l];
    return b;
  };
}

DeltaEstimate estimate_delta(const CuspedGraph& graph, int quadruple_count, std::uint64_t seed) {
  DeltaEstimate out;
  const int v = graph.vertex_count();
  if (v == 0 || quadruple_count <= 0) return out;
  std::mt19937_64 rng(seed);
  const int pool_n = std::min(v, 40);
  std::set<int> chosen;
  std::uniform_int_distribution<int> pick(0, v - 1);
  chosen.insert(0);
  while (static_cast<int>(chosen.size()) < pool_n) chosen.insert(pick(rng));
  std::vector<int> pool(chosen.begin(), chosen.end());
  std::vector<std::vector<int>> rows;
  rows.reserve(pool.size());
  for (int id : pool) rows.push_back(graph.bfs_distances(id));

  auto product = [&](int i, int j, int base) {
    // Gromov product of pool[i], pool[j] with respect to pool[base].
    return 0.5 * (rows[base][pool[i]] + rows[base][pool[j]] - rows[i][pool[j]]);
  };

  std::uniform_int_distribution<int> pp(0, pool_n - 1);
  double worst = 0;
  for (int q = 0; q < quadruple_count; ++q) {
    const int w = pp(rng), x = pp(rng), y = pp(rng), z = pp(rng);
    const double defect = std::min(product(x, y, w), product(y, z, w)) - product(x, z, w);
    worst = std::max(worst, defect);
  }
  out.delta = worst;
  out.quadruples = quadruple_count;
  out.pool = pool_n;
  return out;
}

TranslationSample sample_translation_length(const CuspedGraph& graph, const Word& w,
                                            int sample_count, std::uint64_t seed) {
  TranslationSample out;
  out.value = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, graph.cayley_count() - 1);
  for (int s = 0; s < sample_count; ++s) {
    const int base_id = (s == 0) ? 0 : pick(rng);
    const Word x = graph.cayley_word(base_id);
    const auto translated = graph.cayley_vertex(concat(w, x));
    if (!translated) continue;
    const auto dist = graph.bfs_distances(base_id);
    out.value = std::min(out.value, static_cast<double>(dist[*translated]));
    ++out.samples;
  }
  if (out.samples == 0) out.value = 0;
  return out;
}

StableCuspedLength stable_cusped_length(const GeneratorSet& gens, const Word& w,
                                        const StableCuspedOptions& opts) {
  if (opts.n_max < 1) throw std::invalid_argument("n_max must be positive");
  StableCuspedLength out;
  if (w.empty()) return out;
  out.upper = std::numeric_limits<double>::infinity();
  double lower = 0;
  Word p;
  for (int n = 1; n <= opts.n_max; ++n) {
    p = concat(p, w);
    const auto bracket = cusped_length_estimate(gens, p);
    double upper_n = bracket.hi;
    if (static_cast<int>(p.size()) <= opts.bfs_radius_budget) {
      const auto d = exact_cusped_distance(gens, Word{}, p, opts.vertex_budget);
      upper_n = std::min(upper_n, static_cast<double>(d.distance));
      d.confirmed ? ++out.exact_powers : ++out.unconfirmed_powers;
    }
    out.upper = std::min(out.upper, upper_n / n);
    if (opts.graph) {
      const auto ts = sample_translation_length(*opts.graph, p, opts.translation_samples,
                                                opts.seed + static_cast<std::uint64_t>(n));
      if (ts.samples > 0) lower = std::max(lower, (ts.value - 16.0 * opts.delta_hat) / n);
    }
  }
  out.lower = std::max(0.0, lower);
  return out;
}

Interval gromov_product(const GeneratorSet& gens, const Word& x, const Word& y, const Word& base,
                        Metric metric, const CuspedLengthFn& length) {
  if (metric == Metric::Word) {
    const double v = gromov_product_word(x, y, base);
    return {v, v};
  }
  const CuspedLengthFn len =
      length ? length : [&gens](const Word& u) { return cusped_length_estimate(gens, u); };
  return gromov_product_cusped(x, y, base, len);
}

TranslationRelationReport check_translation_length_relation(const GeneratorSet& gens,
                                                            const Word& w,
                                                            const CuspedGraph& graph,
                                                            double delta_hat, int n_max,
                                                            std::uint64_t seed, double tolerance) {
  TranslationRelationReport out;
  out.delta_hat = delta_hat;
  StableCuspedOptions opts;
  opts.n_max = n_max;
  opts.graph = &graph;
  opts.delta_hat = delta_hat;
  opts.seed = seed;
  out.stable_upper = stable_cusped_length(gens, w, opts).upper;
  out.translation_upper = sample_translation_length(graph, w, 16, seed).value;
  out.violation = out.translation_upper - 16.0 * delta_hat > out.stable_upper + tolerance;
  return out;
}

ProductStableGapReport gromov_product_stable_length_gap(const GeneratorSet& gens, const Word& w,
                                                        int n_max, Metric metric,
                                                        const CuspedLengthFn& length,
                                                        double tolerance) {
  ProductStableGapReport out;
  const Word w_inv = w.inverse();
  Word p;
  for (int n = 1; n <= n_max; ++n) {
    p = concat(p, w);
    const Interval g = gromov_product(gens, p, w_inv, Word{}, metric, length);
    out.max_twice_product = std::max(out.max_twice_product, 2.0 * g.hi);
  }
  if (metric == Metric::Word) {
    out.length = static_cast<double>(w.size());
    out.stable_upper = stable_word_length(w, n_max).hi;
  } else {
    const CuspedLengthFn len =
        length ? length : [&gens](const Word& u) { return cusped_length_estimate(gens, u); };
    out.length = len(w).tightest_lo();
    StableCuspedOptions opts;
    opts.n_max = n_max;
    out.stable_upper = stable_cusped_length(gens, w, opts).upper;
  }
  out.holds = out.max_twice_product >= out.length - out.stable_upper - tolerance;
  return out;
}

}  // namespace reldom
