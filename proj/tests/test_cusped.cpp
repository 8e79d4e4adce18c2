#include "reldom/cusped_graph.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace reldom;

namespace {

GeneratorSet demo_gens() {
  GeneratorSet g;
  g.add_generator("a");
  g.add_generator("s", 0);
  return g;
}

GeneratorSet cyclic_peripheral_gens() {
  GeneratorSet g;
  g.add_generator("s", 0);
  return g;
}

}  // namespace

TEST_CASE("horoball distance closed form") {
  CHECK(horoball_distance(3, 5, 0) == 2);
  CHECK(horoball_distance(0, 0, 1) == 1);
  // base distance 64: peak at level 5 or 6 gives 12
  CHECK(horoball_distance(0, 0, 64) == 12);
  CHECK_THROWS_AS(horoball_distance(-1, 0, 1), std::invalid_argument);
}

TEST_CASE("horoball distance equals BFS on a path base") {
  const testing::HoroballGraphOracle oracle(65, 8);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> base(0, 64), level(0, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const int i = base(rng), j = base(rng), ki = level(rng), kj = level(rng);
    const long expected = oracle.bfs_distance(oracle.id(i, ki), oracle.id(j, kj));
    CHECK(horoball_distance(ki, kj, std::abs(i - j)) == expected);
  }
}

TEST_CASE("horoball distance is a metric on a small truncation") {
  const int width = 17, depth = 4;
  auto dist = [&](int i, int ki, int j, int kj) {
    return horoball_distance(ki, kj, std::abs(i - j));
  };
  for (int i = 0; i < width; ++i)
    for (int ki = 0; ki <= depth; ++ki)
      for (int j = 0; j < width; ++j)
        for (int kj = 0; kj <= depth; ++kj) {
          const long d = dist(i, ki, j, kj);
          CHECK((d == 0) == (i == j && ki == kj));
          CHECK(d == dist(j, kj, i, ki));
        }
  // triangle inequality on a random sample of triples
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> b(0, width - 1), l(0, depth);
  for (int trial = 0; trial < 4000; ++trial) {
    const int i = b(rng), j = b(rng), k = b(rng);
    const int ki = l(rng), kj = l(rng), kk = l(rng);
    CHECK(dist(i, ki, k, kk) <= dist(i, ki, j, kj) + dist(j, kj, k, kk));
  }
}

TEST_CASE("cusped length estimate") {
  const GeneratorSet g = demo_gens();
  SUBCASE("no peripheral letters") {
    const auto b = cusped_length_estimate(g, parse_word(g, "a a a"));
    CHECK(b.modified_length == doctest::Approx(3));
    CHECK(b.lo == doctest::Approx(1));
    CHECK(b.hi == doctest::Approx(12));
  }
  SUBCASE("single long excursion uses the damped length") {
    const auto b = cusped_length_estimate(g, power(parse_word(g, "s"), 16));
    CHECK(b.modified_length == doctest::Approx(std::log(16.0)));
    CHECK(b.modified_length == doctest::Approx(2.7725887));
  }
  SUBCASE("mixed word") {
    const Word w = parse_word(g, "a s s s s a s s s s s s s s s a");
    const auto b = cusped_length_estimate(g, w);
    CHECK(b.modified_length == doctest::Approx(3 + std::log(4.0) + std::log(9.0)));
  }
  SUBCASE("identity") {
    const auto b = cusped_length_estimate(g, Word{});
    REQUIRE(b.exact.has_value());
    CHECK(*b.exact == 0);
  }
  SUBCASE("short excursions are damped to one") {
    const auto b = cusped_length_estimate(g, parse_word(g, "s s"));
    CHECK(b.modified_length == doctest::Approx(1.0));  // max(log 2, 1)
  }
}

TEST_CASE("exact cusped distances via certified BFS") {
  const GeneratorSet g = demo_gens();
  const Word s = parse_word(g, "s");
  SUBCASE("Cayley edge") {
    const auto d = exact_cusped_distance(g, Word{}, parse_word(g, "a"));
    CHECK(d.distance == 1);
    CHECK(d.confirmed);
  }
  SUBCASE("peripheral powers match the horoball formula") {
    for (int k = 2; k <= 3; ++k) {
      const long n = 1L << k;
      const auto d = exact_cusped_distance(g, Word{}, power(s, n));
      CHECK(d.confirmed);
      CHECK(d.distance == horoball_distance(0, 0, n));
    }
    // at s^8 the horoball route (6) strictly beats the direct path (8)
    CHECK(exact_cusped_distance(g, Word{}, power(s, 8)).distance == 6);
  }
  SUBCASE("mixed word lands in the certified bracket") {
    const Word w = concat(concat(parse_word(g, "a"), power(s, 8)), parse_word(g, "a^-1"));
    const auto d = exact_cusped_distance(g, Word{}, w);
    CHECK(d.confirmed);
    CHECK(d.distance == 1 + horoball_distance(0, 0, 8) + 1);
    const auto b = cusped_length_estimate(g, w);
    CHECK(static_cast<double>(d.distance) >= b.lo);
    CHECK(static_cast<double>(d.distance) <= b.hi);
  }
  SUBCASE("exhausting the truncation budget is loud") {
    CHECK_THROWS_AS(exact_cusped_distance(g, Word{}, power(s, 40), 50'000),
                    std::runtime_error);
  }
}

TEST_CASE("biLipschitz band and domination by word length on all short words") {
  const GeneratorSet g = demo_gens();
  const auto words = all_reduced_words(g, 5);
  std::vector<Word> targets(words.begin() + 1, words.end());
  const auto distances = certified_cusped_distances(g, Word{}, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    REQUIRE(distances.values[i].confirmed);
    const double d = static_cast<double>(distances.values[i].distance);
    const auto b = cusped_length_estimate(g, targets[i]);
    CHECK(d >= b.lo - 1e-12);
    CHECK(d <= b.hi + 1e-12);
    CHECK(d <= static_cast<double>(targets[i].size()));
  }
}

TEST_CASE("cusped distance is left invariant") {
  const GeneratorSet g = demo_gens();
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const Word u = random_reduced_word(g, 3, rng);
    const Word v = random_reduced_word(g, 3, rng);
    const Word x = random_reduced_word(g, 2, rng);
    const auto base = exact_cusped_distance(g, u, v);
    const auto moved = exact_cusped_distance(g, concat(x, u), concat(x, v));
    REQUIRE(base.confirmed);
    REQUIRE(moved.confirmed);
    CHECK(base.distance == moved.distance);
  }
}

TEST_CASE("stable cusped length") {
  const GeneratorSet g = demo_gens();
  SUBCASE("peripheral generator trends to zero") {
    StableCuspedOptions opts;
    opts.n_max = 8;
    const auto s = stable_cusped_length(g, parse_word(g, "s"), opts);
    CHECK(s.upper == doctest::Approx(6.0 / 8.0));  // horoball distance of s^8 is 6
    CHECK(s.lower == 0);
  }
  SUBCASE("free generator keeps rate one") {
    StableCuspedOptions opts;
    opts.n_max = 6;
    const auto s = stable_cusped_length(g, parse_word(g, "a"), opts);
    CHECK(s.upper == doctest::Approx(1.0));
  }
  SUBCASE("conjugate of a peripheral contains zero") {
    StableCuspedOptions opts;
    opts.n_max = 8;
    const auto s = stable_cusped_length(g, parse_word(g, "a s a^-1"), opts);
    CHECK(s.lower == 0);
    // (a s a^-1)^8 = a s^8 a^-1 at cusped distance 8, so the bound is 1
    CHECK(s.upper == doctest::Approx(1.0));
  }
  SUBCASE("upper bounds are nonincreasing in n_max") {
    double prev = 1e9;
    for (int n = 1; n <= 6; ++n) {
      StableCuspedOptions opts;
      opts.n_max = n;
      const double cur = stable_cusped_length(g, parse_word(g, "s"), opts).upper;
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("gromov products") {
  GeneratorSet g3;
  g3.add_generator("a");
  g3.add_generator("b");
  g3.add_generator("c");
  const Word e;
  CHECK(gromov_product_word(parse_word(g3, "a b"), parse_word(g3, "a b"), e) == 2);
  CHECK(gromov_product_word(parse_word(g3, "a"), parse_word(g3, "a^-1"), e) == 0);
  CHECK(gromov_product_word(parse_word(g3, "a b"), parse_word(g3, "a c"), e) == 1);

  const GeneratorSet g = demo_gens();
  const auto interval =
      gromov_product(g, parse_word(g, "a"), parse_word(g, "a"), e, Metric::Cusped);
  CHECK(interval.lo <= 1.0);
  CHECK(interval.hi >= 1.0);
}

TEST_CASE("four point delta estimates") {
  SUBCASE("a tree is exactly zero hyperbolic") {
    GeneratorSet free2;
    free2.add_generator("a");
    free2.add_generator("b");
    const CuspedGraph graph(free2, {5, 4});
    CHECK(estimate_delta(graph, 4000, 3).delta == 0);
  }
  SUBCASE("a single horoball has a small stable constant") {
    const CuspedGraph graph(cyclic_peripheral_gens(), {16, 5});
    const auto d1 = estimate_delta(graph, 500, 11);
    const auto d2 = estimate_delta(graph, 2000, 11);
    CHECK(d1.delta >= 0);
    CHECK(d2.delta >= d1.delta);  // same seed: the quadruple stream is a prefix
    CHECK(d2.delta <= 3.0);
  }
  SUBCASE("demo graph estimate is monotone in the sample") {
    const CuspedGraph graph(demo_gens(), {5, 4});
    const auto d1 = estimate_delta(graph, 300, 5);
    const auto d2 = estimate_delta(graph, 1200, 5);
    CHECK(d1.delta >= 0);
    CHECK(d2.delta >= d1.delta);
  }
}

TEST_CASE("translation length relation is never flagged on samples") {
  const GeneratorSet g = demo_gens();
  const CuspedGraph graph(g, {6, 5});
  const double delta_hat = estimate_delta(graph, 2000, 7).delta;
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const Word w = random_reduced_word(g, 1 + trial % 3, rng);
    const auto report = check_translation_length_relation(g, w, graph, delta_hat, 4, 100 + trial);
    CHECK(!report.violation);
  }
}

TEST_CASE("gromov product bounds the stable length defect") {
  const GeneratorSet g = demo_gens();
  SUBCASE("generator has no defect") {
    const auto r = gromov_product_stable_length_gap(g, parse_word(g, "a"), 6, Metric::Word);
    CHECK(r.max_twice_product == doctest::Approx(0));
    CHECK(r.length - r.stable_upper == doctest::Approx(0));
    CHECK(r.holds);
  }
  SUBCASE("conjugate pumps the product") {
    const auto r =
        gromov_product_stable_length_gap(g, parse_word(g, "a s a^-1"), 6, Metric::Word);
    CHECK(r.max_twice_product >= 2.0);
    CHECK(r.length - r.stable_upper == doctest::Approx(2.0));
    CHECK(r.holds);
  }
  SUBCASE("peripheral word in the cusped metric") {
    const auto r = gromov_product_stable_length_gap(g, power(parse_word(g, "s"), 4), 6,
                                                    Metric::Cusped);
    CHECK(r.holds);
  }
}

TEST_CASE("graph export emits one edge per line") {
  GeneratorSet free1;
  free1.add_generator("a");
  const CuspedGraph graph(free1, {2, 2});
  std::ostringstream os;
  graph.export_adjacency(os);
  std::istringstream is(os.str());
  std::string line;
  long lines = 0;
  while (std::getline(is, line)) {
    ++lines;
    std::istringstream ls(line);
    int u, v;
    REQUIRE((ls >> u >> v));
    CHECK(u < v);
    CHECK(v < graph.vertex_count());
  }
  CHECK(lines == graph.edge_count());
}
