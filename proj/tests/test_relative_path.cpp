#include "reldom/cusped_length.hpp"
#include "reldom/domination.hpp"

#include <doctest.h>

using namespace reldom;

namespace {

GeneratorSet demo_gens() {
  GeneratorSet g;
  g.add_generator("a");
  g.add_generator("b");
  g.add_generator("s", 0);
  return g;
}

/// Expanding-ring oracle for depth: scan outward from n and stop at the
/// first defined point outside every peripheral coset through gamma(n),
/// testing coset membership on the group level.
int depth_oracle(const GeneratorSet& gens, const Word& w, int n) {
  const int len = static_cast<int>(w.size());
  auto in_common_coset = [&](int m) {
    const Word quotient = concat(w.prefix(n).inverse(), w.prefix(m));
    if (quotient.empty()) return false;  // no excursion through distinct equal points
    auto id = gens.peripheral_of(quotient.letter(0));
    if (!id) return false;
    for (Letter l : quotient.letters())
      if (gens.peripheral_of(l) != id) return false;
    // Membership counts only if the subpath between the points stays in the
    // coset, which for prefix paths of reduced words it does.
    return true;
  };
  // A point is "inside" when one of its neighbors is in a common coset.
  auto inside = [&](int m) {
    return (m > 0 && in_common_coset(m - 1)) || (m < len && in_common_coset(m + 1));
  };
  if (!inside(n)) return 0;
  for (int d = 1; d <= len; ++d) {
    const bool left_ok = n - d >= 0 && !in_common_coset(n - d);
    const bool right_ok = n + d <= len && !in_common_coset(n + d);
    if (left_ok || right_ok) return d;
  }
  return std::min(len - n, n);
}

}  // namespace

TEST_CASE("excursion decomposition") {
  const GeneratorSet g = demo_gens();
  SUBCASE("single run") {
    const auto p = decompose_relative(g, parse_word(g, "a s s a"));
    REQUIRE(p.excursions.size() == 1);
    CHECK(p.excursions[0] == Excursion{1, 2, 0});
  }
  SUBCASE("fully peripheral") {
    const auto p = decompose_relative(g, parse_word(g, "s s s"));
    REQUIRE(p.excursions.size() == 1);
    CHECK(p.excursions[0] == Excursion{0, 2, 0});
  }
  SUBCASE("two runs") {
    const auto p = decompose_relative(g, parse_word(g, "a s a s^-1 s^-1 b"));
    REQUIRE(p.excursions.size() == 2);
    CHECK(p.excursions[0] == Excursion{1, 1, 0});
    CHECK(p.excursions[1] == Excursion{3, 4, 0});
  }
  SUBCASE("no peripheral letters") {
    CHECK(decompose_relative(g, parse_word(g, "a b a")).excursions.empty());
  }
}

TEST_CASE("concatenating the pieces reproduces the word") {
  const GeneratorSet g = demo_gens();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Word w = random_reduced_word(g, 14, rng);
    const auto p = decompose_relative(g, w);
    // excursions are disjoint, ordered, and tagged consistently
    int prev_end = -1;
    std::size_t covered = 0;
    for (const auto& e : p.excursions) {
      CHECK(e.first > prev_end);
      prev_end = e.last;
      covered += e.last - e.first + 1;
      for (int i = e.first; i <= e.last; ++i)
        CHECK(g.peripheral_of(w.letter(i)) == e.peripheral_id);
    }
    std::size_t tagged = 0;
    for (Letter l : w.letters()) tagged += g.peripheral_of(l) ? 1 : 0;
    CHECK(covered == tagged);
  }
}

TEST_CASE("depth of path points") {
  const GeneratorSet g = demo_gens();
  SUBCASE("non-peripheral point") {
    const auto p = decompose_relative(g, parse_word(g, "a b a"));
    for (int n = 0; n <= 3; ++n) CHECK(depth(p, n) == 0);
  }
  SUBCASE("interior of a run") {
    const auto p = decompose_relative(g, parse_word(g, "a s s s a"));
    CHECK(depth(p, 2) == 2);
    CHECK(depth(p, 3) == 2);
    CHECK(depth(p, 0) == 0);
    CHECK(depth(p, 5) == 0);
  }
  SUBCASE("entirely peripheral window") {
    const auto p = decompose_relative(g, power(parse_word(g, "s"), 10));
    CHECK(depth(p, 5) == 5);
    CHECK(depth(p, 2) == 2);
    CHECK(depth(p, 10) == 0);  // endpoint: distance zero to the window edge
  }
  SUBCASE("matches the expanding-ring oracle") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 120; ++trial) {
      const Word w = random_reduced_word(g, 12, rng);
      const auto p = decompose_relative(g, w);
      for (int n = 0; n <= static_cast<int>(w.size()); ++n)
        CHECK(depth(p, n) == depth_oracle(g, w, n));
    }
  }
  SUBCASE("index outside the domain") {
    const auto p = decompose_relative(g, parse_word(g, "a"));
    CHECK_THROWS_AS(depth(p, 2), std::out_of_range);
    CHECK_THROWS_AS(depth(p, -1), std::out_of_range);
  }
}

TEST_CASE("depth is zero exactly when the letter context exits immediately") {
  const GeneratorSet g = demo_gens();
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const Word w = random_reduced_word(g, 10, rng);
    const auto p = decompose_relative(g, w);
    for (int n = 0; n <= static_cast<int>(w.size()); ++n) {
      bool on_excursion = false;
      for (const auto& e : p.excursions)
        on_excursion = on_excursion || (e.first <= n && n <= e.last + 1);
      CHECK((depth(p, n) == 0) == !on_excursion);
    }
  }
}

TEST_CASE("metric quasigeodesic clauses") {
  const GeneratorSet g = demo_gens();
  SUBCASE("geodesic word without peripherals") {
    const PathWindow path = prefix_path(parse_word(g, "a b a b a"));
    CHECK(is_metric_quasigeodesic(g, path, {1, 1}).ok);
  }
  SUBCASE("constant path violates the lower clause") {
    PathWindow path;
    path.first_index = 0;
    path.points = {parse_word(g, "a"), parse_word(g, "a"), parse_word(g, "a")};
    const auto r = is_metric_quasigeodesic(g, path, {1, 1});
    CHECK(!r.ok);
    CHECK(r.violation->clause == 1);
  }
  SUBCASE("reparametrized horoball crossing passes for generous constants") {
    const PathWindow path = transversality_window(g, parse_word(g, "a"), parse_word(g, "b"),
                                                  0, 0, 5);
    CHECK(is_metric_quasigeodesic(g, path, {4, 4}).ok);
    CHECK(!is_metric_quasigeodesic(g, path, {0.2, 0.2}).ok);
  }
  SUBCASE("peripheral u-turn through one coset is rejected") {
    const PathWindow path = transversality_window(g, Word{}, Word{}, 0, 0, 5);
    const auto r = is_metric_quasigeodesic(g, path, {4, 4});
    CHECK(!r.ok);
    CHECK(r.violation->clause == 3);
  }
}

TEST_CASE("path excursions treat trivial increments as coset-compatible") {
  const GeneratorSet g = demo_gens();
  PathWindow path;
  path.first_index = 0;
  // s^-2, e, e, s^2: one excursion through the whole window
  path.points = {power(parse_word(g, "s"), -2), Word{}, Word{}, power(parse_word(g, "s"), 2)};
  const auto runs = path_excursions(g, path);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].first == 0);
  CHECK(runs[0].last == 2);
}
