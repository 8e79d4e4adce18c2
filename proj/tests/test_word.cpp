#include "reldom/word.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace reldom;

namespace {

GeneratorSet free_gens(int rank) {
  GeneratorSet g;
  for (int i = 0; i < rank; ++i) g.add_generator(std::string(1, static_cast<char>('a' + i)));
  return g;
}

}  // namespace

TEST_CASE("free reduction basics") {
  const GeneratorSet g = free_gens(2);
  const Letter a = 0, a_inv = 1, b = 2, b_inv = 3;
  CHECK(reduce(g, {a, a_inv}).empty());
  CHECK(reduce(g, {a, b, b_inv, a}) == reduce(g, {a, a}));
  CHECK(reduce(g, {a, b, b_inv, a}).size() == 2);
  CHECK_THROWS_AS(reduce(g, {static_cast<Letter>(9)}), std::invalid_argument);
}

TEST_CASE("reduction agrees with the repeated-scan canceller on random input") {
  const GeneratorSet g = free_gens(2);
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Letter> raw(1000);
    for (auto& l : raw) l = static_cast<Letter>(pick(rng));
    const Word reduced = reduce(g, raw);
    const auto oracle = testing::naive_reduce(raw);
    REQUIRE(reduced.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(reduced.letter(i) == oracle[i]);
  }
}

TEST_CASE("reduce is idempotent and word length subadditive") {
  const GeneratorSet g = free_gens(3);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Word u = random_reduced_word(g, 12, rng);
    const Word v = random_reduced_word(g, 9, rng);
    std::vector<Letter> raw(u.letters().begin(), u.letters().end());
    const Word again = reduce(g, raw);
    CHECK(again == u);
    CHECK(concat(u, v).size() <= u.size() + v.size());
  }
}

TEST_CASE("power and inverse") {
  const GeneratorSet g = free_gens(2);
  const Word w = parse_word(g, "a b a^-1");
  CHECK(power(w, 3) == parse_word(g, "a b b b a^-1"));
  CHECK(power(w, -2) == parse_word(g, "a b^-1 b^-1 a^-1"));
  CHECK(power(w, 0).empty());
  CHECK(concat(w, w.inverse()).empty());
}

TEST_CASE("token format round trip") {
  const GeneratorSet g = free_gens(2);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Word w = random_reduced_word(g, trial % 15, rng);
    CHECK(parse_word(g, format_word(g, w)) == w);
  }
  CHECK(format_word(g, parse_word(g, "a b^-1")) == "a b^-1");
  CHECK_THROWS_AS(parse_word(g, "a q"), std::invalid_argument);
}

TEST_CASE("enumeration counts and uniqueness") {
  // rank 1, length 2: e, a, a^-1, a^2, a^-2
  CHECK(all_reduced_words(free_gens(1), 2).size() == 5);
  // rank 2, length 3: 1 + 4 + 12 + 36
  CHECK(all_reduced_words(free_gens(2), 3).size() == 53);
  CHECK(reduced_word_count(2, 3) == 53);

  // rank 3, length 5: closed form 1 + 6 (5^5 - 1) / 4.
  const std::uint64_t expected = 1 + 6 * (3125 - 1) / 4;
  CHECK(expected == 4687);
  const auto words = all_reduced_words(free_gens(3), 5);
  CHECK(words.size() == expected);
  CHECK(reduced_word_count(3, 5) == expected);
  auto sorted = words;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("enumeration pruning skips whole subtrees") {
  const GeneratorSet g = free_gens(2);
  std::size_t visited = 0;
  for_each_reduced_word(g, 6, [&](const Word& w) {
    ++visited;
    return w.size() >= 2 ? EnumStep::SkipSubtree : EnumStep::Continue;
  });
  CHECK(visited == 1 + 4 + 12);  // nothing of length > 2 visited
}

TEST_CASE("stable word length collapses to the cyclically reduced length") {
  const GeneratorSet g = free_gens(2);
  const auto one = stable_word_length(parse_word(g, "a"), 6);
  CHECK(one.lo == 1);
  CHECK(one.hi == 1);

  const auto conj = stable_word_length(parse_word(g, "a b a^-1"), 6);
  CHECK(conj.lo == 1);
  CHECK(conj.hi == 1);
  CHECK(conj.subadditive_upper == doctest::Approx((6.0 + 2.0) / 6.0));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Word w = random_reduced_word(g, 9, rng);
    const auto s = stable_word_length(w, 8);
    CHECK(s.lo == s.hi);
    CHECK(s.lo == static_cast<double>(cyclic_reduce(w).size()));
    CHECK(s.subadditive_upper >= s.hi - 1e-12);  // Fekete upper bound
  }
}

TEST_CASE("subadditive upper bounds are nonincreasing in the power budget") {
  const GeneratorSet g = free_gens(2);
  const Word w = parse_word(g, "a a b a^-1 a^-1");
  double prev = stable_word_length(w, 1).subadditive_upper;
  for (int n = 2; n <= 10; ++n) {
    const double cur = stable_word_length(w, n).subadditive_upper;
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("generator set invariants") {
  GeneratorSet g;
  g.add_generator("t");
  g.add_generator("s", 0);
  CHECK(g.letter_count() == 4);
  CHECK(g.peripheral_count() == 1);
  CHECK(g.peripheral_of(2) == 0);
  CHECK(g.peripheral_of(3) == 0);  // the inverse letter carries the same tag
  CHECK(!g.peripheral_of(0));
  CHECK(g.peripheral_letter(0) == 2);
  CHECK(g.letter_name(3) == "s^-1");
  CHECK(g.letter_by_name("s^-1") == 3);
  CHECK_THROWS_AS(g.add_generator("t"), std::invalid_argument);
}
