#include "reldom/word.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace reldom {

Letter GeneratorSet::add_generator(const std::string& name, std::optional<int> peripheral) {
  if (generators_.size() >= 127) throw std::invalid_argument("generator set too large");
  if (letter_by_name(name)) throw std::invalid_argument("duplicate generator name: " + name);
  if (peripheral) {
    if (*peripheral != peripheral_count_)
      throw std::invalid_argument("peripheral ids must be assigned consecutively from 0");
    ++peripheral_count_;
  }
  generators_.push_back({name, peripheral});
  return static_cast<Letter>(2 * (generators_.size() - 1));
}

std::optional<int> GeneratorSet::peripheral_of(Letter l) const {
  if (!valid_letter(l)) throw std::invalid_argument("letter out of range");
  return generators_[generator_index(l)].peripheral;
}

Letter GeneratorSet::peripheral_letter(int id) const {
  for (std::size_t g = 0; g < generators_.size(); ++g)
    if (generators_[g].peripheral == id) return static_cast<Letter>(2 * g);
  throw std::invalid_argument("unknown peripheral id");
}

std::string GeneratorSet::letter_name(Letter l) const {
  if (!valid_letter(l)) throw std::invalid_argument("letter out of range");
  const std::string& base = generators_[generator_index(l)].name;
  return is_inverse_letter(l) ? base + "^-1" : base;
}

std::optional<Letter> GeneratorSet::letter_by_name(const std::string& name) const {
  bool inv = false;
  std::string base = name;
  if (base.size() > 3 && base.ends_with("^-1")) {
    inv = true;
    base = base.substr(0, base.size() - 3);
  }
  for (std::size_t g = 0; g < generators_.size(); ++g)
    if (generators_[g].name == base)
      return static_cast<Letter>(2 * g + (inv ? 1 : 0));
  return std::nullopt;
}

Word Word::from_reduced(std::vector<Letter> letters) {
#ifndef NDEBUG
  for (std::size_t i = 1; i < letters.size(); ++i)
    assert(letters[i] != inverse_letter(letters[i - 1]));
#endif
  Word w;
  w.letters_ = std::move(letters);
  return w;
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l = inverse_letter(l);
  return from_reduced(std::move(out));
}

Word Word::prefix(std::size_t n) const { return subword(0, n); }

Word Word::subword(std::size_t first, std::size_t count) const {
  if (first + count > letters_.size()) throw std::out_of_range("subword out of range");
  return from_reduced({letters_.begin() + first, letters_.begin() + first + count});
}

Word reduce(const GeneratorSet& gens, std::span<const Letter> raw) {
  std::vector<Letter> stack;
  stack.reserve(raw.size());
  for (Letter l : raw) {
    if (!gens.valid_letter(l)) throw std::invalid_argument("unknown letter in word");
    if (!stack.empty() && stack.back() == inverse_letter(l))
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return Word::from_reduced(std::move(stack));
}

Word reduce(const GeneratorSet& gens, std::initializer_list<Letter> raw) {
  return reduce(gens, std::span<const Letter>(raw.begin(), raw.size()));
}

Word concat(const Word& u, const Word& v) {
  std::vector<Letter> out(u.letters().begin(), u.letters().end());
  for (Letter l : v.letters()) {
    if (!out.empty() && out.back() == inverse_letter(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word::from_reduced(std::move(out));
}

Word power(const Word& w, long n) {
  if (n == 0) return Word{};
  Word base = n < 0 ? w.inverse() : w;
  unsigned long e = n < 0 ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
  Word acc;
  while (e > 0) {
    if (e & 1) acc = concat(acc, base);
    e >>= 1;
    if (e) base = concat(base, base);
  }
  return acc;
}

Word cyclic_reduce(const Word& w) {
  std::size_t a = 0, b = w.size();
  while (b > a + 1 && w.letter(a) == inverse_letter(w.letter(b - 1))) {
    ++a;
    --b;
  }
  return w.subword(a, b - a);
}

StableWordLength stable_word_length(const Word& w, int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  StableWordLength out;
  const double cyc = static_cast<double>(cyclic_reduce(w).size());
  out.lo = out.hi = cyc;
  double best = static_cast<double>(w.size());
  Word p;
  for (int n = 1; n <= n_max; ++n) {
    p = concat(p, w);
    best = std::min(best, static_cast<double>(p.size()) / n);
  }
  out.subadditive_upper = best;
  return out;
}

std::string format_word(const GeneratorSet& gens, const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << gens.letter_name(w.letter(i));
  }
  return os.str();
}

Word parse_word(const GeneratorSet& gens, const std::string& text) {
  std::istringstream is(text);
  std::vector<Letter> raw;
  std::string tok;
  while (is >> tok) {
    auto l = gens.letter_by_name(tok);
    if (!l) throw std::invalid_argument("unknown letter token: " + tok);
    raw.push_back(*l);
  }
  return reduce(gens, raw);
}

namespace {

void enumerate_rec(const GeneratorSet& gens, int remaining, std::vector<Letter>& stack,
                   const std::function<EnumStep(const Word&)>& visit) {
  if (remaining == 0) return;
  const int nl = gens.letter_count();
  for (Letter l = 0; l < nl; ++l) {
    if (!stack.empty() && l == inverse_letter(stack.back())) continue;
    stack.push_back(l);
    if (visit(Word::from_reduced(stack)) == EnumStep::Continue)
      enumerate_rec(gens, remaining - 1, stack, visit);
    stack.pop_back();
  }
}

}  // namespace

void for_each_reduced_word(const GeneratorSet& gens, int max_len,
                           const std::function<EnumStep(const Word&)>& visit) {
  if (max_len < 0) throw std::invalid_argument("max_len must be nonnegative");
  std::vector<Letter> stack;
  if (visit(Word{}) == EnumStep::SkipSubtree) return;
  enumerate_rec(gens, max_len, stack, visit);
}

std::vector<Word> all_reduced_words(const GeneratorSet& gens, int max_len) {
  std::vector<Word> out;
  for_each_reduced_word(gens, max_len, [&](const Word& w) {
    out.push_back(w);
    return EnumStep::Continue;
  });
  return out;
}

Word random_reduced_word(const GeneratorSet& gens, int length, std::mt19937_64& rng) {
  if (length < 0) throw std::invalid_argument("length must be nonnegative");
  std::uniform_int_distribution<int> first(0, gens.letter_count() - 1);
  std::uniform_int_distribution<int> rest(0, gens.letter_count() - 2);
  std::vector<Letter> letters;
  letters.reserve(length);
  for (int i = 0; i < length; ++i) {
    if (letters.empty()) {
      letters.push_back(static_cast<Letter>(first(rng)));
    } else {
      const Letter banned = inverse_letter(letters.back());
      Letter pick = static_cast<Letter>(rest(rng));
      if (pick >= banned) pick = static_cast<Letter>(pick + 1);
      letters.push_back(pick);
    }
  }
  return Word::from_reduced(std::move(letters));
}

std::uint64_t reduced_word_count(int rank, int max_len) {
  std::uint64_t total = 1, layer = 1;
  for (int j = 1; j <= max_len; ++j) {
    layer *= (j == 1) ? static_cast<std::uint64_t>(2 * rank)
                      : static_cast<std::uint64_t>(2 * rank - 1);
    total += layer;
  }
  return total;
}

}  // namespace reldom
