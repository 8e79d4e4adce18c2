#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reldom {

/// A letter is an index into a generating set closed under inversion.
/// Generator g occupies slots 2g (the generator) and 2g+1 (its inverse).
using Letter = std::uint8_t;

inline constexpr Letter inverse_letter(Letter l) { return static_cast<Letter>(l ^ 1u); }
inline constexpr int generator_index(Letter l) { return l >> 1; }
inline constexpr bool is_inverse_letter(Letter l) { return (l & 1u) != 0; }

/// Symmetric generating set of a finitely generated free group, with an
/// optional peripheral tag per generator. Each peripheral subgroup is the
/// cyclic subgroup generated by one designated letter.
class GeneratorSet {
public:
  struct Generator {
    std::string name;
    std::optional<int> peripheral;  // peripheral subgroup id, if tagged
  };

  GeneratorSet() = default;

  /// Adds a generator (and implicitly its inverse). Returns the positive letter.
  Letter add_generator(const std::string& name, std::optional<int> peripheral = std::nullopt);

  int rank() const { return static_cast<int>(generators_.size()); }
  int letter_count() const { return 2 * rank(); }
  bool valid_letter(Letter l) const { return l < letter_count(); }

  std::optional<int> peripheral_of(Letter l) const;
  bool is_peripheral(Letter l) const { return peripheral_of(l).has_value(); }
  int peripheral_count() const { return peripheral_count_; }
  /// The designated positive letter generating peripheral subgroup `id`.
  Letter peripheral_letter(int id) const;

  std::string letter_name(Letter l) const;
  std::optional<Letter> letter_by_name(const std::string& name) const;

  const std::vector<Generator>& generators() const { return generators_; }

private:
  std::vector<Generator> generators_;
  int peripheral_count_ = 0;
};

/// Freely reduced word. Immutable value type; the empty word is the identity.
class Word {
public:
  Word() = default;

  /// Constructs from already-reduced letters. Checked in debug builds only.
  static Word from_reduced(std::vector<Letter> letters);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter letter(std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const { return letters_; }

  Word inverse() const;
  /// Prefix of the first n letters.
  Word prefix(std::size_t n) const;
  Word subword(std::size_t first, std::size_t count) const;

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

private:
  std::vector<Letter> letters_;
};

/// Free reduction of a raw letter sequence. Rejects letters outside the set.
Word reduce(const GeneratorSet& gens, std::span<const Letter> raw);
Word reduce(const GeneratorSet& gens, std::initializer_list<Letter> raw);

/// Reduced product u·v (cancellation at the seam only, since u and v are reduced).
Word concat(const Word& u, const Word& v);
/// w^n for any integer n, by doubling.
Word power(const Word& w, long n);

/// Strips conjugating pairs x…x^{-1} from the ends until the word is
/// cyclically reduced.
Word cyclic_reduce(const Word& w);

struct StableWordLength {
  double lo = 0;   // cyclically reduced length; exact value of |w|_inf in a free group
  double hi = 0;
  double subadditive_upper = 0;  // min_{n <= n_max} |w^n|/n, a Fekete upper bound
};
/// Bracket for the stable word length |w|_inf = lim |w^n|/n.
StableWordLength stable_word_length(const Word& w, int n_max);

/// Token format: whitespace-separated letter names, "^-1" suffix for inverses.
std::string format_word(const GeneratorSet& gens, const Word& w);
Word parse_word(const GeneratorSet& gens, const std::string& text);

enum class EnumStep { Continue, SkipSubtree };

/// Visits every reduced word of length <= max_len exactly once, in
/// depth-first order (a word is visited before its extensions). Returning
/// SkipSubtree prunes all extensions of the current word.
void for_each_reduced_word(const GeneratorSet& gens, int max_len,
                           const std::function<EnumStep(const Word&)>& visit);

std::vector<Word> all_reduced_words(const GeneratorSet& gens, int max_len);

/// 1 + sum_{j=1}^{L} 2k(2k-1)^{j-1} for free rank k.
std::uint64_t reduced_word_count(int rank, int max_len);

/// Uniform random reduced word of exactly the given length.
Word random_reduced_word(const GeneratorSet& gens, int length, std::mt19937_64& rng);

}  // namespace reldom
