#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vlmc {

/// A letter is one printable symbol of its alphabet.
using Letter = char;

/// Finite word, stored newest letter first: `w[0]` is the most recent letter.
/// This matches the left-growth convention of the process, where a new
/// letter is prepended to the current word.
using Word = std::string;

/// Ordered finite alphabet of at least two distinct symbols. Letter
/// comparisons use the declaration index, never the character code.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Letter> symbols);
  explicit Alphabet(std::string_view symbols)
      : Alphabet(std::vector<Letter>(symbols.begin(), symbols.end())) {}

  std::size_t size() const noexcept { return symbols_.size(); }
  Letter symbol(std::size_t index) const { return symbols_.at(index); }
  const std::vector<Letter>& symbols() const noexcept { return symbols_; }

  bool contains(Letter c) const noexcept {
    return index_[static_cast<unsigned char>(c)] >= 0;
  }
  /// Throws InvalidWord when `c` is not in the alphabet.
  std::size_t index(Letter c) const;

  /// Throws InvalidWord naming the first foreign letter.
  void validate(std::string_view w) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<Letter> symbols_;
  std::array<std::int16_t, 256> index_{};
};

inline bool is_prefix(std::string_view prefix, std::string_view w) noexcept {
  return prefix.size() <= w.size() && w.substr(0, prefix.size()) == prefix;
}

Word reversed(std::string_view w);

/// Canonical word order: shorter first, then lexicographic on alphabet index.
class WordOrder {
 public:
  explicit WordOrder(const Alphabet& alphabet) : alphabet_(&alphabet) {}
  bool operator()(std::string_view a, std::string_view b) const;

 private:
  const Alphabet* alphabet_;
};

void sort_canonical(std::vector<Word>& words, const Alphabet& alphabet);

/// All words of exactly `length` letters, in canonical order.
std::vector<Word> all_words(const Alphabet& alphabet, std::size_t length);

}  // namespace vlmc
