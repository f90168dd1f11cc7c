#include "vlmc/words.hpp"

#include <algorithm>

#include "vlmc/errors.hpp"

namespace vlmc {

Alphabet::Alphabet(std::vector<Letter> symbols) : symbols_(std::move(symbols)) {
  index_.fill(-1);
  if (symbols_.size() < 2) {
    throw Error(ErrorCode::InvalidAlphabet, "alphabet needs at least two letters");
  }
  if (symbols_.size() > 64) {
    throw Error(ErrorCode::InvalidAlphabet, "alphabet larger than 64 letters");
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto c = static_cast<unsigned char>(symbols_[i]);
    if (c <= 0x20 || c >= 0x7f || symbols_[i] == ',' || symbols_[i] == '"') {
      throw Error(ErrorCode::InvalidAlphabet, "letters must be printable, non-separator ASCII",
                  std::string(1, symbols_[i]));
    }
    if (index_[c] >= 0) {
      throw Error(ErrorCode::InvalidAlphabet, "duplicate letter", std::string(1, symbols_[i]));
    }
    index_[c] = static_cast<std::int16_t>(i);
  }
}

std::size_t Alphabet::index(Letter c) const {
  const auto i = index_[static_cast<unsigned char>(c)];
  if (i < 0) {
    throw Error(ErrorCode::InvalidWord, "letter not in alphabet", std::string(1, c));
  }
  return static_cast<std::size_t>(i);
}

void Alphabet::validate(std::string_view w) const {
  for (Letter c : w) {
    if (!contains(c)) {
      throw Error(ErrorCode::InvalidWord, "word '" + std::string(w) + "' uses a foreign letter",
                  std::string(1, c));
    }
  }
}

Word reversed(std::string_view w) { return Word(w.rbegin(), w.rend()); }

bool WordOrder::operator()(std::string_view a, std::string_view b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ia = alphabet_->index(a[i]);
    const auto ib = alphabet_->index(b[i]);
    if (ia != ib) return ia < ib;
  }
  return false;
}

void sort_canonical(std::vector<Word>& words, const Alphabet& alphabet) {
  std::sort(words.begin(), words.end(), WordOrder(alphabet));
}

std::vector<Word> all_words(const Alphabet& alphabet, std::size_t length) {
  std::vector<Word> out{Word{}};
  for (std::size_t step = 0; step < length; ++step) {
    std::vector<Word> next;
    next.reserve(out.size() * alphabet.size());
    for (const auto& w : out) {
      for (Letter c : alphabet.symbols()) next.push_back(w + c);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace vlmc
