#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lkv/fields.hpp"

namespace lkv {

using uint128 = unsigned __int128;

// A binary word over the alphabet {X, Y} with X < Y. Letters are packed one
// bit per position (X=0, Y=1) with the first letter in the most significant
// bit of a 128-bit value, so that comparing packed values compares words
// lexicographically and rotation/concatenation are a few shifts. Capacity is
// 128 letters, which covers every weight appearing in the computed tables.
class Word {
 public:
  static constexpr int kMaxLength = 128;

  Word() = default;

  static Word letter(bool is_y) {
    Word w;
    w.len_ = 1;
    if (is_y) w.bits_ = uint128(1) << 127;
    return w;
  }

  static Word from_string(std::string_view s) {
    if (static_cast<int>(s.size()) > kMaxLength)
      throw std::length_error("word exceeds 128 letters");
    Word w;
    w.len_ = static_cast<uint32_t>(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == 'Y')
        w.bits_ |= uint128(1) << (127 - i);
      else if (s[i] != 'X')
        throw std::invalid_argument("word letters must be X or Y");
    }
    return w;
  }

  static Word from_bits(const std::vector<uint8_t>& letters) {
    if (static_cast<int>(letters.size()) > kMaxLength)
      throw std::length_error("word exceeds 128 letters");
    Word w;
    w.len_ = static_cast<uint32_t>(letters.size());
    for (size_t i = 0; i < letters.size(); ++i)
      if (letters[i]) w.bits_ |= uint128(1) << (127 - i);
    return w;
  }

  int length() const { return static_cast<int>(len_); }
  bool empty() const { return len_ == 0; }

  bool is_y(int i) const { return (bits_ >> (127 - i)) & 1; }

  int y_count() const {
    return std::popcount(static_cast<uint64_t>(bits_ >> 64)) +
           std::popcount(static_cast<uint64_t>(bits_));
  }

  Word concat(const Word& rhs) const {
    if (length() + rhs.length() > kMaxLength)
      throw std::length_error("word exceeds 128 letters");
    if (rhs.len_ == 0) return *this;
    if (len_ == 0) return rhs;
    Word w;
    w.len_ = len_ + rhs.len_;
    w.bits_ = bits_ | (rhs.bits_ >> len_);
    return w;
  }

  Word rotated_left(int k) const {
    if (len_ == 0) return *this;
    k %= length();
    if (k < 0) k += length();
    if (k == 0) return *this;
    Word w;
    w.len_ = len_;
    w.bits_ = (bits_ << k) | ((bits_ & top_mask(k)) >> (length() - k));
    return w;
  }

  bool starts_with(const Word& p) const {
    if (p.len_ > len_) return false;
    if (p.len_ == 0) return true;
    return ((bits_ ^ p.bits_) & top_mask(p.length())) == 0;
  }

  // The suffix obtained by dropping the first k letters.
  Word without_prefix(int k) const {
    if (k < 0 || k > length()) throw std::out_of_range("prefix length out of range");
    if (k == length()) return Word();
    Word w;
    w.len_ = len_ - k;
    w.bits_ = bits_ << k;
    return w;
  }

  Word prefix(int k) const {
    if (k < 0 || k > length()) throw std::out_of_range("prefix length out of range");
    Word w;
    w.len_ = static_cast<uint32_t>(k);
    w.bits_ = bits_ & top_mask(k);
    return w;
  }

  std::string str() const {
    std::string s(len_, 'X');
    for (int i = 0; i < length(); ++i)
      if (is_y(i)) s[i] = 'Y';
    return s;
  }

  uint64_t hash() const {
    uint64_t h = static_cast<uint64_t>(bits_ >> 64);
    h ^= static_cast<uint64_t>(bits_) + 0x9e3779b97f4a7c15ull + (h << 12) + (h >> 4);
    h ^= static_cast<uint64_t>(len_) * 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ull;
    h ^= h >> 33;
    return h;
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.bits_ == b.bits_ && a.len_ == b.len_;
  }
  // Lexicographic with X < Y; a proper prefix sorts before its extensions.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.bits_ != b.bits_)
      return a.bits_ < b.bits_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.len_ <=> b.len_;
  }

 private:
  static uint128 top_mask(int k) {
    if (k <= 0) return 0;
    if (k >= 128) return ~uint128(0);
    return ~uint128(0) << (128 - k);
  }

  uint128 bits_ = 0;
  uint32_t len_ = 0;
};

struct WordHash {
  size_t operator()(const Word& w) const { return static_cast<size_t>(w.hash()); }
};

inline Word canonical_rotation(const Word& w) {
  if (w.empty()) throw std::invalid_argument("canonical_rotation of the empty word");
  Word best = w;
  for (int k = 1; k < w.length(); ++k) {
    Word r = w.rotated_left(k);
    if (r < best) best = r;
  }
  return best;
}

inline bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  for (int k = 1; k < w.length(); ++k)
    if (w.rotated_left(k) <= w) return false;
  return true;
}

// A word strictly smaller than all of its proper rotations.
class LyndonWord {
 public:
  explicit LyndonWord(const Word& w) : word_(w) {
    if (!is_lyndon(w)) throw std::invalid_argument("not a Lyndon word: " + w.str());
  }
  const Word& word() const { return word_; }
  int length() const { return word_.length(); }
  int y_count() const { return word_.y_count(); }
  std::string str() const { return word_.str(); }

  friend bool operator==(const LyndonWord&, const LyndonWord&) = default;
  friend std::strong_ordering operator<=>(const LyndonWord& a, const LyndonWord& b) {
    return a.word_ <=> b.word_;
  }

 private:
  Word word_;
};

// A rotation class of words, stored through its lexicographically least
// rotation. Weight is length minus one, depth is the Y-count minus one.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(const Word& w)
      : canon_(w.empty() ? Word() : canonical_rotation(w)) {}

  // Trusted constructor for enumeration output that is canonical by
  // construction.
  static CyclicWord from_canonical(const Word& w) {
    CyclicWord c;
    c.canon_ = w;
    return c;
  }

  const Word& canonical() const { return canon_; }
  int length() const { return canon_.length(); }
  int y_count() const { return canon_.y_count(); }
  int weight() const { return canon_.length() - 1; }
  int depth() const { return canon_.y_count() - 1; }
  std::string str() const { return "(" + canon_.str() + ")"; }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b) {
    return a.canon_ <=> b.canon_;
  }

 private:
  Word canon_;
};

namespace detail {

// Fixed-density binary pre-necklace generation (the Fredricksen-Kessler-
// Maiorana scheme). Visits canonical representatives in increasing
// lexicographic order; emits necklaces (n % p == 0) or only aperiodic ones
// (p == n), i.e. Lyndon words. y_count < 0 disables the density filter.
template <class Visit>
void fkm_generate(int n, int y_count, bool lyndon_only, Visit&& visit) {
  std::vector<uint8_t> a(static_cast<size_t>(n) + 1, 0);
  int ones = 0;
  auto rec = [&](auto&& self, int t, int p) -> void {
    if (y_count >= 0) {
      if (ones > y_count) return;
      if (ones + (n - t + 1) < y_count) return;
    }
    if (t > n) {
      bool shape_ok = lyndon_only ? (p == n) : (n % p == 0);
      if (shape_ok && (y_count < 0 || ones == y_count)) {
        Word w = Word::from_bits(std::vector<uint8_t>(a.begin() + 1, a.end()));
        visit(w);
      }
      return;
    }
    a[t] = a[t - p];
    ones += a[t];
    self(self, t + 1, p);
    ones -= a[t];
    if (a[t - p] == 0) {
      a[t] = 1;
      ++ones;
      self(self, t + 1, t);
      --ones;
      a[t] = 0;
    }
  };
  rec(rec, 1, 1);
}

}  // namespace detail

// All Lyndon words of the given length (and Y-count, when given), in
// lexicographic order.
inline std::vector<LyndonWord> lyndon_words(int length, std::optional<int> y_count = {}) {
  if (length < 1) throw std::invalid_argument("lyndon_words needs length >= 1");
  if (length > Word::kMaxLength) throw std::length_error("word exceeds 128 letters");
  if (y_count && (*y_count < 0 || *y_count > length))
    throw std::invalid_argument("lyndon_words: Y-count out of range");
  std::vector<LyndonWord> out;
  detail::fkm_generate(length, y_count ? *y_count : -1, /*lyndon_only=*/true,
                       [&](const Word& w) { out.emplace_back(w); });
  return out;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline uint64_t euler_phi(uint64_t n) {
  uint64_t result = n;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

// Number of rotation classes of words with the given length and Y-count
// (Burnside over the cyclic group).
inline BigInt count_cyclic_words(int length, int y_count) {
  if (length < 1) throw std::invalid_argument("count_cyclic_words needs length >= 1");
  if (y_count < 0 || y_count > length)
    throw std::invalid_argument("count_cyclic_words: Y-count out of range");
  int g = std::gcd(length, y_count);
  BigInt total = 0;
  for (int d = 1; d <= g; ++d) {
    if (g % d != 0) continue;
    total += BigInt(euler_phi(static_cast<uint64_t>(d))) * binomial(length / d, y_count / d);
  }
  BigInt q = total / length;
  if (q * length != total) throw std::logic_error("cyclic word count not integral");
  return q;
}

// All rotation classes with the given length and Y-count, as canonical
// representatives in lexicographic order.
inline std::vector<CyclicWord> enumerate_cyclic_words(int length, int y_count) {
  if (length < 1) throw std::invalid_argument("enumerate_cyclic_words needs length >= 1");
  if (length > Word::kMaxLength) throw std::length_error("word exceeds 128 letters");
  if (y_count < 0 || y_count > length)
    throw std::invalid_argument("enumerate_cyclic_words: Y-count out of range");
  std::vector<CyclicWord> out;
  detail::fkm_generate(length, y_count, /*lyndon_only=*/false,
                       [&](const Word& w) { out.push_back(CyclicWord::from_canonical(w)); });
  return out;
}

}  // namespace lkv
