#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lkv/fields.hpp"
#include "lkv/parallel.hpp"

namespace lkv {

inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// The pipelines divide by 2 and by D+1 for every depth D occurring up to
// w_max, so the modulus must be an odd prime coprime to everything in
// [2, w_max+1]; for a prime that is exactly p > w_max+1.
inline void validate_prime(uint64_t p, int w_max) {
  if (p >= (1ull << 31))
    throw std::invalid_argument("prime " + std::to_string(p) + " exceeds the supported 2^31 range");
  if (!is_prime_u64(p))
    throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (p == 2)
    throw std::invalid_argument("prime 2 is unusable: division by 2 is required");
  if (p <= static_cast<uint64_t>(w_max) + 1)
    throw std::invalid_argument("prime " + std::to_string(p) + " divides a required denominator D+1 <= " +
                                std::to_string(w_max + 1));
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct FoldConfig {
  uint64_t n_rows_folded = 0;   // target square size
  uint64_t n_cols_logical = 0;  // columns of the logical (unfolded) matrix
  uint32_t prime = 3323;
  uint64_t rng_seed = 0;

  friend bool operator==(const FoldConfig&, const FoldConfig&) = default;
};

// Dense matrix over F_p accumulating randomly folded rows. Logical row i is
// scaled and added to physical row i mod n; logical column j lands in
// physical column j mod width. Multipliers for the folded-in excess rows and
// columns are nonzero field elements derived from (seed, kind, index) by a
// counter-based generator, so the result is independent of ingestion order
// and thread count; indices inside the physical matrix keep multiplier 1.
class FoldedMatrix {
 public:
  explicit FoldedMatrix(const FoldConfig& cfg)
      : cfg_(cfg),
        field_(cfg.prime),
        width_(std::min<uint64_t>(cfg.n_rows_folded, cfg.n_cols_logical)) {
    if (cfg.n_rows_folded == 0 || cfg.n_cols_logical == 0)
      throw std::invalid_argument("FoldedMatrix needs positive dimensions");
    a_.assign(cfg_.n_rows_folded * width_, 0u);
  }

  FoldedMatrix(FoldedMatrix&& o) noexcept
      : cfg_(o.cfg_),
        field_(o.field_),
        width_(o.width_),
        a_(std::move(o.a_)),
        rows_ingested_(o.rows_ingested_.load()) {}

  FoldedMatrix& operator=(FoldedMatrix&& o) noexcept {
    cfg_ = o.cfg_;
    field_ = o.field_;
    width_ = o.width_;
    a_ = std::move(o.a_);
    rows_ingested_.store(o.rows_ingested_.load());
    return *this;
  }

  FoldedMatrix(const FoldedMatrix&) = delete;
  FoldedMatrix& operator=(const FoldedMatrix&) = delete;

  const FoldConfig& config() const { return cfg_; }
  uint64_t rows() const { return cfg_.n_rows_folded; }
  uint64_t width() const { return width_; }
  uint64_t rows_ingested() const { return rows_ingested_.load(); }

  uint32_t row_multiplier(uint64_t i) const {
    return i < rows() ? 1u : random_unit(0x726f7700ull, i);
  }
  uint32_t col_multiplier(uint64_t j) const {
    return j < width_ ? 1u : random_unit(0x636f6c00ull, j);
  }

  // Thread-safe; concurrent calls may target the same physical row (addition
  // in F_p commutes, so the contents stay order-independent).
  void ingest_row(uint64_t row_index, const std::vector<std::pair<uint64_t, uint32_t>>& entries) {
    for (const auto& [j, v] : entries)
      if (j >= cfg_.n_cols_logical) throw std::out_of_range("logical column index out of range");
    const uint64_t r = row_index % rows();
    const uint64_t rm = row_multiplier(row_index);
    const uint32_t p = cfg_.prime;
    {
      std::lock_guard<std::mutex> lk(stripes_[r % stripes_.size()]);
      uint32_t* row = a_.data() + r * width_;
      for (const auto& [j, v] : entries) {
        uint64_t scaled = static_cast<uint64_t>(v % p) * col_multiplier(j) % p;
        scaled = scaled * rm % p;
        uint32_t& cell = row[j % width_];
        cell = field_.add(cell, static_cast<uint32_t>(scaled));
      }
    }
    rows_ingested_.fetch_add(1);
  }

  std::vector<uint32_t>& data() { return a_; }
  const std::vector<uint32_t>& data() const { return a_; }

  // Checkpoint layout: magic, then n, width, p, seed, rows_ingested as
  // little-endian u64, then the dense payload as little-endian u32.
  void save(const std::string& path) const {
    std::ofstream os(path + ".tmp", std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write checkpoint " + path);
    os.write(kMagic, 8);
    write_u64(os, rows());
    write_u64(os, width_);
    write_u64(os, cfg_.prime);
    write_u64(os, cfg_.rng_seed);
    write_u64(os, rows_ingested());
    for (uint32_t v : a_) write_u32(os, v);
    os.close();
    if (!os) throw std::runtime_error("short write on checkpoint " + path);
    std::rename((path + ".tmp").c_str(), path.c_str());
  }

  static FoldedMatrix load(const std::string& path, const FoldConfig& expected) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read checkpoint " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
      throw std::runtime_error("bad checkpoint header in " + path);
    uint64_t n = read_u64(is), w = read_u64(is), p = read_u64(is), seed = read_u64(is);
    uint64_t ingested = read_u64(is);
    FoldedMatrix m(expected);
    if (n != m.rows() || w != m.width() || p != expected.prime || seed != expected.rng_seed)
      throw std::runtime_error("checkpoint " + path + " does not match the requested configuration");
    for (auto& v : m.a_) v = read_u32(is);
    if (!is) throw std::runtime_error("truncated checkpoint " + path);
    m.rows_ingested_.store(ingested);
    return m;
  }

 private:
  static constexpr char kMagic[9] = "LKVMAT01";

  uint32_t random_unit(uint64_t kind, uint64_t index) const {
    uint64_t h = splitmix64(cfg_.rng_seed ^ kind ^ splitmix64(index));
    return static_cast<uint32_t>(1 + h % (cfg_.prime - 1));
  }

  static void write_u64(std::ofstream& os, uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
  }
  static void write_u32(std::ofstream& os, uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
  }
  static uint64_t read_u64(std::ifstream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  }
  static uint32_t read_u32(std::ifstream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
  }

  FoldConfig cfg_;
  PrimeField field_;
  uint64_t width_;
  std::vector<uint32_t> a_;
  std::atomic<uint64_t> rows_ingested_{0};
  mutable std::array<std::mutex, 64> stripes_;
};

// In-place Gaussian elimination rank over F_p. Pivot selection is the first
// nonzero entry in row order within the current column; only the row-update
// step is parallel, so the result does not depend on the thread count.
inline uint64_t rank_mod_p(FoldedMatrix& m, ThreadPool& pool) {
  const uint64_t n = m.rows();
  const uint64_t w = m.width();
  const uint32_t p = m.config().prime;
  PrimeField f(p);
  auto& a = m.data();
  uint64_t r = 0;
  for (uint64_t c = 0; c < w && r < n; ++c) {
    uint64_t piv = n;
    for (uint64_t i = r; i < n; ++i)
      if (a[i * w + c] != 0) {
        piv = i;
        break;
      }
    if (piv == n) continue;
    if (piv != r)
      std::swap_ranges(a.begin() + piv * w, a.begin() + (piv + 1) * w, a.begin() + r * w);
    const uint32_t pinv = f.inv(a[r * w + c]);
    const uint32_t* prow = a.data() + r * w;
    pool.parallel_for(r + 1, n, 32, [&](uint64_t lo, uint64_t hi) {
      for (uint64_t i = lo; i < hi; ++i) {
        uint32_t* row = a.data() + i * w;
        const uint32_t e = row[c];
        if (e == 0) continue;
        const uint64_t negf = p - static_cast<uint64_t>(e) * pinv % p;
        for (uint64_t j = c; j < w; ++j)
          row[j] = static_cast<uint32_t>((row[j] + negf * prow[j]) % p);
      }
    });
    ++r;
  }
  return r;
}

inline uint64_t rank_mod_p(FoldedMatrix& m, unsigned threads = 1) {
  ThreadPool pool(threads ? threads : 1);
  return rank_mod_p(m, pool);
}

// Exact rank of a small rational matrix by fraction-free (Bareiss)
// elimination after clearing row denominators.
inline size_t exact_rank(const std::vector<std::vector<Rational>>& rows,
                         size_t cell_guard = 1 << 20) {
  if (rows.empty()) return 0;
  const size_t ncols = rows[0].size();
  if (ncols == 0) return 0;
  if (rows.size() * ncols > cell_guard)
    throw std::length_error("exact_rank guard exceeded; matrix too large for the exact oracle");
  std::vector<std::vector<BigInt>> m(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols) throw std::invalid_argument("ragged matrix");
    BigInt common = 1;
    for (const auto& e : rows[i]) common = lcm(common, BigInt(denominator(e)));
    m[i].resize(ncols);
    for (size_t j = 0; j < ncols; ++j)
      m[i][j] = numerator(rows[i][j]) * (common / denominator(rows[i][j]));
  }
  const size_t nrows = m.size();
  BigInt prev = 1;
  size_t rank = 0;
  for (size_t c = 0; c < ncols && rank < nrows; ++c) {
    size_t piv = nrows;
    for (size_t i = rank; i < nrows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == nrows) continue;
    if (piv != rank) std::swap(m[piv], m[rank]);
    for (size_t i = rank + 1; i < nrows; ++i) {
      for (size_t j = c + 1; j < ncols; ++j)
        m[i][j] = (m[i][j] * m[rank][c] - m[i][c] * m[rank][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}

// Basis of the right kernel {x : M x = 0} of a rational matrix, via reduced
// row echelon form. Used by the exact small-weight oracles.
inline std::vector<std::vector<Rational>> exact_kernel_basis(
    std::vector<std::vector<Rational>> m, size_t ncols, size_t cell_guard = 1 << 20) {
  for (const auto& r : m)
    if (r.size() != ncols) throw std::invalid_argument("ragged matrix");
  if (m.size() * ncols > cell_guard)
    throw std::length_error("exact_kernel_basis guard exceeded");
  const size_t nrows = m.size();
  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t c = 0; c < ncols && rank < nrows; ++c) {
    size_t piv = nrows;
    for (size_t i = rank; i < nrows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == nrows) continue;
    std::swap(m[piv], m[rank]);
    Rational d = m[rank][c];
    for (size_t j = c; j < ncols; ++j) m[rank][j] /= d;
    for (size_t i = 0; i < nrows; ++i) {
      if (i == rank || m[i][c] == 0) continue;
      Rational factor = m[i][c];
      for (size_t j = c; j < ncols; ++j) m[i][j] -= factor * m[rank][j];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (size_t fc = 0; fc < ncols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Rational> v(ncols, Rational(0));
    v[fc] = 1;
    for (size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -m[r][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace lkv
