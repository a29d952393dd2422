#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lkv/bk.hpp"
#include "lkv/lie.hpp"
#include "lkv/modmat.hpp"
#include "lkv/parallel.hpp"
#include "lkv/poly.hpp"
#include "lkv/words.hpp"

namespace lkv {

struct PipelineConfig {
  uint32_t prime = 3323;
  uint64_t rng_seed = 0;
  unsigned threads = 0;  // 0: LKV_THREADS env, then hardware concurrency
  DeltaMode delta_mode = DeltaMode::strip1;
  int w1 = 0;  // 0: floor((W+1)/2)
  std::string seed_file;
  std::string checkpoint_dir;
  uint64_t checkpoint_interval = 0;  // rows per checkpoint block; 0: 65536
};

// An element of the kernel Lie algebra given through its cyclic-word image.
// The odd-weight depth-1 generators are produced internally; exceptional
// depth-4 elements enter only through seed files.
struct SeedElement {
  std::string name;
  int weight = 0;
  int depth = 0;
  CyclicPoly<PrimeField> value;
};

inline std::vector<SeedElement> sigma_seeds(const PrimeField& f, int max_weight) {
  std::vector<SeedElement> out;
  for (int k = 1; 2 * k + 1 <= max_weight; ++k) {
    SeedElement s;
    s.weight = 2 * k + 1;
    s.depth = 1;
    s.name = "sigma" + std::to_string(s.weight);
    s.value = iota(f, sigma_bar(f, k));
    out.push_back(std::move(s));
  }
  return out;
}

// Seed file: one record per line; '#' starts a comment. Fields are
//   name weight depth coeff (WORD) coeff (WORD) ...
// with integer coefficients taken mod p at load time.
inline std::vector<SeedElement> load_seed_file(const std::string& path, const PrimeField& f) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open seed file " + path);
  std::vector<SeedElement> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    SeedElement s;
    if (!(ls >> s.name)) continue;  // blank line
    if (!(ls >> s.weight >> s.depth))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected weight and depth");
    long long coeff;
    std::string wordtok;
    while (ls >> coeff >> wordtok) {
      if (wordtok.size() < 2 || wordtok.front() != '(' || wordtok.back() != ')')
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": cyclic words must be parenthesized");
      Word w = Word::from_string(std::string_view(wordtok).substr(1, wordtok.size() - 2));
      add_term(f, s.value, CyclicWord(w), f.from_int(coeff));
    }
    if (!ls.eof())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed record");
    auto bd = bidegree(s.value);
    if (s.value.is_zero() || !bd || bd->first != s.weight || bd->second != s.depth)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": seed '" + s.name +
                               "' is not homogeneous of the declared bidegree");
    out.push_back(std::move(s));
  }
  return out;
}

struct UpperDetail {
  int W = 0, D = 0, w1 = 0;
  uint64_t sder_dim = 0;
  uint64_t n_rows = 0;
  uint64_t n_cols = 0;
  uint64_t rank = 0;
  uint64_t value = 0;
  double seconds = 0;
};

struct LowerDetail {
  int W = 0, D = 0;
  uint64_t n_rows = 0;
  uint64_t n_cols = 0;
  uint64_t rank = 0;
  uint64_t value = 0;
  double seconds = 0;
};

namespace detail {

inline uint64_t to_u64(const BigInt& v, const char* what) {
  if (v < 0 || v > BigInt(UINT64_MAX)) throw std::overflow_error(std::string(what) + " overflow");
  return static_cast<uint64_t>(v);
}

inline size_t column_index(const std::vector<Word>& cols, const CyclicWord& cw) {
  auto it = std::lower_bound(cols.begin(), cols.end(), cw.canonical());
  if (it == cols.end() || *it != cw.canonical())
    throw std::logic_error("row entry outside the target slice: " + cw.str());
  return static_cast<size_t>(it - cols.begin());
}

template <class F>
std::vector<std::pair<uint64_t, uint32_t>> row_entries(const F&, const CyclicPoly<F>& row,
                                                       const std::vector<Word>& cols) {
  std::vector<std::pair<uint64_t, uint32_t>> entries;
  entries.reserve(row.terms.size());
  for (const auto& [cw, c] : row.terms) entries.emplace_back(column_index(cols, cw), c);
  return entries;
}

inline std::string checkpoint_path(const PipelineConfig& cfg, const char* kind, int W, int D,
                                   int w1) {
  std::ostringstream os;
  os << cfg.checkpoint_dir << "/" << kind << "-W" << W << "-D" << D << "-w1_" << w1 << "-p"
     << cfg.prime << "-s" << cfg.rng_seed << "-" << to_string(cfg.delta_mode) << ".mat";
  return os.str();
}

}  // namespace detail

// Upper bound on the kernel dimension in bidegree (W,D):
// dim sder - rank of the half-divergence applied to the generating rows,
// computed mod p on the folded square matrix. Folding and modular reduction
// can only lower the rank, so the bound stays valid.
inline uint64_t upper_bound(int W, int D, const PipelineConfig& cfg, UpperDetail* detail = nullptr) {
  if (W < 1 || D < 0 || D > W) throw std::invalid_argument("upper_bound: bad bidegree");
  validate_prime(cfg.prime, W);
  const auto t0 = std::chrono::steady_clock::now();
  const int w1 = cfg.w1 > 0 ? cfg.w1 : default_w1(W);
  if (w1 < 1 || w1 > W) throw std::invalid_argument("upper_bound: W1 out of range");
  const uint64_t n = detail::to_u64(dim_sder(W, D), "sder dimension");

  UpperDetail ud;
  ud.W = W;
  ud.D = D;
  ud.w1 = w1;
  ud.sder_dim = n;

  auto finish = [&](uint64_t rank, uint64_t nrows, uint64_t ncols) {
    ud.rank = rank;
    ud.n_rows = nrows;
    ud.n_cols = ncols;
    ud.value = n - rank;
    ud.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (detail) *detail = ud;
    return ud.value;
  };

  if (n == 0) return finish(0, 0, 0);

  // Target slice of the half-divergence image.
  const int col_len = cfg.delta_mode == DeltaMode::strip1 ? W : W - 1;
  const int col_y = cfg.delta_mode == DeltaMode::strip1 ? D : D - 1;
  auto pairs = genset_pairs(W, D, w1);
  if (pairs.empty() || col_len < 1 || col_y < 0 || col_y > col_len)
    return finish(0, pairs.size(), 0);
  std::vector<Word> cols;
  for (const auto& cw : enumerate_cyclic_words(col_len, col_y)) cols.push_back(cw.canonical());
  if (cols.empty()) return finish(0, pairs.size(), 0);

  PrimeField f(cfg.prime);
  std::map<Word, AssocPoly<PrimeField>> expansions;
  for (const auto& [a, b] : pairs) {
    expansions.try_emplace(a.word());
    expansions.try_emplace(b.word());
  }
  for (auto& [w, poly] : expansions) poly = lie_bracketing(f, LyndonWord(w));

  FoldConfig fc{n, cols.size(), cfg.prime, cfg.rng_seed};
  FoldedMatrix fm(fc);
  uint64_t start_row = 0;
  std::string ckpath;
  if (!cfg.checkpoint_dir.empty()) {
    ckpath = detail::checkpoint_path(cfg, "upper", W, D, w1);
    if (std::filesystem::exists(ckpath)) {
      fm = FoldedMatrix::load(ckpath, fc);
      start_row = fm.rows_ingested();
      if (start_row > pairs.size())
        throw std::runtime_error("checkpoint claims more rows than the pair list provides");
    }
  }

  ThreadPool pool(resolve_threads(cfg.threads));
  const uint64_t interval = cfg.checkpoint_interval ? cfg.checkpoint_interval : 65536;
  for (uint64_t block = start_row; block < pairs.size(); block += interval) {
    const uint64_t block_end = std::min<uint64_t>(pairs.size(), block + interval);
    pool.parallel_for(block, block_end, 1, [&](uint64_t lo, uint64_t hi) {
      for (uint64_t i = lo; i < hi; ++i) {
        const auto& la = expansions.at(pairs[i].first.word());
        const auto& lb = expansions.at(pairs[i].second.word());
        CyclicPoly<PrimeField> row =
            delta_y(f, project_pi(f, concat_product(f, la, lb)), cfg.delta_mode);
        fm.ingest_row(i, detail::row_entries(f, row, cols));
      }
    });
    if (!ckpath.empty()) fm.save(ckpath);
  }

  const uint64_t rank = rank_mod_p(fm, pool);
  return finish(rank, pairs.size(), cols.size());
}

namespace detail {

// Lyndon words over the graded seed alphabet with prescribed total weight
// and depth, as index sequences in lexicographic order.
inline std::vector<std::vector<int>> seed_lyndon_words(const std::vector<SeedElement>& seeds,
                                                       int W, int D) {
  std::vector<std::vector<int>> out;
  int min_w = 0;
  for (const auto& s : seeds) min_w = min_w == 0 ? s.weight : std::min(min_w, s.weight);
  if (min_w == 0) return out;
  std::vector<int> cur;
  auto is_lyndon_seq = [](const std::vector<int>& s) {
    for (size_t k = 1; k < s.size(); ++k) {
      std::vector<int> rot(s.begin() + k, s.end());
      rot.insert(rot.end(), s.begin(), s.begin() + k);
      if (!(s < rot)) return false;
    }
    return !s.empty();
  };
  auto rec = [&](auto&& self, int w_left, int d_left) -> void {
    if (w_left == 0 && d_left == 0) {
      if (is_lyndon_seq(cur)) out.push_back(cur);
      return;
    }
    if (w_left < min_w || d_left < 0) return;
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
      if (seeds[i].weight > w_left || seeds[i].depth > d_left) continue;
      cur.push_back(i);
      self(self, w_left - seeds[i].weight, d_left - seeds[i].depth);
      cur.pop_back();
    }
  };
  rec(rec, W, D);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::pair<std::vector<int>, std::vector<int>> seq_standard_factorization(
    const std::vector<int>& w) {
  size_t split = 1;
  std::vector<int> best(w.begin() + 1, w.end());
  for (size_t i = 2; i < w.size(); ++i) {
    std::vector<int> s(w.begin() + i, w.end());
    if (s < best) {
      best = std::move(s);
      split = i;
    }
  }
  return {std::vector<int>(w.begin(), w.begin() + split), best};
}

inline CyclicPoly<PrimeField> evaluate_seed_word(const PrimeField& f,
                                                 const std::vector<SeedElement>& seeds,
                                                 const std::vector<int>& word,
                                                 std::map<std::vector<int>, CyclicPoly<PrimeField>>& memo) {
  if (word.size() == 1) return seeds[word[0]].value;
  auto it = memo.find(word);
  if (it != memo.end()) return it->second;
  auto [u, v] = seq_standard_factorization(word);
  CyclicPoly<PrimeField> r = bracket_y(f, evaluate_seed_word(f, seeds, u, memo),
                                       evaluate_seed_word(f, seeds, v, memo));
  memo.emplace(word, r);
  return r;
}

}  // namespace detail

// Lower bound: rank of the span of all Lie words in the seed elements of
// total bidegree (W,D), evaluated with the depth-respecting bracket on
// cyclic words. Lyndon words over the seed alphabet span the same space as
// all Lie expressions, without redundancy.
inline uint64_t lower_bound(int W, int D, const std::vector<SeedElement>& extra_seeds,
                            const PipelineConfig& cfg, LowerDetail* detail = nullptr) {
  if (W < 1 || D < 0 || D > W) throw std::invalid_argument("lower_bound: bad bidegree");
  validate_prime(cfg.prime, W);
  const auto t0 = std::chrono::steady_clock::now();
  PrimeField f(cfg.prime);

  LowerDetail ld;
  ld.W = W;
  ld.D = D;
  auto finish = [&](uint64_t rank, uint64_t nrows, uint64_t ncols) {
    ld.rank = rank;
    ld.n_rows = nrows;
    ld.n_cols = ncols;
    ld.value = rank;
    ld.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (detail) *detail = ld;
    return rank;
  };

  std::vector<SeedElement> seeds = sigma_seeds(f, W);
  for (const auto& s : extra_seeds) {
    if (s.weight <= W) seeds.push_back(s);
    auto bd = bidegree(s.value);
    if (!bd || bd->first != s.weight || bd->second != s.depth)
      throw std::invalid_argument("seed '" + s.name + "' bidegree inconsistent with its value");
  }
  std::sort(seeds.begin(), seeds.end(), [](const SeedElement& a, const SeedElement& b) {
    return std::tie(a.weight, a.depth, a.name) < std::tie(b.weight, b.depth, b.name);
  });

  auto exprs = detail::seed_lyndon_words(seeds, W, D);
  if (exprs.empty()) return finish(0, 0, 0);
  std::vector<Word> cols;
  for (const auto& cw : enumerate_cyclic_words(W + 1, D + 1)) cols.push_back(cw.canonical());
  if (cols.empty()) return finish(0, exprs.size(), 0);

  FoldConfig fc{std::min<uint64_t>(exprs.size(), cols.size()), cols.size(), cfg.prime,
                cfg.rng_seed};
  FoldedMatrix fm(fc);
  ThreadPool pool(resolve_threads(cfg.threads));
  pool.parallel_for(0, exprs.size(), 1, [&](uint64_t lo, uint64_t hi) {
    for (uint64_t i = lo; i < hi; ++i) {
      std::map<std::vector<int>, CyclicPoly<PrimeField>> memo;
      CyclicPoly<PrimeField> value = detail::evaluate_seed_word(f, seeds, exprs[i], memo);
      if (value.is_zero()) continue;
      fm.ingest_row(i, detail::row_entries(f, value, cols));
    }
  });
  const uint64_t rank = rank_mod_p(fm, pool);
  return finish(rank, exprs.size(), cols.size());
}

// Dimension of the extended kernel algebra from the plain kernel dimension:
// depth 1 is one-dimensional exactly in odd weights >= 3, and the two
// algebras agree in depth >= 2.
inline uint64_t assemble_hat_lkv(int W, int D, uint64_t lkv_dim) {
  if (D <= 0) return 0;
  if (D == 1) return (W >= 3 && W % 2 == 1) ? 1 : 0;
  return lkv_dim;
}

enum class CellStatus { matched, gap, upper_only, lower_only };

inline const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::matched: return "matched";
    case CellStatus::gap: return "gap";
    case CellStatus::upper_only: return "upper_only";
    case CellStatus::lower_only: return "lower_only";
  }
  return "?";
}

struct BoundResult {
  int W = 0, D = 0;
  uint64_t upper = 0;      // bound on the extended algebra (depth-1 assembled)
  uint64_t raw_upper = 0;  // dim sder - rank, before assembly
  std::optional<uint64_t> lower;
  long long bk = 0;
  CellStatus status = CellStatus::upper_only;
  double seconds = 0;
};

struct TableOptions {
  int min_weight = 3;
  int max_weight = 11;
  int max_depth = 0;  // 0: up to W
  bool with_lower = true;
};

// Progress callback: called after each finished cell.
using CellProgress = std::function<void(const BoundResult&)>;

inline std::vector<BoundResult> run_table(const TableOptions& opt, const PipelineConfig& cfg,
                                          const CellProgress& progress = {}) {
  if (opt.min_weight < 1 || opt.max_weight < opt.min_weight)
    throw std::invalid_argument("run_table: bad weight range");
  validate_prime(cfg.prime, opt.max_weight);
  auto bk = bk_table(std::max(opt.max_weight, 3));
  PrimeField f(cfg.prime);
  std::vector<SeedElement> extra;
  if (!cfg.seed_file.empty()) extra = load_seed_file(cfg.seed_file, f);

  std::vector<BoundResult> out;
  for (int W = opt.min_weight; W <= opt.max_weight; ++W) {
    const int dmax = opt.max_depth > 0 ? std::min(opt.max_depth, W) : W;
    for (int D = 1; D <= dmax; ++D) {
      const auto t0 = std::chrono::steady_clock::now();
      BoundResult r;
      r.W = W;
      r.D = D;
      r.raw_upper = upper_bound(W, D, cfg);
      r.upper = assemble_hat_lkv(W, D, r.raw_upper);
      if (opt.with_lower) {
        uint64_t lb = lower_bound(W, D, extra, cfg);
        if (lb > r.upper)
          throw std::runtime_error("lower bound exceeds upper bound at (" + std::to_string(W) +
                                   "," + std::to_string(D) + ")");
        r.lower = lb;
        r.status = lb == r.upper ? CellStatus::matched : CellStatus::gap;
      } else {
        r.status = CellStatus::upper_only;
      }
      auto it = bk.find({W, D});
      r.bk = it == bk.end() ? 0 : it->second;
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (progress) progress(r);
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline std::string table_to_csv(const std::vector<BoundResult>& results) {
  std::ostringstream os;
  os << "W,D,upper,lower,bk,status\n";
  for (const auto& r : results) {
    os << r.W << "," << r.D << "," << r.upper << ",";
    if (r.lower) os << *r.lower;
    os << "," << r.bk << "," << to_string(r.status) << "\n";
  }
  return os.str();
}

inline std::string table_to_json(const std::vector<BoundResult>& results,
                                 const PipelineConfig& cfg, const TableOptions& opt,
                                 bool with_runtime = true) {
  nlohmann::json j;
  j["config"] = {{"prime", cfg.prime},
                 {"rng_seed", cfg.rng_seed},
                 {"threads", resolve_threads(cfg.threads)},
                 {"delta_mode", to_string(cfg.delta_mode)},
                 {"w1", cfg.w1 > 0 ? nlohmann::json(cfg.w1) : nlohmann::json("auto")},
                 {"seed_file", cfg.seed_file},
                 {"min_weight", opt.min_weight},
                 {"max_weight", opt.max_weight},
                 {"max_depth", opt.max_depth},
                 {"with_lower", opt.with_lower}};
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json c = {{"W", r.W},           {"D", r.D},   {"upper", r.upper},
                        {"raw_upper", r.raw_upper}, {"bk", r.bk}, {"status", to_string(r.status)}};
    c["lower"] = r.lower ? nlohmann::json(*r.lower) : nlohmann::json(nullptr);
    if (with_runtime) c["runtime_s"] = r.seconds;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

// A grid with weights as rows and depths as columns; zero cells print as
// dots, unresolved cells as "lower<upper".
inline std::string table_to_pretty(const std::vector<BoundResult>& results) {
  if (results.empty()) return "";
  int dmax = 1;
  for (const auto& r : results) dmax = std::max(dmax, r.D);
  std::map<std::pair<int, int>, const BoundResult*> cell;
  int wmin = results.front().W, wmax = results.front().W;
  for (const auto& r : results) {
    cell[{r.W, r.D}] = &r;
    wmin = std::min(wmin, r.W);
    wmax = std::max(wmax, r.W);
  }
  std::ostringstream os;
  os << "  W\\D";
  for (int d = 1; d <= dmax; ++d) os << " " << std::setw(6) << d;
  os << "\n";
  for (int w = wmin; w <= wmax; ++w) {
    os << std::setw(5) << w;
    for (int d = 1; d <= dmax; ++d) {
      auto it = cell.find({w, d});
      std::string text;
      if (it != cell.end()) {
        const BoundResult& r = *it->second;
        if (r.status == CellStatus::gap)
          text = std::to_string(*r.lower) + "<" + std::to_string(r.upper);
        else if (r.upper == 0)
          text = ".";
        else
          text = std::to_string(r.upper);
      }
      os << " " << std::setw(6) << text;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace lkv
