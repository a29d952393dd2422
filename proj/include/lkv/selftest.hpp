#pragma once

#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lkv/bounds.hpp"
#include "lkv/lie.hpp"
#include "lkv/modmat.hpp"
#include "lkv/poly.hpp"
#include "lkv/reference.hpp"
#include "lkv/words.hpp"

namespace lkv {

// Oracle-backed property checks shared by the self-test command and the
// test suites. Everything here is driven by seeded generators, so runs are
// reproducible.

inline CyclicPoly<RationalField> random_cyclic_poly(std::mt19937_64& rng, int W, int D) {
  RationalField f;
  CyclicPoly<RationalField> p;
  auto classes = enumerate_cyclic_words(W + 1, D + 1);
  std::uniform_int_distribution<int> coeff(-4, 4);
  while (p.is_zero())
    for (const auto& cw : classes) add_term(f, p, cw, Rational(coeff(rng)));
  return p;
}

inline std::vector<std::vector<Rational>> to_dense_rows(
    const std::vector<CyclicPoly<RationalField>>& polys, int length, int y_count) {
  std::vector<Word> basis;
  for (const auto& cw : enumerate_cyclic_words(length, y_count)) basis.push_back(cw.canonical());
  std::vector<std::vector<Rational>> rows;
  for (const auto& p : polys) {
    std::vector<Rational> row(basis.size(), Rational(0));
    for (const auto& [cw, c] : p.terms) {
      auto it = std::lower_bound(basis.begin(), basis.end(), cw.canonical());
      if (it == basis.end() || *it != cw.canonical())
        throw std::logic_error("polynomial outside the expected slice");
      row[static_cast<size_t>(it - basis.begin())] = c;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// rank A == rank B == rank (A stacked on B)
inline bool spans_equal(const std::vector<std::vector<Rational>>& a,
                        const std::vector<std::vector<Rational>>& b) {
  size_t ra = exact_rank(a);
  size_t rb = exact_rank(b);
  if (ra != rb) return false;
  std::vector<std::vector<Rational>> stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  return exact_rank(stacked) == ra;
}

struct FoldTrialStats {
  int trials = 0;
  int equal = 0;
  bool monotone = true;
};

// Random rational matrices of known exact rank, folded and ranked mod p.
// The folded rank must never exceed the exact rank and almost always
// equals it.
inline FoldTrialStats fold_soundness_trials(uint64_t seed, int trials, uint32_t prime,
                                            unsigned threads = 1) {
  std::mt19937_64 rng(seed);
  FoldTrialStats stats;
  stats.trials = trials;
  ThreadPool pool(threads ? threads : 1);
  for (int t = 0; t < trials; ++t) {
    std::uniform_int_distribution<int> mdist(5, 40), ndist(8, 60), edist(-3, 3);
    const int m = mdist(rng), n = ndist(rng);
    std::uniform_int_distribution<int> rdist(1, std::min(m, n));
    const int r = rdist(rng);
    std::vector<std::vector<int>> u(m, std::vector<int>(r)), v(r, std::vector<int>(n));
    for (auto& row : u)
      for (auto& e : row) e = edist(rng);
    for (auto& row : v)
      for (auto& e : row) e = edist(rng);
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        long long s = 0;
        for (int k = 0; k < r; ++k) s += static_cast<long long>(u[i][k]) * v[k][j];
        a[i][j] = s;
      }
    const size_t true_rank = exact_rank(a);
    const uint64_t square = true_rank + 2 + t % 3;
    FoldedMatrix fm(FoldConfig{square, static_cast<uint64_t>(n), prime, seed + t});
    PrimeField f(prime);
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<uint64_t, uint32_t>> entries;
      for (int j = 0; j < n; ++j) {
        auto num = numerator(a[i][j]);
        if (num == 0) continue;
        entries.emplace_back(j, f.from_int(static_cast<long long>(num)));
      }
      fm.ingest_row(i, entries);
    }
    const uint64_t folded_rank = rank_mod_p(fm, pool);
    if (folded_rank > true_rank) stats.monotone = false;
    if (folded_rank == true_rank) ++stats.equal;
  }
  return stats;
}

struct ModeCell {
  int W = 0, D = 0;
  uint64_t strip1_value = 0;
  uint64_t strip2_value = 0;
  std::optional<long long> reference;
};

// Runs the upper-bound grid under both half-divergence conventions and
// reports the assembled values next to the reference table.
inline std::vector<ModeCell> mode_adjudication(int max_weight, PipelineConfig cfg) {
  std::vector<ModeCell> out;
  for (int W = 3; W <= max_weight; ++W)
    for (int D = 1; D <= W; ++D) {
      ModeCell cell;
      cell.W = W;
      cell.D = D;
      cfg.delta_mode = DeltaMode::strip1;
      cell.strip1_value = assemble_hat_lkv(W, D, upper_bound(W, D, cfg));
      cfg.delta_mode = DeltaMode::strip2;
      cell.strip2_value = assemble_hat_lkv(W, D, upper_bound(W, D, cfg));
      cell.reference = reference_dim(W, D);
      out.push_back(cell);
    }
  return out;
}

struct SelftestSection {
  SelftestSection() = default;
  explicit SelftestSection(std::string n) : name(std::move(n)) {}
  std::string name;
  bool passed = false;
  std::vector<std::string> lines;
};

struct SelftestReport {
  std::vector<SelftestSection> sections;
  bool all_passed() const {
    for (const auto& s : sections)
      if (!s.passed) return false;
    return true;
  }
};

struct SelftestOptions {
  uint32_t prime = 3323;
  uint64_t rng_seed = 0;
  unsigned threads = 0;
  DeltaMode delta_mode = DeltaMode::strip1;
  int mode_report_max_weight = 11;
  int lemma_max_weight = 8;
};

inline SelftestReport run_selftest(const SelftestOptions& opt) {
  SelftestReport report;
  RationalField q;

  {
    SelftestSection s{"prime validation"};
    try {
      validate_prime(opt.prime, opt.mode_report_max_weight);
      s.passed = true;
      s.lines.push_back("prime " + std::to_string(opt.prime) + " accepted for weights <= " +
                        std::to_string(opt.mode_report_max_weight));
    } catch (const std::exception& e) {
      s.passed = false;
      s.lines.push_back(std::string("rejected: ") + e.what());
    }
    bool usable = s.passed;
    report.sections.push_back(std::move(s));
    if (!usable) return report;
  }

  {
    SelftestSection s{"bracket axioms"};
    std::mt19937_64 rng(opt.rng_seed + 1);
    s.passed = true;
    std::uniform_int_distribution<int> wdist(2, 6);
    for (int t = 0; t < 30 && s.passed; ++t) {
      auto rand_poly = [&] {
        int W = wdist(rng);
        std::uniform_int_distribution<int> ddist(0, W - 1);
        return random_cyclic_poly(rng, W, ddist(rng));
      };
      auto a = rand_poly(), b = rand_poly(), c = rand_poly();
      if (!poly_add(q, bracket_y(q, a, b), bracket_y(q, b, a)).is_zero() ||
          !poly_add(q, bracket_x(q, a, b), bracket_x(q, b, a)).is_zero() ||
          !poly_add(q, bracket_full(q, a, b), bracket_full(q, b, a)).is_zero()) {
        s.passed = false;
        s.lines.push_back("antisymmetry failed at trial " + std::to_string(t));
        break;
      }
      auto jac = poly_add(
          q, poly_add(q, bracket_y(q, bracket_y(q, a, b), c), bracket_y(q, bracket_y(q, b, c), a)),
          bracket_y(q, bracket_y(q, c, a), b));
      auto jac_full = poly_add(
          q,
          poly_add(q, bracket_full(q, bracket_full(q, a, b), c),
                   bracket_full(q, bracket_full(q, b, c), a)),
          bracket_full(q, bracket_full(q, c, a), b));
      if (!jac.is_zero() || !jac_full.is_zero()) {
        s.passed = false;
        s.lines.push_back("Jacobi failed at trial " + std::to_string(t));
      }
    }
    if (s.passed) s.lines.push_back("antisymmetry and Jacobi hold on 30 random triples");
    report.sections.push_back(std::move(s));
  }

  {
    SelftestSection s{"projection identity"};
    std::mt19937_64 rng(opt.rng_seed + 2);
    s.passed = true;
    std::uniform_int_distribution<int> wdist(1, 8);
    for (int t = 0; t < 100 && s.passed; ++t) {
      int W = wdist(rng);
      std::uniform_int_distribution<int> ddist(0, W - 1);
      int D = ddist(rng);
      auto beta = random_cyclic_poly(rng, W, D);
      auto lhs = project_pi(
          q, concat_product(q, word_poly(q, Word::letter(true)),
                            partial(q, sigma_lift(q, beta), Word::letter(true))));
      auto rhs = scaled(q, beta, q.from_int(D + 1));
      if (!poly_sub(q, lhs, rhs).is_zero()) {
        s.passed = false;
        s.lines.push_back("identity failed at trial " + std::to_string(t));
      }
    }
    if (s.passed) s.lines.push_back("pi(Y dY Sigma beta) = (D+1) beta on 100 random inputs");
    report.sections.push_back(std::move(s));
  }

  {
    SelftestSection s{"sigma generators"};
    s.passed = true;
    for (int k = 1; k <= 6 && s.passed; ++k) {
      auto sp = sigma_bar(q, k);
      if (!is_special(q, sp)) {
        s.passed = false;
        s.lines.push_back("defect nonzero for k=" + std::to_string(k));
      }
    }
    for (int k = 1; k <= 4 && s.passed; ++k) {
      auto img = delta_y(q, iota(q, sigma_bar(q, k)), DeltaMode::strip1);
      CyclicPoly<RationalField> expect;
      std::string xs(2 * k, 'X');
      add_term(q, expect, CyclicWord(Word::from_string(xs + "Y")), q.one());
      if (!poly_sub(q, img, expect).is_zero()) {
        s.passed = false;
        s.lines.push_back("half-divergence image wrong for k=" + std::to_string(k));
      }
    }
    if (s.passed) s.lines.push_back("defect vanishes (k<=6); images are single classes (k<=4)");
    report.sections.push_back(std::move(s));
  }

  {
    SelftestSection s{"generating set lemma"};
    s.passed = true;
    for (int W = 2; W <= opt.lemma_max_weight && s.passed; ++W)
      for (int D = 0; D <= W && s.passed; ++D) {
        auto basis = oracle_sder_basis(W, D);
        std::vector<CyclicPoly<RationalField>> images;
        for (const auto& sp : basis) images.push_back(iota(q, sp));
        auto image_rows = to_dense_rows(images, W + 1, D + 1);
        if (exact_rank(image_rows) != basis.size()) {
          s.passed = false;
          s.lines.push_back("iota not injective on the oracle basis at (" + std::to_string(W) +
                            "," + std::to_string(D) + ")");
          break;
        }
        for (int w1 : std::set<int>{default_w1(W), 1, W}) {
          auto rows = to_dense_rows(genset_rows(q, W, D, w1), W + 1, D + 1);
          if (!spans_equal(rows, image_rows)) {
            s.passed = false;
            s.lines.push_back("span mismatch at (" + std::to_string(W) + "," + std::to_string(D) +
                              ") with W1=" + std::to_string(w1));
            break;
          }
        }
      }
    if (s.passed)
      s.lines.push_back("generating rows span the embedded special derivations for W <= " +
                        std::to_string(opt.lemma_max_weight));
    report.sections.push_back(std::move(s));
  }

  {
    SelftestSection s{"fold soundness"};
    auto stats = fold_soundness_trials(opt.rng_seed + 3, 60, opt.prime, resolve_threads(opt.threads));
    std::ostringstream os;
    os << stats.equal << "/" << stats.trials << " folded ranks equal the exact rank; monotone="
       << (stats.monotone ? "yes" : "NO");
    s.lines.push_back(os.str());
    s.passed = stats.monotone && stats.equal >= stats.trials * 95 / 100;
    report.sections.push_back(std::move(s));
  }

  {
    SelftestSection s{"half-divergence mode adjudication"};
    PipelineConfig cfg;
    cfg.prime = opt.prime;
    cfg.rng_seed = opt.rng_seed;
    cfg.threads = opt.threads;
    auto cells = mode_adjudication(opt.mode_report_max_weight, cfg);
    bool strip1_ok = true;
    int strip2_mismatch = 0;
    for (const auto& c : cells) {
      if (!c.reference) continue;
      bool ok1 = static_cast<long long>(c.strip1_value) == *c.reference;
      bool ok2 = static_cast<long long>(c.strip2_value) == *c.reference;
      if (!ok1) {
        strip1_ok = false;
        s.lines.push_back("strip1 mismatch at (" + std::to_string(c.W) + "," + std::to_string(c.D) +
                          "): got " + std::to_string(c.strip1_value) + ", reference " +
                          std::to_string(*c.reference));
      }
      if (!ok2) {
        ++strip2_mismatch;
        s.lines.push_back("strip2 mismatch at (" + std::to_string(c.W) + "," + std::to_string(c.D) +
                          "): got " + std::to_string(c.strip2_value) + ", reference " +
                          std::to_string(*c.reference));
      }
    }
    std::ostringstream os;
    os << "strip1 " << (strip1_ok ? "matches" : "FAILS") << " the reference grid (W <= "
       << opt.mode_report_max_weight << "); strip2 mismatches: " << strip2_mismatch;
    s.lines.push_back(os.str());
    s.passed = strip1_ok;  // strip2 results are recorded, not gating
    report.sections.push_back(std::move(s));
  }

  return report;
}

}  // namespace lkv
