#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lkv/bk.hpp"
#include "lkv/modmat.hpp"
#include "lkv/poly.hpp"
#include "lkv/words.hpp"

namespace lkv {

// Chen-Fox-Lyndon standard factorization w = uv of a Lyndon word of length
// >= 2: v is the lexicographically least proper suffix.
inline std::pair<Word, Word> standard_factorization(const Word& w) {
  if (w.length() < 2) throw std::invalid_argument("standard factorization needs length >= 2");
  int split = 1;
  Word best = w.without_prefix(1);
  for (int i = 2; i < w.length(); ++i) {
    Word s = w.without_prefix(i);
    if (s < best) {
      best = s;
      split = i;
    }
  }
  return {w.prefix(split), best};
}

namespace detail {

template <class F>
AssocPoly<F> lie_bracketing_word(const F& f, const Word& w) {
  if (w.length() == 1) return word_poly(f, w);
  auto [u, v] = standard_factorization(w);
  return commutator(f, lie_bracketing_word(f, u), lie_bracketing_word(f, v));
}

}  // namespace detail

// Associative expansion of the standard bracketing of a Lyndon word. The
// lexicographically smallest word of the support is the Lyndon word itself,
// with coefficient 1.
template <class F>
AssocPoly<F> lie_bracketing(const F& f, const LyndonWord& lw) {
  return detail::lie_bracketing_word(f, lw.word());
}

// k-fold left bracketing [X,[X,...,[X,p]]].
template <class F>
AssocPoly<F> ad_x_power(const F& f, int k, const AssocPoly<F>& p) {
  if (k < 0) throw std::invalid_argument("ad power must be >= 0");
  AssocPoly<F> xp = word_poly(f, Word::letter(false));
  AssocPoly<F> out = p;
  for (int i = 0; i < k; ++i) out = commutator(f, xp, out);
  return out;
}

// A tangential derivation (g1, g2), acting by X -> [X,g1], Y -> [Y,g2]. It
// is special when [X,g1] + [Y,g2] = 0; in bidegree (W,D) the component g2
// has D letters Y and g1 has D+1, both of length W.
template <class F>
struct SpecialPair {
  AssocPoly<F> g1, g2;
};

template <class F>
AssocPoly<F> tangential_defect(const F& f, const SpecialPair<F>& sp) {
  AssocPoly<F> xp = word_poly(f, Word::letter(false));
  AssocPoly<F> yp = word_poly(f, Word::letter(true));
  return poly_add(f, commutator(f, xp, sp.g1), commutator(f, yp, sp.g2));
}

template <class F>
bool is_special(const F& f, const SpecialPair<F>& sp) {
  return tangential_defect(f, sp).is_zero();
}

// The depth-1 generator of odd weight 2k+1:
//   g2 = ad_X^{2k} Y,
//   g1 = 1/2 * sum_{j=0}^{2k-1} (-1)^{j+1} [ad_X^j Y, ad_X^{2k-1-j} Y].
// The alternating sign makes the pair-of-indices terms reinforce rather than
// cancel; the defect [X,g1] + [Y,g2] vanishes identically.
template <class F>
SpecialPair<F> sigma_bar(const F& f, int k) {
  if (k < 1) throw std::invalid_argument("sigma_bar needs k >= 1");
  if (2 * k + 1 > Word::kMaxLength) throw std::length_error("sigma_bar weight exceeds word capacity");
  std::vector<AssocPoly<F>> ad(2 * k + 1);
  ad[0] = word_poly(f, Word::letter(true));
  AssocPoly<F> xp = word_poly(f, Word::letter(false));
  for (int i = 1; i <= 2 * k; ++i) ad[i] = commutator(f, xp, ad[i - 1]);
  SpecialPair<F> sp;
  sp.g2 = ad[2 * k];
  const auto half = f.inv(f.from_int(2));
  for (int j = 0; j <= 2 * k - 1; ++j) {
    auto s = (j % 2 == 0) ? f.neg(half) : half;
    add_scaled(f, sp.g1, commutator(f, ad[j], ad[2 * k - 1 - j]), s);
  }
  return sp;
}

// Embedding of special derivations into cyclic words:
// (g1, g2) |-> 1/(D+1) * pi(Y g2).
template <class F>
CyclicPoly<F> iota(const F& f, const SpecialPair<F>& sp) {
  if (sp.g2.is_zero()) return CyclicPoly<F>{};
  auto bd = bidegree(sp.g2);
  if (!bd) throw std::invalid_argument("iota needs a homogeneous pair");
  const int depth = bd->second;
  const auto c = f.inv(f.from_int(depth + 1));
  AssocPoly<F> yp = word_poly(f, Word::letter(true));
  return scaled(f, project_pi(f, concat_product(f, yp, sp.g2)), c);
}

// Dimension of the free Lie algebra on two generators in a given weight,
// and in a given weight and Y-count (Witt-style Moebius sums).
inline BigInt dim_f2(int W) {
  if (W < 1) throw std::invalid_argument("dim_f2 needs W >= 1");
  BigInt total = 0;
  for (int d = 1; d <= W; ++d) {
    if (W % d != 0) continue;
    BigInt pw = BigInt(1) << (W / d);
    total += moebius(d) * pw;
  }
  BigInt q = total / W;
  if (q * W != total) throw std::logic_error("free Lie dimension not integral");
  return q;
}

inline BigInt dim_f2(int W, int D) {
  if (W < 1) throw std::invalid_argument("dim_f2 needs W >= 1");
  if (D < 0 || D > W) return 0;
  int g = std::gcd(W, D);
  BigInt total = 0;
  for (int d = 1; d <= g; ++d) {
    if (g % d != 0) continue;
    total += moebius(d) * binomial(W / d, D / d);
  }
  BigInt q = total / W;
  if (q * W != total) throw std::logic_error("free Lie dimension not integral");
  return q;
}

// Dimension of the special derivations in bidegree (W,D). The defect map
// (g1,g2) -> [X,g1] + [Y,g2] surjects onto the weight-(W+1) slice for
// W >= 1, giving an alternating sum of free Lie dimensions.
inline BigInt dim_sder(int W, int D) {
  if (W < 1) throw std::invalid_argument("dim_sder needs W >= 1");
  if (D < 0 || D > W) return 0;
  BigInt v = dim_f2(W, D + 1) + dim_f2(W, D) - dim_f2(W + 1, D + 1);
  if (v < 0) throw std::runtime_error("negative special-derivation dimension: formula misuse");
  return v;
}

inline int default_w1(int W) { return (W + 1) / 2; }

// Generating pairs for the image of iota in bidegree (W,D): Lyndon words
// (a,b) of lengths (W1, W2=W+1-W1) whose Y-counts sum to D+1. When W1 == W2
// the classes (ab) and (ba) coincide, so unordered pairs suffice.
inline std::vector<std::pair<LyndonWord, LyndonWord>> genset_pairs(int W, int D, int W1) {
  if (W < 1 || D < 0 || D > W) throw std::invalid_argument("genset_pairs: bad bidegree");
  if (W1 < 1 || W1 > W) throw std::invalid_argument("genset_pairs: W1 out of range");
  const int W2 = W + 1 - W1;
  const int Dtot = D + 1;
  std::vector<std::pair<LyndonWord, LyndonWord>> out;
  if (W1 != W2) {
    for (int D1 = 0; D1 <= Dtot; ++D1) {
      const int D2 = Dtot - D1;
      if (D1 > W1 || D2 < 0 || D2 > W2) continue;
      auto la = lyndon_words(W1, D1);
      auto lb = lyndon_words(W2, D2);
      for (const auto& a : la)
        for (const auto& b : lb) out.emplace_back(a, b);
    }
  } else {
    for (int D1 = 0; 2 * D1 <= Dtot; ++D1) {
      const int D2 = Dtot - D1;
      if (D1 > W1 || D2 > W2) continue;
      auto la = lyndon_words(W1, D1);
      if (D1 < D2) {
        auto lb = lyndon_words(W2, D2);
        for (const auto& a : la)
          for (const auto& b : lb) out.emplace_back(a, b);
      } else {
        for (size_t i = 0; i < la.size(); ++i)
          for (size_t j = i; j < la.size(); ++j) out.emplace_back(la[i], la[j]);
      }
    }
  }
  return out;
}

// Pair count by the dimension formulas, without enumeration.
inline BigInt genset_pair_count(int W, int D, int W1) {
  if (W < 1 || D < 0 || D > W) throw std::invalid_argument("genset_pair_count: bad bidegree");
  if (W1 < 1 || W1 > W) throw std::invalid_argument("genset_pair_count: W1 out of range");
  const int W2 = W + 1 - W1;
  const int Dtot = D + 1;
  BigInt total = 0;
  if (W1 != W2) {
    for (int D1 = 0; D1 <= Dtot; ++D1)
      total += dim_f2(W1, D1) * dim_f2(W2, Dtot - D1);
  } else {
    for (int D1 = 0; 2 * D1 <= Dtot; ++D1) {
      const int D2 = Dtot - D1;
      if (D1 < D2)
        total += dim_f2(W1, D1) * dim_f2(W2, D2);
      else {
        BigInt q = dim_f2(W1, D1);
        total += q * (q + 1) / 2;
      }
    }
  }
  return total;
}

// Streams pi(lie(a) * lie(b)) over the generating pairs, in pair order.
template <class F, class Fn>
void for_each_genset_row(const F& f, int W, int D, int W1, Fn&& fn) {
  auto pairs = genset_pairs(W, D, W1);
  std::map<Word, AssocPoly<F>> cache;
  auto expansion = [&](const LyndonWord& lw) -> const AssocPoly<F>& {
    auto it = cache.find(lw.word());
    if (it == cache.end()) it = cache.emplace(lw.word(), lie_bracketing(f, lw)).first;
    return it->second;
  };
  for (size_t i = 0; i < pairs.size(); ++i) {
    CyclicPoly<F> row =
        project_pi(f, concat_product(f, expansion(pairs[i].first), expansion(pairs[i].second)));
    fn(i, row);
  }
}

template <class F>
std::vector<CyclicPoly<F>> genset_rows(const F& f, int W, int D, int W1) {
  std::vector<CyclicPoly<F>> rows;
  for_each_genset_row(f, W, D, W1,
                      [&](size_t, const CyclicPoly<F>& r) { rows.push_back(r); });
  return rows;
}

// Exact-rational basis of the special derivations in bidegree (W,D): the
// kernel of the defect map restricted to Lie elements, in Lyndon-basis
// coordinates. Guarded to small weights.
inline std::vector<SpecialPair<RationalField>> oracle_sder_basis(int W, int D,
                                                                 int weight_guard = 10) {
  if (W < 1 || D < 0 || D > W) throw std::invalid_argument("oracle_sder_basis: bad bidegree");
  if (W > weight_guard)
    throw std::length_error("oracle_sder_basis guarded to weight <= " + std::to_string(weight_guard));
  RationalField f;
  auto lynA = D + 1 <= W ? lyndon_words(W, D + 1) : std::vector<LyndonWord>{};
  auto lynB = lyndon_words(W, D);
  AssocPoly<RationalField> xp = word_poly(f, Word::letter(false));
  AssocPoly<RationalField> yp = word_poly(f, Word::letter(true));
  std::vector<AssocPoly<RationalField>> basisA, basisB, defect_cols;
  for (const auto& a : lynA) {
    basisA.push_back(lie_bracketing(f, a));
    defect_cols.push_back(commutator(f, xp, basisA.back()));
  }
  for (const auto& b : lynB) {
    basisB.push_back(lie_bracketing(f, b));
    defect_cols.push_back(commutator(f, yp, basisB.back()));
  }
  const size_t nvars = defect_cols.size();
  std::map<Word, size_t> eq_index;
  for (const auto& col : defect_cols)
    for (const auto& [w, c] : col.terms) eq_index.emplace(w, eq_index.size());
  std::vector<std::vector<Rational>> m(eq_index.size(), std::vector<Rational>(nvars, Rational(0)));
  for (size_t j = 0; j < nvars; ++j)
    for (const auto& [w, c] : defect_cols[j].terms) m[eq_index.at(w)][j] = c;
  auto kernel = exact_kernel_basis(std::move(m), nvars);
  std::vector<SpecialPair<RationalField>> out;
  for (const auto& v : kernel) {
    SpecialPair<RationalField> sp;
    for (size_t i = 0; i < basisA.size(); ++i) add_scaled(f, sp.g1, basisA[i], v[i]);
    for (size_t j = 0; j < basisB.size(); ++j)
      add_scaled(f, sp.g2, basisB[j], v[basisA.size() + j]);
    out.push_back(std::move(sp));
  }
  return out;
}

}  // namespace lkv
