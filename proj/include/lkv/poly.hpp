#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "lkv/words.hpp"

namespace lkv {

// Finitely supported linear combinations of words (the free associative
// algebra) and of rotation classes (its cyclic quotient), over a coefficient
// field F. Maps never hold zero coefficients and iterate in word order, so
// every serialization is deterministic.

template <class F>
struct AssocPoly {
  using Elem = typename F::Elem;
  std::map<Word, Elem> terms;
  bool is_zero() const { return terms.empty(); }
};

template <class F>
struct CyclicPoly {
  using Elem = typename F::Elem;
  std::map<CyclicWord, Elem> terms;
  bool is_zero() const { return terms.empty(); }
};

template <class F>
void add_term(const F& f, AssocPoly<F>& p, const Word& w, const typename F::Elem& c) {
  if (f.is_zero(c)) return;
  auto [it, inserted] = p.terms.emplace(w, c);
  if (!inserted) {
    it->second = f.add(it->second, c);
    if (f.is_zero(it->second)) p.terms.erase(it);
  }
}

template <class F>
void add_term(const F& f, CyclicPoly<F>& p, const CyclicWord& w, const typename F::Elem& c) {
  if (f.is_zero(c)) return;
  auto [it, inserted] = p.terms.emplace(w, c);
  if (!inserted) {
    it->second = f.add(it->second, c);
    if (f.is_zero(it->second)) p.terms.erase(it);
  }
}

template <class F, class P>
void add_scaled(const F& f, P& dst, const P& src, const typename F::Elem& s) {
  for (const auto& [w, c] : src.terms) add_term(f, dst, w, f.mul(c, s));
}

template <class F, class P>
P poly_add(const F& f, const P& a, const P& b) {
  P out = a;
  add_scaled(f, out, b, f.one());
  return out;
}

template <class F, class P>
P poly_sub(const F& f, const P& a, const P& b) {
  P out = a;
  add_scaled(f, out, b, f.neg(f.one()));
  return out;
}

template <class F, class P>
P scaled(const F& f, const P& p, const typename F::Elem& s) {
  P out;
  add_scaled(f, out, p, s);
  return out;
}

template <class F>
AssocPoly<F> word_poly(const F& f, const Word& w) {
  AssocPoly<F> p;
  add_term(f, p, w, f.one());
  return p;
}

template <class F>
AssocPoly<F> concat_product(const F& f, const AssocPoly<F>& a, const AssocPoly<F>& b) {
  AssocPoly<F> out;
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms)
      add_term(f, out, wa.concat(wb), f.mul(ca, cb));
  return out;
}

template <class F>
AssocPoly<F> commutator(const F& f, const AssocPoly<F>& a, const AssocPoly<F>& b) {
  return poly_sub(f, concat_product(f, a, b), concat_product(f, b, a));
}

// Prefix-stripping operator: a word AB maps to B, anything else to 0.
template <class F>
AssocPoly<F> partial(const F& f, const AssocPoly<F>& p, const Word& prefix) {
  if (prefix.empty()) throw std::invalid_argument("partial needs a nonempty prefix");
  AssocPoly<F> out;
  for (const auto& [w, c] : p.terms)
    if (w.starts_with(prefix)) add_term(f, out, w.without_prefix(prefix.length()), c);
  return out;
}

// Projection onto rotation classes.
template <class F>
CyclicPoly<F> project_pi(const F& f, const AssocPoly<F>& p) {
  CyclicPoly<F> out;
  for (const auto& [w, c] : p.terms) add_term(f, out, CyclicWord(w), c);
  return out;
}

// Sum of all rotations of each class, with multiplicity for periodic words
// (the index sum runs over every starting position).
template <class F>
AssocPoly<F> sigma_lift(const F& f, const CyclicPoly<F>& c) {
  AssocPoly<F> out;
  for (const auto& [cw, coef] : c.terms) {
    const Word& w = cw.canonical();
    for (int j = 0; j < w.length(); ++j) add_term(f, out, w.rotated_left(j), coef);
  }
  return out;
}

// The half-divergence operators detect rotations beginning with a doubled
// letter. The literal operator composition strips both letters (strip2); the
// variant that strips a single leading letter (strip1) keeps the image in
// the bidegree slice the rank pipeline consumes, and is the default.
enum class DeltaMode { strip1, strip2 };

inline const char* to_string(DeltaMode m) {
  return m == DeltaMode::strip1 ? "strip1" : "strip2";
}

namespace detail {

template <class F>
CyclicPoly<F> delta_letter(const F& f, const CyclicPoly<F>& c, bool letter_y, DeltaMode mode) {
  Word dd = letter_y ? Word::from_string("YY") : Word::from_string("XX");
  const int strip = mode == DeltaMode::strip1 ? 1 : 2;
  CyclicPoly<F> out;
  for (const auto& [cw, coef] : c.terms) {
    const Word& w = cw.canonical();
    for (int j = 0; j < w.length(); ++j) {
      Word r = w.rotated_left(j);
      if (r.starts_with(dd)) add_term(f, out, CyclicWord(r.without_prefix(strip)), coef);
    }
  }
  return out;
}

}  // namespace detail

template <class F>
CyclicPoly<F> delta_y(const F& f, const CyclicPoly<F>& c, DeltaMode mode) {
  return detail::delta_letter(f, c, /*letter_y=*/true, mode);
}

template <class F>
CyclicPoly<F> delta_x(const F& f, const CyclicPoly<F>& c, DeltaMode mode) {
  return detail::delta_letter(f, c, /*letter_y=*/false, mode);
}

template <class F>
CyclicPoly<F> delta(const F& f, const CyclicPoly<F>& c, DeltaMode mode) {
  return poly_add(f, delta_x(f, c, mode), delta_y(f, c, mode));
}

namespace detail {

template <class F>
CyclicPoly<F> bracket_letter(const F& f, bool letter_y, const CyclicPoly<F>& a,
                             const CyclicPoly<F>& b) {
  Word l = Word::letter(letter_y);
  AssocPoly<F> lp = word_poly(f, l);
  AssocPoly<F> u = partial(f, sigma_lift(f, a), l);
  AssocPoly<F> v = partial(f, sigma_lift(f, b), l);
  return project_pi(f, concat_product(f, commutator(f, lp, u), v));
}

}  // namespace detail

template <class F>
CyclicPoly<F> bracket_y(const F& f, const CyclicPoly<F>& a, const CyclicPoly<F>& b) {
  return detail::bracket_letter(f, /*letter_y=*/true, a, b);
}

template <class F>
CyclicPoly<F> bracket_x(const F& f, const CyclicPoly<F>& a, const CyclicPoly<F>& b) {
  return detail::bracket_letter(f, /*letter_y=*/false, a, b);
}

template <class F>
CyclicPoly<F> bracket_full(const F& f, const CyclicPoly<F>& a, const CyclicPoly<F>& b) {
  return poly_add(f, bracket_x(f, a, b), bracket_y(f, a, b));
}

// Keeps the terms of depth >= d (depth of a class is its Y-count minus one).
template <class F>
CyclicPoly<F> project_depth_geq(const F& f, const CyclicPoly<F>& c, int d) {
  CyclicPoly<F> out;
  for (const auto& [cw, coef] : c.terms)
    if (cw.depth() >= d) add_term(f, out, cw, coef);
  return out;
}

// (weight, depth) when every class in the support agrees; nullopt otherwise
// or for the zero polynomial.
template <class F>
std::optional<std::pair<int, int>> bidegree(const CyclicPoly<F>& c) {
  std::optional<std::pair<int, int>> bd;
  for (const auto& [cw, coef] : c.terms) {
    std::pair<int, int> here{cw.weight(), cw.depth()};
    if (!bd)
      bd = here;
    else if (*bd != here)
      return std::nullopt;
  }
  return bd;
}

template <class F>
std::optional<std::pair<int, int>> bidegree(const AssocPoly<F>& p) {
  std::optional<std::pair<int, int>> bd;
  for (const auto& [w, coef] : p.terms) {
    std::pair<int, int> here{w.length(), w.y_count()};
    if (!bd)
      bd = here;
    else if (*bd != here)
      return std::nullopt;
  }
  return bd;
}

// Serialization: a list of (coefficient, word) pairs in word order.
template <class F>
std::string to_string(const F& f, const AssocPoly<F>& p) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [w, c] : p.terms) {
    if (!first) os << ",";
    os << "(" << f.to_string(c) << "," << w.str() << ")";
    first = false;
  }
  os << "]";
  return os.str();
}

template <class F>
std::string to_string(const F& f, const CyclicPoly<F>& p) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [w, c] : p.terms) {
    if (!first) os << ",";
    os << "(" << f.to_string(c) << "," << w.str() << ")";
    first = false;
  }
  os << "]";
  return os.str();
}

}  // namespace lkv
