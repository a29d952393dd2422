#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lkv/fields.hpp"

namespace lkv {

inline int moebius(int64_t n) {
  if (n < 1) throw std::invalid_argument("moebius needs n >= 1");
  int prime_factors = 0;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      ++prime_factors;
    }
  }
  if (n > 1) ++prime_factors;
  return prime_factors % 2 == 0 ? 1 : -1;
}

// Truncated bivariate power series in s (weight) and t (depth marker) with
// exact rational coefficients. All arithmetic truncates at s-degree
// max_weight; the series handled here keep t-degree at most the s-degree,
// which the storage enforces.
class BiSeries {
 public:
  explicit BiSeries(int max_weight) : maxw_(max_weight) {
    if (max_weight < 0) throw std::invalid_argument("negative truncation order");
    c_.resize(max_weight + 1);
    for (int w = 0; w <= max_weight; ++w) c_[w].assign(w + 1, Rational(0));
  }

  int max_weight() const { return maxw_; }

  Rational at(int w, int d) const {
    if (w < 0 || w > maxw_ || d < 0 || d > w) return Rational(0);
    return c_[w][d];
  }

  void set(int w, int d, const Rational& v) {
    check_index(w, d);
    c_[w][d] = v;
  }

  void add_at(int w, int d, const Rational& v) {
    check_index(w, d);
    c_[w][d] += v;
  }

  BiSeries& operator+=(const BiSeries& o) {
    for (int w = 0; w <= std::min(maxw_, o.maxw_); ++w)
      for (int d = 0; d <= w; ++d) c_[w][d] += o.c_[w][d];
    return *this;
  }

  BiSeries& operator-=(const BiSeries& o) {
    for (int w = 0; w <= std::min(maxw_, o.maxw_); ++w)
      for (int d = 0; d <= w; ++d) c_[w][d] -= o.c_[w][d];
    return *this;
  }

  BiSeries& scale(const Rational& s) {
    for (auto& row : c_)
      for (auto& v : row) v *= s;
    return *this;
  }

  friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
    BiSeries r(std::min(a.maxw_, b.maxw_));
    for (int wa = 0; wa <= r.maxw_; ++wa)
      for (int da = 0; da <= wa; ++da) {
        const Rational& ca = a.c_[wa][da];
        if (ca == 0) continue;
        for (int wb = 0; wb + wa <= r.maxw_; ++wb)
          for (int db = 0; db <= wb; ++db) {
            const Rational& cb = b.c_[wb][db];
            if (cb == 0) continue;
            r.c_[wa + wb][da + db] += ca * cb;
          }
      }
    return r;
  }

  bool is_one_at_origin() const { return c_[0][0] == 1; }

  // Reciprocal of a series with constant term 1.
  BiSeries inverse() const {
    require_unit("series inverse");
    BiSeries q(maxw_);
    q.c_[0][0] = 1;
    for (int n = 1; n <= maxw_; ++n) {
      // q_n = -sum_{m=1..n} f_m q_{n-m}, as polynomials in t
      for (int m = 1; m <= n; ++m) mul_acc(q.c_[n], c_[m], q.c_[n - m], -1);
    }
    return q;
  }

  // Logarithm of a series with constant term 1, through the recurrence
  // n f_n = sum_{m=1..n} m L_m f_{n-m} solved for L_n.
  BiSeries log() const {
    require_unit("series log");
    BiSeries l(maxw_);
    for (int n = 1; n <= maxw_; ++n) {
      l.c_[n] = c_[n];
      std::vector<Rational> acc(n + 1, Rational(0));
      for (int m = 1; m < n; ++m) mul_acc(acc, l.c_[m], c_[n - m], m);
      for (int d = 0; d <= n; ++d) l.c_[n][d] -= acc[d] / n;
    }
    return l;
  }

  // Exponential of a series with zero constant term.
  BiSeries exp() const {
    if (c_[0][0] != 0)
      throw std::invalid_argument("series exp needs zero constant term");
    BiSeries e(maxw_);
    e.c_[0][0] = 1;
    for (int n = 1; n <= maxw_; ++n) {
      std::vector<Rational> acc(n + 1, Rational(0));
      for (int m = 1; m <= n; ++m) mul_acc(acc, c_[m], e.c_[n - m], m);
      for (int d = 0; d <= n; ++d) e.c_[n][d] = acc[d] / n;
    }
    return e;
  }

  // Substitution (s, t) -> (s^l, t^l), dropping terms beyond truncation.
  BiSeries subst_power(int l) const {
    if (l < 1) throw std::invalid_argument("substitution power must be >= 1");
    BiSeries r(maxw_);
    for (int w = 0; w * l <= maxw_; ++w)
      for (int d = 0; d <= w; ++d) r.c_[w * l][d * l] = c_[w][d];
    return r;
  }

  friend bool operator==(const BiSeries& a, const BiSeries& b) {
    if (a.maxw_ != b.maxw_) return false;
    return a.c_ == b.c_;
  }

 private:
  void check_index(int w, int d) const {
    if (w < 0 || w > maxw_) throw std::out_of_range("s-degree out of range");
    if (d < 0 || d > w) throw std::out_of_range("t-degree exceeds s-degree");
  }

  void require_unit(const char* what) const {
    if (c_[0][0] != 1)
      throw std::invalid_argument(std::string(what) + " needs constant term 1");
  }

  // dst += scale * (a * b) for t-polynomials; dst.size() bounds the degree.
  static void mul_acc(std::vector<Rational>& dst, const std::vector<Rational>& a,
                      const std::vector<Rational>& b, long long scale) {
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      Rational ai = a[i] * scale;
      const size_t jmax = std::min(b.size(), dst.size() - i);
      for (size_t j = 0; j < jmax; ++j) {
        if (b[j] == 0) continue;
        dst[i + j] += ai * b[j];
      }
    }
  }

  int maxw_;
  std::vector<std::vector<Rational>> c_;
};

// Plethystic logarithm: Log(f)(s,t) = sum_{l>=1} mu(l)/l * log f(s^l, t^l).
inline BiSeries plethystic_log(const BiSeries& f) {
  if (!f.is_one_at_origin())
    throw std::invalid_argument("plethystic_log needs constant term 1");
  BiSeries l = f.log();
  BiSeries out(f.max_weight());
  for (int k = 1; k <= std::max(1, f.max_weight()); ++k) {
    int mu = moebius(k);
    if (mu == 0) continue;
    BiSeries term = l.subst_power(k);
    term.scale(Rational(mu, k));
    out += term;
  }
  return out;
}

// The conjectural dimension series: the plethystic logarithm of
// 1 / (1 - s^3 t/(1-s^2) + s^12 (t^2 - t^4)/((1-s^4)(1-s^6))).
// Depth-1 generators live in each odd weight >= 3; the weight-12 family
// contributes relations in depth 2 and extra generators in depth 4.
inline BiSeries bk_series(int max_weight) {
  BiSeries den(max_weight);
  den.set(0, 0, Rational(1));
  for (int w = 3; w <= max_weight; w += 2) den.add_at(w, 1, Rational(-1));
  for (int i = 0; 12 + 4 * i <= max_weight; ++i)
    for (int j = 0; 12 + 4 * i + 6 * j <= max_weight; ++j) {
      int w = 12 + 4 * i + 6 * j;
      den.add_at(w, 2, Rational(1));
      den.add_at(w, 4, Rational(-1));
    }
  return plethystic_log(den.inverse());
}

// Predicted bigraded dimensions for 3 <= W <= max_weight, 1 <= D <= W,
// including zero entries. Every coefficient must come out a nonnegative
// integer; anything else signals an implementation bug.
inline std::map<std::pair<int, int>, long long> bk_table(int max_weight) {
  if (max_weight < 3) throw std::invalid_argument("bk_table needs max_weight >= 3");
  BiSeries s = bk_series(max_weight);
  std::map<std::pair<int, int>, long long> out;
  for (int w = 3; w <= max_weight; ++w)
    for (int d = 1; d <= w; ++d) {
      Rational v = s.at(w, d);
      if (denominator(v) != 1)
        throw std::runtime_error("non-integral predicted dimension at (" + std::to_string(w) +
                                 "," + std::to_string(d) + ")");
      BigInt n = numerator(v);
      if (n < 0)
        throw std::runtime_error("negative predicted dimension at (" + std::to_string(w) + "," +
                                 std::to_string(d) + ")");
      if (n > BigInt(std::numeric_limits<long long>::max()))
        throw std::overflow_error("predicted dimension overflows long long");
      out[{w, d}] = static_cast<long long>(n);
    }
  return out;
}

// Weight-graded dimension of the free Lie algebra the predictor describes:
// the t = 1 specialization, i.e. the row sum over depths.
inline long long free_lie_weight_dim(int W) {
  if (W < 3) throw std::invalid_argument("free_lie_weight_dim needs W >= 3");
  auto table = bk_table(W);
  long long s = 0;
  for (int d = 1; d <= W; ++d) s += table.at({W, d});
  return s;
}

}  // namespace lkv
