#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lkv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Coefficient domains. Polynomial and matrix code is templated on a small
// field object exposing the operations below; the two instances used are
// exact rationals (oracles, small-weight checks) and a prime field
// (production pipelines).

struct RationalField {
  using Elem = Rational;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(long long v) const { return Elem(v); }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw std::domain_error("rational inverse of zero");
    return Elem(1) / a;
  }
  bool is_zero(const Elem& a) const { return a == 0; }

  std::string to_string(const Elem& a) const {
    return numerator(a).str() + "/" + denominator(a).str();
  }
};

class PrimeField {
 public:
  using Elem = uint32_t;

  explicit PrimeField(uint32_t p) : p_(p) {
    // Full primality is checked by validate_prime at configuration time;
    // here we only reject moduli the arithmetic cannot support.
    if (p < 3 || p % 2 == 0 || p >= (1u << 31))
      throw std::invalid_argument("prime field modulus must be an odd prime below 2^31");
  }

  uint32_t modulus() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
  }

  Elem add(Elem a, Elem b) const {
    uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<uint64_t>(a) * b % p_);
  }
  Elem neg(Elem a) const { return a ? p_ - a : 0; }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("element not invertible mod p");
    int64_t t = 0, nt = 1;
    int64_t r = p_, nr = a;
    while (nr != 0) {
      int64_t q = r / nr;
      t -= q * nt;
      std::swap(t, nt);
      r -= q * nr;
      std::swap(r, nr);
    }
    if (r != 1) throw std::domain_error("element not invertible mod p");
    if (t < 0) t += p_;
    return static_cast<Elem>(t);
  }
  bool is_zero(Elem a) const { return a == 0; }

  std::string to_string(Elem a) const { return std::to_string(a); }

 private:
  uint32_t p_;
};

}  // namespace lkv
