#ifndef EXTORTH_FIELDS_HPP
#define EXTORTH_FIELDS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "extorth/errors.hpp"

namespace extorth {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// The field of rational numbers with arbitrary-precision arithmetic.
// Elements are always in lowest terms with positive denominator (the
// backing type maintains that canonical form).
struct RationalField {
  using Elem = BigRat;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(long long v) const { return Elem(v); }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw Error("division by zero in rational field");
    return Elem(1) / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }

  std::string to_string(const Elem& a) const {
    if (denominator(a) == 1) return numerator(a).str();
    return numerator(a).str() + "/" + denominator(a).str();
  }

  bool operator==(const RationalField&) const { return true; }
  bool operator!=(const RationalField&) const { return false; }
};

// A prime field F_p with residues stored in [0, p). The modulus is kept
// below 2^31 so products fit in a signed 64-bit intermediate.
class PrimeField {
 public:
  using Elem = std::int64_t;

  explicit PrimeField(std::int64_t p) : p_(p) {
    if (p < 2 || p > (std::int64_t(1) << 31)) throw Error("prime field modulus out of range");
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw Error("prime field modulus " + std::to_string(p) + " is not prime");
  }

  std::int64_t p() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return p_ == 1 ? 0 : 1; }
  Elem from_int(long long v) const {
    Elem r = static_cast<Elem>(v % p_);
    return r < 0 ? r + p_ : r;
  }

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const {
    Elem s = a - b;
    return s < 0 ? s + p_ : s;
  }
  Elem mul(Elem a, Elem b) const { return (a * b) % p_; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem inv(Elem a) const {
    if (a == 0) throw Error("division by zero in prime field");
    // extended Euclid on (a, p)
    Elem t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      Elem q = r / new_r;
      Elem tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    return t < 0 ? t + p_ : t;
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  std::string to_string(Elem a) const { return std::to_string(a); }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }
  bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

 private:
  std::int64_t p_;
};

}  // namespace extorth

#endif
