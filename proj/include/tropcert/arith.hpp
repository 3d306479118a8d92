#pragma once

// Exact integer and rational arithmetic shared by every module.
//
// Kernel algorithms are templated on an integer type:
//   Checked64 - int64_t that throws ArithmeticOverflow instead of wrapping
//   BigInt    - GMP arbitrary precision integer
// Data that outlives a single kernel call is stored as BigInt.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "tropcert/error.hpp"

namespace tropcert {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<BigInt>;
using RationalVector = std::vector<Rational>;

enum class ArithmeticMode { checked64, big };

const char* mode_name(ArithmeticMode mode) noexcept;
ArithmeticMode parse_mode(std::string_view text);

class Checked64 {
 public:
  constexpr Checked64() = default;
  constexpr Checked64(int64_t v) : v_(v) {}  // NOLINT: implicit on purpose

  constexpr int64_t value() const { return v_; }

  friend Checked64 operator+(Checked64 a, Checked64 b) {
    int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow();
    return r;
  }
  friend Checked64 operator-(Checked64 a, Checked64 b) {
    int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow();
    return r;
  }
  friend Checked64 operator*(Checked64 a, Checked64 b) {
    int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow();
    return r;
  }
  friend Checked64 operator/(Checked64 a, Checked64 b) {
    if (b.v_ == -1 && a.v_ == INT64_MIN) throw ArithmeticOverflow();
    return a.v_ / b.v_;
  }
  Checked64 operator-() const {
    if (v_ == INT64_MIN) throw ArithmeticOverflow();
    return -v_;
  }
  Checked64& operator+=(Checked64 o) { return *this = *this + o; }
  Checked64& operator-=(Checked64 o) { return *this = *this - o; }
  Checked64& operator*=(Checked64 o) { return *this = *this * o; }

  friend constexpr bool operator==(Checked64 a, Checked64 b) = default;
  friend constexpr auto operator<=>(Checked64 a, Checked64 b) = default;

 private:
  int64_t v_ = 0;
};

// ---- uniform integer interface -------------------------------------------

inline int sgn(Checked64 a) { return (a.value() > 0) - (a.value() < 0); }
inline int sgn(const BigInt& a) { return ::sgn(a); }

inline Checked64 abs_value(Checked64 a) { return a.value() < 0 ? -a : a; }
inline BigInt abs_value(const BigInt& a) { return abs(a); }

inline Checked64 gcd_of(Checked64 a, Checked64 b) {
  uint64_t x = a.value() < 0 ? 0 - static_cast<uint64_t>(a.value()) : a.value();
  uint64_t y = b.value() < 0 ? 0 - static_cast<uint64_t>(b.value()) : b.value();
  while (y != 0) {
    uint64_t t = x % y;
    x = y;
    y = t;
  }
  if (x > static_cast<uint64_t>(INT64_MAX)) throw ArithmeticOverflow();
  return static_cast<int64_t>(x);
}
inline BigInt gcd_of(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Checked64 div_exact(Checked64 a, Checked64 b) { return a / b; }
inline BigInt div_exact(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt to_big(Checked64 a) { return BigInt(static_cast<long>(a.value())); }
inline const BigInt& to_big(const BigInt& a) { return a; }

template <class Int>
Int from_big(const BigInt& a);

template <>
inline BigInt from_big<BigInt>(const BigInt& a) {
  return a;
}
template <>
inline Checked64 from_big<Checked64>(const BigInt& a) {
  if (!a.fits_slong_p()) throw ArithmeticOverflow();
  return Checked64(a.get_si());
}

template <class Int>
std::vector<Int> from_big(const IntVector& v) {
  std::vector<Int> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(from_big<Int>(x));
  return out;
}

template <class Int>
IntVector to_big(const std::vector<Int>& v) {
  IntVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_big(x));
  return out;
}

// Divides by the gcd of the entries. Direction (sign) is preserved.
template <class Int>
void make_primitive(std::vector<Int>& v) {
  Int g = 0;
  for (const auto& x : v) {
    if (sgn(x) != 0) {
      g = sgn(g) == 0 ? abs_value(x) : gcd_of(g, x);
      if (g == Int(1)) return;
    }
  }
  if (sgn(g) == 0) return;
  for (auto& x : v) x = div_exact(x, g);
}

template <class Int>
Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

inline bool is_zero_vector(const IntVector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

BigInt lcm_of(const BigInt& a, const BigInt& b);

// "p/q" with q > 0; integers are written as "p/1".
std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);
std::vector<Rational> parse_rational_list(std::string_view csv);

Rational dot(const IntVector& a, const RationalVector& x);

// Integer row echelon helpers (fraction free).
size_t rank_of(std::vector<IntVector> rows);

// Reduced row echelon form of the row space; every row primitive with a
// positive pivot. Canonical for the subspace.
std::vector<IntVector> canonical_row_basis(std::vector<IntVector> rows);

// Integer basis of {x : row . x = 0 for every row}, in canonical form.
std::vector<IntVector> nullspace_basis(const std::vector<IntVector>& rows, size_t dim);

struct VectorHash {
  size_t operator()(const IntVector& v) const noexcept;
  size_t operator()(const std::vector<int64_t>& v) const noexcept;
};

}  // namespace tropcert
