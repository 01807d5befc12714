#pragma once

// Arbitrary-precision scalars.
//
// `Integer` is GMP's exact integer. `Real` is a binary MPFR float whose
// precision is fixed at construction and expressed in decimal digits. There
// is no process-wide default precision: every Real that is created from
// scratch names its precision explicitly, and arithmetic between two Reals
// yields the larger of the two precisions.

#include <cstdint>

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

namespace mdist {

using Integer = mpz_class;

/// Number of mantissa bits needed to carry `digits` decimal digits.
mpfr_prec_t digits_to_bits(unsigned digits);

class Real {
 public:
  /// Zero with 16 significant digits.
  Real();
  explicit Real(unsigned digits);
  Real(long value, unsigned digits);
  Real(double value, unsigned digits);
  Real(const Integer& value, unsigned digits);
  /// Parses a decimal string; throws ParseError on malformed input.
  Real(std::string_view text, unsigned digits);
  /// Re-rounds `other` to `digits`.
  Real(const Real& other, unsigned digits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  unsigned digits() const { return digits_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Decimal rendering. `significant == 0` selects enough digits for an
  /// exact round trip at this precision.
  std::string to_string(unsigned significant = 0) const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Integer& b);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b);
  friend std::partial_ordering operator<=>(const Real& a, double b);

 private:
  mpfr_t value_;
  unsigned digits_;
};

inline Real operator+(Real a, long b) { return a += b; }
inline Real operator-(Real a, long b) { return a -= b; }
inline Real operator*(Real a, long b) { return a *= b; }
inline Real operator/(Real a, long b) { return a /= b; }
inline Real operator*(const Integer& a, const Real& b) { return b * a; }

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real log10(const Real& x);
Real log2(const Real& x);
Real exp(const Real& x);
Real atan(const Real& x);
Real floor(const Real& x);
Real pow(const Real& base, const Real& exponent);
Real pow(const Real& base, unsigned long exponent);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

/// 10^exponent at the given precision (exact for exponent >= 0 up to the precision).
Real pow10(long exponent, unsigned digits);
Real pi(unsigned digits);

/// Largest integer <= x, as a 64-bit value. x must be in range.
std::int64_t floor_to_int(const Real& x);

}  // namespace mdist
