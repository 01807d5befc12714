#include "mdist/real.hpp"

#include "mdist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mdist {

namespace {

constexpr double kLog2Of10 = 3.3219280948873623;

Real with_precision(unsigned digits) { return Real(digits); }

Real unary(const Real& x, int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
  Real out = with_precision(x.digits());
  fn(out.get(), x.get(), MPFR_RNDN);
  return out;
}

}  // namespace

mpfr_prec_t digits_to_bits(unsigned digits) {
  auto bits = static_cast<mpfr_prec_t>(std::ceil(static_cast<double>(std::max(digits, 1u)) * kLog2Of10));
  return std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN);
}

Real::Real() : Real(16u) {}

Real::Real(unsigned digits) : digits_(std::max(digits, 1u)) {
  mpfr_init2(value_, digits_to_bits(digits_));
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, unsigned digits) : Real(digits) { mpfr_set_si(value_, value, MPFR_RNDN); }

Real::Real(double value, unsigned digits) : Real(digits) { mpfr_set_d(value_, value, MPFR_RNDN); }

Real::Real(const Integer& value, unsigned digits) : Real(digits) {
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(std::string_view text, unsigned digits) : Real(digits) {
  std::string buf(text);
  auto first = buf.find_first_not_of(" \t\r\n");
  auto last = buf.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError("empty number", 0);
  buf = buf.substr(first, last - first + 1);
  if (mpfr_set_str(value_, buf.c_str(), 10, MPFR_RNDN) != 0 || !mpfr_number_p(value_)) {
    throw ParseError("not a decimal number: '" + buf + "'", 0);
  }
}

Real::Real(const Real& other, unsigned digits) : Real(digits) { mpfr_set(value_, other.value_, MPFR_RNDN); }

Real::Real(const Real& other) : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : digits_(other.digits_) {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    digits_ = other.digits_;
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    std::swap(digits_, other.digits_);
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

std::string Real::to_string(unsigned significant) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";
  if (significant == 0) significant = static_cast<unsigned>(mpfr_get_str_ndigits(10, bits()));
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", static_cast<int>(significant), value_);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

Real& Real::operator+=(const Real& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real out(*this);
  mpfr_neg(out.value_, out.value_, MPFR_RNDN);
  return out;
}

Real operator+(const Real& a, const Real& b) {
  Real out(std::max(a.digits_, b.digits_));
  mpfr_add(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
Real operator-(const Real& a, const Real& b) {
  Real out(std::max(a.digits_, b.digits_));
  mpfr_sub(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
Real operator*(const Real& a, const Real& b) {
  Real out(std::max(a.digits_, b.digits_));
  mpfr_mul(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
Real operator/(const Real& a, const Real& b) {
  Real out(std::max(a.digits_, b.digits_));
  mpfr_div(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}
Real operator*(const Real& a, const Integer& b) {
  Real out(a.digits_);
  mpfr_mul_z(out.value_, a.value_, b.get_mpz_t(), MPFR_RNDN);
  return out;
}

namespace {
std::partial_ordering from_cmp(int c) {
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}
}  // namespace

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  return from_cmp(mpfr_cmp(a.value_, b.value_));
}
std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  return from_cmp(mpfr_cmp_si(a.value_, b));
}
std::partial_ordering operator<=>(const Real& a, double b) {
  if (mpfr_nan_p(a.value_) || std::isnan(b)) return std::partial_ordering::unordered;
  return from_cmp(mpfr_cmp_d(a.value_, b));
}

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real log10(const Real& x) { return unary(x, mpfr_log10); }
Real log2(const Real& x) { return unary(x, mpfr_log2); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real atan(const Real& x) { return unary(x, mpfr_atan); }

Real floor(const Real& x) {
  Real out(x.digits());
  mpfr_floor(out.get(), x.get());
  return out;
}

Real pow(const Real& base, const Real& exponent) {
  Real out(std::max(base.digits(), exponent.digits()));
  mpfr_pow(out.get(), base.get(), exponent.get(), MPFR_RNDN);
  return out;
}

Real pow(const Real& base, unsigned long exponent) {
  Real out(base.digits());
  mpfr_pow_ui(out.get(), base.get(), exponent, MPFR_RNDN);
  return out;
}

Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real pow10(long exponent, unsigned digits) {
  Real out(digits);
  mpfr_ui_pow_ui(out.get(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent), MPFR_RNDN);
  if (exponent < 0) mpfr_ui_div(out.get(), 1, out.get(), MPFR_RNDN);
  return out;
}

Real pi(unsigned digits) {
  Real out(digits);
  mpfr_const_pi(out.get(), MPFR_RNDN);
  return out;
}

std::int64_t floor_to_int(const Real& x) { return mpfr_get_sj(x.get(), MPFR_RNDD); }

}  // namespace mdist
