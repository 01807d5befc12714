#include "mdist/transform.hpp"

#include "mdist/errors.hpp"
#include "mdist/precision.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace mdist {

MomentVector::MomentVector(std::vector<Real> values, unsigned digits)
    : values_(std::move(values)), digits_(digits) {
  if (values_.empty()) throw DimensionError("moment vector must hold at least M_0");
  if (!(values_.front() == 1L)) throw InvalidMoments("M_0 must equal 1", 0);
}

MomentVector MomentVector::truncated(unsigned n) const {
  if (std::size_t{n} + 1 > values_.size()) {
    throw DimensionError("need " + std::to_string(n + 1) + " moments, have " + std::to_string(values_.size()));
  }
  return MomentVector(std::vector<Real>(values_.begin(), values_.begin() + n + 1), digits_);
}

void validate_moments(const MomentVector& moments) {
  for (std::size_t j = 0; j < moments.size(); ++j) {
    const Real& m = moments[j];
    if (m < 0L || m > 1L) {
      throw InvalidMoments("M_" + std::to_string(j) + " outside [0,1]", j);
    }
    if (j > 0 && m > moments[j - 1]) {
      throw InvalidMoments("moments must be nonincreasing: M_" + std::to_string(j) + " > M_" + std::to_string(j - 1),
                           j);
    }
  }
}

// ---------------------------------------------------------------------------
// TransformMatrix

std::size_t TransformMatrix::offset(std::size_t i, std::size_t j) const {
  // Row i of the stored region holds columns i..n-i.
  return i * (order_ + 2 - i) + (j - i);
}

const Integer& TransformMatrix::at(std::size_t i, std::size_t j) const {
  static const Integer zero{0};
  const std::size_t n = order_;
  if (i > n || j > n) throw DimensionError("matrix index out of range");
  if (j < i) return zero;
  if (i + j <= n) return entries_[offset(i, j)];
  return entries_[offset(n - j, n - i)];
}

std::size_t TransformMatrix::distinct_entry_count(unsigned n) {
  const std::size_t m = std::size_t{n} + 2;
  return (m * m - (n % 2)) / 4;
}

TransformMatrix build_matrix(unsigned n, unsigned max_order) {
  if (n > max_order) {
    throw ResourceError("order " + std::to_string(n) + " exceeds the configured maximum " +
                        std::to_string(max_order));
  }
  std::vector<Integer> entries(TransformMatrix::distinct_entry_count(n));

  // A_ij = C(n,i) C(n-i, j-i) (-1)^(j-i); walk each stored row from the
  // diagonal outwards with exact incremental binomial updates.
  Integer row_head = 1;  // C(n,i)
  Integer largest = 1;
  std::size_t pos = 0;
  for (unsigned i = 0; 2 * i <= n; ++i) {
    if (i > 0) {
      row_head *= n - i + 1;
      mpz_divexact_ui(row_head.get_mpz_t(), row_head.get_mpz_t(), i);
    }
    Integer e = row_head;
    entries[pos++] = e;
    for (unsigned j = i; j + 1 <= n - i; ++j) {
      e *= n - j;
      mpz_divexact_ui(e.get_mpz_t(), e.get_mpz_t(), j + 1 - i);
      e = -e;
      if (mpz_cmpabs(e.get_mpz_t(), largest.get_mpz_t()) > 0) largest = abs(e);
      entries[pos++] = e;
    }
  }
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, largest.get_mpz_t());
  const double log10_largest = std::log10(mantissa) + static_cast<double>(exponent) * std::log10(2.0);
  return TransformMatrix(n, std::move(entries), log10_largest);
}

Integer max_abs_entry(const TransformMatrix& matrix) {
  Integer best = 0;
  const std::size_t n = matrix.order();
  for (std::size_t i = 0; 2 * i <= n; ++i) {
    for (std::size_t j = i; i + j <= n; ++j) {
      const Integer& e = matrix.at(i, j);
      if (mpz_cmpabs(e.get_mpz_t(), best.get_mpz_t()) > 0) best = abs(e);
    }
  }
  return best;
}

void write_matrix_csv(const TransformMatrix& matrix, std::ostream& out) {
  const std::size_t dim = matrix.dimension();
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (j > 0) out << ',';
      out << matrix.at(i, j).get_str();
    }
    out << '\n';
  }
}

bool verify_antidiagonal_symmetry(const TransformMatrix& matrix) {
  const unsigned n = matrix.order();
  Integer left, right;
  for (unsigned i = 0; i <= n; ++i) {
    for (unsigned j = 0; j <= n; ++j) {
      Integer expected = 0;
      if (j >= i) {
        mpz_bin_uiui(left.get_mpz_t(), n, j);
        mpz_bin_uiui(right.get_mpz_t(), j, i);
        expected = left * right;
        if ((j - i) % 2 == 1) expected = -expected;
      }
      if (matrix.at(i, j) != expected) return false;
      if (matrix.at(n - j, n - i) != expected) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Weights and samples

MixtureWeights apply(const TransformMatrix& matrix, const MomentVector& moments, unsigned digits,
                     const ApplyOptions& options) {
  const unsigned n = matrix.order();
  if (moments.size() != matrix.dimension()) {
    throw DimensionError("matrix order " + std::to_string(n) + " needs " + std::to_string(n + 1) +
                         " moments, got " + std::to_string(moments.size()));
  }
  if (digits == 0) throw DomainError("digits must be positive");

  std::vector<Real> m;
  m.reserve(moments.size());
  for (const Real& v : moments.values()) m.emplace_back(v, digits);

  MixtureWeights out;
  out.order = n;
  out.digits = digits;
  const unsigned recommended = options.recommended_digits.value_or(rule_of_thumb_digits(n).digits);
  out.below_recommended = digits < recommended;

  out.values.reserve(n + 1);
  Real term(digits);
  for (unsigned k = 0; k <= n; ++k) {
    Real acc(digits);
    for (unsigned j = k; j <= n; ++j) {
      mpfr_mul_z(term.get(), m[j].get(), matrix.at(k, j).get_mpz_t(), MPFR_RNDN);
      acc += term;
    }
    out.values.push_back(std::move(acc));
  }

  const double surviving = std::max(0.0, static_cast<double>(digits) - matrix.log10_max_abs());
  const double tolerance_exponent = std::max(-static_cast<double>(digits) / 4.0, -surviving / 2.0);
  const Real tolerance = options.negative_tolerance.value_or(
      pow(Real(10L, digits), Real(tolerance_exponent, digits)));

  Real sum(digits);
  std::optional<std::size_t> worst;
  for (std::size_t k = 0; k <= n; ++k) {
    const Real& h = out.values[k];
    sum += h;
    if (h.sign() < 0) {
      if (!worst || h < out.values[*worst]) worst = k;
      if (h >= -tolerance) ++out.small_negative_count;
    }
  }
  out.most_negative_index = worst;
  out.sum_deviation = abs(sum - 1L).to_double();

  if (worst && out.values[*worst] < -tolerance) {
    const unsigned rot = rule_of_thumb_digits(n).digits;
    const unsigned suggested = digits < rot ? rot : digits + (n + 3) / 4 + 8;
    const double value = out.values[*worst].to_double();
    throw PrecisionFailure("weight h_" + std::to_string(*worst) + " = " + out.values[*worst].to_string(6) +
                               " is below -" + tolerance.to_string(3) + " at " + std::to_string(digits) +
                               " digits; try " + std::to_string(suggested) + " digits",
                           *worst, value, digits, suggested);
  }
  return out;
}

Real grid_point(unsigned order, std::size_t k, unsigned digits) {
  Real x(static_cast<long>(k), digits);
  x /= static_cast<long>(order) + 1;
  return x;
}

CdfApproximation cdf_samples(const MixtureWeights& weights) {
  CdfApproximation cdf;
  cdf.order = weights.order;
  cdf.digits = weights.digits;
  cdf.values.reserve(weights.values.size() + 1);
  const Real zero(weights.digits);
  const Real one(1L, weights.digits);
  Real running(weights.digits);
  cdf.values.push_back(running);
  for (const Real& h : weights.values) {
    running += h;
    cdf.values.push_back(min(max(running, zero), one));
  }
  return cdf;
}

PdfApproximation pdf_samples(const MixtureWeights& weights) {
  PdfApproximation pdf;
  pdf.order = weights.order;
  pdf.digits = weights.digits;
  pdf.values.reserve(weights.values.size());
  const long scale = static_cast<long>(weights.order) + 1;
  for (const Real& h : weights.values) pdf.values.push_back(h * scale);
  return pdf;
}

namespace {

void require_unit_interval(const Real& x) {
  if (!(x >= 0L) || !(x <= 1L)) throw DomainError("x = " + x.to_string(8) + " is outside [0,1]");
}

}  // namespace

Real interpolate_cdf(const CdfApproximation& cdf, const Real& x) {
  require_unit_interval(x);
  const unsigned n = cdf.order;
  Real u = x * static_cast<long>(n + 1);
  std::int64_t k = std::min<std::int64_t>(floor_to_int(u), n);
  Real frac = u - static_cast<long>(k);
  Real slope = cdf.values[k + 1] - cdf.values[k];
  return cdf.values[k] + frac * slope;
}

Real eval_cdf(const MixtureWeights& weights, const Real& x, CdfMode mode) {
  require_unit_interval(x);
  if (mode == CdfMode::interpolated) return interpolate_cdf(cdf_samples(weights), x);

  const unsigned digits = weights.digits;
  if (x.is_zero()) return Real(digits);
  const std::int64_t last = std::min<std::int64_t>(floor_to_int(x * static_cast<long>(weights.order)), weights.order);
  Real sum(digits);
  for (std::int64_t k = 0; k <= last; ++k) sum += weights.values[k];
  return min(max(sum, Real(digits)), Real(1L, digits));
}

}  // namespace mdist
