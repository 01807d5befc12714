#pragma once

// Binomial-mixture transform.
//
// For an order n, the weights h = A m of a moment vector m = (M_0..M_n) are
//
//   h_k = sum_{j=k}^{n} C(n,j) C(j,k) (-1)^{j-k} M_j,
//
// the cdf is sampled on x_k = k/(n+1) as F_n(x_k) = h_0 + ... + h_{k-1} and
// the density as f_n(x_k) = (n+1) h_k.

#include "mdist/real.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace mdist {

/// Moment sequence M_0..M_n of a distribution on [0,1]. Construction only
/// enforces M_0 = 1; `validate_moments` checks the remaining invariants.
class MomentVector {
 public:
  MomentVector(std::vector<Real> values, unsigned digits);

  unsigned order() const { return static_cast<unsigned>(values_.size() - 1); }
  std::size_t size() const { return values_.size(); }
  unsigned digits() const { return digits_; }
  const Real& operator[](std::size_t j) const { return values_[j]; }
  std::span<const Real> values() const { return values_; }

  /// First n+1 moments. Throws DimensionError when fewer are stored.
  MomentVector truncated(unsigned n) const;

 private:
  std::vector<Real> values_;
  unsigned digits_;
};

/// Throws InvalidMoments (with the offending index) unless every moment is in
/// [0,1] and the sequence is nonincreasing.
void validate_moments(const MomentVector& moments);

/// Upper-triangular integer matrix A_ij = C(n,j) C(j,i) (-1)^(j-i), j >= i.
///
/// A is symmetric about its antidiagonal, A_ij = A_{n-j,n-i}, so only the
/// entries with i <= j and i + j <= n are stored.
class TransformMatrix {
 public:
  unsigned order() const { return order_; }
  std::size_t dimension() const { return std::size_t{order_} + 1; }

  const Integer& at(std::size_t i, std::size_t j) const;

  std::size_t stored_entries() const { return entries_.size(); }

  /// log10 max|A_ij|, recorded at construction.
  double log10_max_abs() const { return log10_max_abs_; }

  /// [(n+2)^2 - 1(n odd)] / 4
  static std::size_t distinct_entry_count(unsigned n);

 private:
  friend TransformMatrix build_matrix(unsigned n, unsigned max_order);

  TransformMatrix(unsigned n, std::vector<Integer> entries, double log10_max_abs)
      : order_(n), entries_(std::move(entries)), log10_max_abs_(log10_max_abs) {}
  std::size_t offset(std::size_t i, std::size_t j) const;

  unsigned order_;
  std::vector<Integer> entries_;
  double log10_max_abs_;
};

inline constexpr unsigned kDefaultMaxOrder = 2000;

/// Throws ResourceError when n > max_order.
TransformMatrix build_matrix(unsigned n, unsigned max_order = kDefaultMaxOrder);

Integer max_abs_entry(const TransformMatrix& matrix);

/// Row-major CSV, one matrix row per line, no header.
void write_matrix_csv(const TransformMatrix& matrix, std::ostream& out);

/// Exhaustive check of A_ij == A_{n-j,n-i} against a freshly evaluated
/// product of binomials. Used as a self-test before export.
bool verify_antidiagonal_symmetry(const TransformMatrix& matrix);

struct ApplyOptions {
  /// Tolerance below zero for a weight. Defaults to the larger of
  /// 10^(-digits/4) and 10^(-r/2), where r = max(0, digits - log10 max|A|) is
  /// the number of digits that survive cancellation.
  std::optional<Real> negative_tolerance;
  /// Digits considered adequate for this order; defaults to n/2 + 16.
  std::optional<unsigned> recommended_digits;
};

struct MixtureWeights {
  unsigned order = 0;
  std::vector<Real> values;
  unsigned digits = 0;
  /// Caller asked for fewer digits than recommended.
  bool below_recommended = false;
  /// Weights in (-tolerance, 0), left untouched.
  std::size_t small_negative_count = 0;
  std::optional<std::size_t> most_negative_index;
  /// |sum h_k - 1|
  double sum_deviation = 0.0;
};

/// h = A m at `digits` decimal digits. Moments are rounded to `digits` before
/// multiplication by the exact integer entries.
///
/// Throws DimensionError when the orders differ and PrecisionFailure when some
/// h_k < -tolerance.
MixtureWeights apply(const TransformMatrix& matrix, const MomentVector& moments, unsigned digits,
                     const ApplyOptions& options = {});

/// Grid point k/(n+1).
Real grid_point(unsigned order, std::size_t k, unsigned digits);

struct CdfApproximation {
  unsigned order = 0;
  unsigned digits = 0;
  /// F_n(x_k) for k = 0..n+1, cumulative sums clamped to [0,1].
  std::vector<Real> values;

  Real x(std::size_t k) const { return grid_point(order, k, digits); }
};

struct PdfApproximation {
  unsigned order = 0;
  unsigned digits = 0;
  /// f_n(x_k) = (n+1) h_k for k = 0..n.
  std::vector<Real> values;

  Real x(std::size_t k) const { return grid_point(order, k, digits); }
};

CdfApproximation cdf_samples(const MixtureWeights& weights);
PdfApproximation pdf_samples(const MixtureWeights& weights);

enum class CdfMode {
  /// Right-continuous staircase with jumps at k/n and F_n(0) = 0.
  step,
  /// Piecewise-linear through the samples (x_k, F_n(x_k)).
  interpolated,
};

/// Throws DomainError for x outside [0,1].
Real eval_cdf(const MixtureWeights& weights, const Real& x, CdfMode mode);

/// Linear interpolation of precomputed samples.
Real interpolate_cdf(const CdfApproximation& cdf, const Real& x);

}  // namespace mdist
