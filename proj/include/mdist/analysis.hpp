#pragma once

// Accuracy studies against closed-form distributions, the two-moment beta
// approximation, and user-percentile curves for the Poisson cellular SIR
// model.

#include "mdist/moments.hpp"
#include "mdist/real.hpp"
#include "mdist/transform.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mdist {

using CdfFunction = std::function<double(double)>;

struct ErrorProfile {
  /// max_{k in 1..n} |F_n(x_k) - F(x_k)|
  double max_error = 0.0;
  /// |F_n(x_k) - F(x_k)| for k = 0..n+1
  std::vector<double> errors;
};

ErrorProfile reconstruction_error(const CdfApproximation& approx, const CdfFunction& oracle);

struct ConvergenceOracle {
  CdfFunction cdf;
  /// ||f|| + ||f'||/2 when f' is bounded.
  std::optional<double> bound_constant;
};

/// Closed-form cdf of Beta(alpha, beta), with the bound constant when the
/// density has a bounded derivative.
ConvergenceOracle beta_oracle(double alpha, double beta);
ConvergenceOracle uniform_oracle();

using MomentSource = std::function<MomentVector(unsigned n, unsigned digits)>;

struct ConvergenceOptions {
  /// Digits used at each order; empty means n/2 + 16.
  std::function<unsigned(unsigned)> digits_for_order;
};

struct ConvergenceReport {
  std::vector<unsigned> orders;
  std::vector<unsigned> digits;
  std::vector<double> max_errors;
  std::optional<double> bound_constant;
  /// Slope of log(max_error) against log(n); absent when an error is zero.
  std::optional<double> fitted_rate;
};

/// Needs at least 3 strictly increasing orders.
ConvergenceReport convergence_study(const MomentSource& source, const ConvergenceOracle& oracle,
                                    std::span<const unsigned> orders, const ConvergenceOptions& options = {});

/// Method-of-moments beta fit. Throws DomainError unless 0 < m1 < 1 and
/// m2 < m1, and DegenerateDistribution when m2 <= m1^2 (+ tolerance).
BetaParams beta_approximation(const Real& m1, const Real& m2);

// ---------------------------------------------------------------------------
// Percentile curves

struct PercentilePoint {
  double theta_db = 0.0;
  double theta = 0.0;
  /// x with F_n(x) = p. When saturated this comes from an edge segment.
  double reliability = 0.0;
  /// p fell below F_n(x_1) or above F_n(x_n).
  bool saturated = false;
};

struct PercentileCurve {
  double percentile = 0.0;
  unsigned order = 0;
  unsigned digits = 0;
  std::vector<PercentilePoint> points;
};

/// min, min+step, ..., max (inclusive, within half a step).
std::vector<double> theta_grid_db(double min_db, double max_db, double step_db);

struct CdfInversion {
  Real x;
  /// p < F_n(x_1) or p > F_n(x_n): x lies in an edge segment that only
  /// interpolates towards the anchors F_n(0) = 0 or F_n(1) = 1.
  bool saturated = false;
};

/// Solves F_n(x) = p on the interpolated cdf by binary search over the
/// samples and linear interpolation inside the bracketing segment.
CdfInversion invert_cdf(const CdfApproximation& cdf, double p);

struct PercentileOptions {
  /// Worker threads for the theta loop; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// One curve per percentile from moment vectors already evaluated on the
/// theta grid (moments[i] belongs to theta_db[i]).
std::vector<PercentileCurve> percentile_curves_from_moments(const TransformMatrix& matrix,
                                                            std::span<const MomentVector> moments,
                                                            std::span<const double> theta_db,
                                                            std::span<const double> percentiles, unsigned digits,
                                                            const PercentileOptions& options = {});

/// SIR moments for every theta on the grid, evaluated in parallel.
std::vector<MomentVector> sir_moments_on_grid(const Real& delta, std::span<const double> theta_db, unsigned n,
                                              unsigned digits, const PercentileOptions& options = {});

std::vector<PercentileCurve> percentile_curves(std::span<const double> percentiles, const Real& delta,
                                               std::span<const double> theta_db, unsigned n, unsigned digits,
                                               const PercentileOptions& options = {});

PercentileCurve percentile_solve(double p, const Real& delta, std::span<const double> theta_db, unsigned n,
                                 unsigned digits, const PercentileOptions& options = {});

struct RatePoint {
  double spectral_efficiency = 0.0;
  double reliability = 0.0;
  bool saturated = false;
};

/// (log2(1 + theta), x) for every point of the curve.
std::vector<RatePoint> rate_reliability(const PercentileCurve& curve);

/// theta_db at which the unsaturated part of `curve` reaches `reliability`,
/// by inverse linear interpolation. Throws DomainError when not covered.
double theta_db_at_reliability(const PercentileCurve& curve, double reliability);

/// theta_b(x) - theta_a(x) in dB.
double percentile_gap(const PercentileCurve& curve_a, const PercentileCurve& curve_b, double reliability);

/// Gaps between a lower and a higher percentile curve measured near both
/// ends of the theta grid. The low-theta reliability is where the lower
/// curve starts; the high-theta reliability is where the higher curve ends.
struct EdgeGaps {
  double low_reliability = 0.0;
  double low_gap_db = 0.0;
  double high_reliability = 0.0;
  double high_gap_db = 0.0;
};

EdgeGaps edge_gaps(const PercentileCurve& lower, const PercentileCurve& higher);

}  // namespace mdist
