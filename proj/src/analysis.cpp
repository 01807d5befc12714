#include "mdist/analysis.hpp"

#include "mdist/errors.hpp"
#include "mdist/precision.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace mdist {

namespace {

// Runs body(i) for i in [0, count) on a small pool. Exceptions from workers
// are rethrown (the first one wins) after all workers join.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

ErrorProfile reconstruction_error(const CdfApproximation& approx, const CdfFunction& oracle) {
  ErrorProfile profile;
  const std::size_t last = approx.values.size() - 1;  // n+1
  profile.errors.reserve(last + 1);
  for (std::size_t k = 0; k <= last; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(last);
    const double e = std::abs(approx.values[k].to_double() - oracle(x));
    profile.errors.push_back(e);
    if (k >= 1 && k < last) profile.max_error = std::max(profile.max_error, e);
  }
  return profile;
}

ConvergenceOracle beta_oracle(double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) throw DomainError("beta parameters must be positive");
  ConvergenceOracle oracle;
  oracle.cdf = [alpha, beta](double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    return boost::math::ibeta(alpha, beta, x);
  };

  // f' is bounded on [0,1] iff each exponent is 1 or at least 2.
  auto bounded = [](double a) { return a == 1.0 || a >= 2.0; };
  if (!bounded(alpha) || !bounded(beta)) return oracle;

  const double log_norm = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta);
  auto power = [](double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); };
  constexpr int kGrid = 200000;
  double sup_f = 0, sup_df = 0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double norm = std::exp(log_norm);
    const double f = norm * power(x, alpha - 1) * power(1 - x, beta - 1);
    const double df =
        norm * ((alpha - 1) * (1 - x) - (beta - 1) * x) * power(x, alpha - 2) * power(1 - x, beta - 2);
    sup_f = std::max(sup_f, std::abs(f));
    sup_df = std::max(sup_df, std::abs(df));
  }
  oracle.bound_constant = sup_f + sup_df / 2;
  return oracle;
}

ConvergenceOracle uniform_oracle() {
  return ConvergenceOracle{[](double x) { return std::clamp(x, 0.0, 1.0); }, 1.0};
}

ConvergenceReport convergence_study(const MomentSource& source, const ConvergenceOracle& oracle,
                                    std::span<const unsigned> orders, const ConvergenceOptions& options) {
  if (orders.size() < 3) throw DomainError("convergence study needs at least 3 orders");
  for (std::size_t i = 1; i < orders.size(); ++i) {
    if (orders[i] <= orders[i - 1]) throw DomainError("orders must be strictly increasing");
  }
  ConvergenceReport report;
  report.bound_constant = oracle.bound_constant;
  for (unsigned n : orders) {
    const unsigned digits =
        options.digits_for_order ? options.digits_for_order(n) : rule_of_thumb_digits(n).digits;
    const TransformMatrix matrix = build_matrix(n);
    const MixtureWeights weights = apply(matrix, source(n, digits), digits);
    const ErrorProfile profile = reconstruction_error(cdf_samples(weights), oracle.cdf);
    report.orders.push_back(n);
    report.digits.push_back(digits);
    report.max_errors.push_back(profile.max_error);
  }

  const bool all_positive =
      std::all_of(report.max_errors.begin(), report.max_errors.end(), [](double e) { return e > 0.0; });
  if (all_positive) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < report.orders.size(); ++i) {
      lx.push_back(std::log(static_cast<double>(report.orders[i])));
      ly.push_back(std::log(report.max_errors[i]));
    }
    report.fitted_rate = least_squares_slope(lx, ly);
  }
  return report;
}

BetaParams beta_approximation(const Real& m1, const Real& m2) {
  if (!(m1 > 0L) || !(m1 < 1L)) throw DomainError("M1 must lie in (0,1)");
  if (!(m2 < m1)) throw DomainError("M2 must be smaller than M1");
  const unsigned digits = std::max(m1.digits(), m2.digits());
  const Real variance = m2 - m1 * m1;
  if (!(variance > pow10(-static_cast<long>(digits / 2), digits))) {
    throw DegenerateDistribution("variance M2 - M1^2 is not positive: point mass at " + m1.to_string(8),
                                 m1.to_double());
  }
  Real alpha = m1 * (m1 - m2) / variance;
  Real beta = alpha * (Real(1L, digits) - m1) / m1;
  return BetaParams(std::move(alpha), std::move(beta));
}

// ---------------------------------------------------------------------------
// Percentiles

std::vector<double> theta_grid_db(double min_db, double max_db, double step_db) {
  if (!(step_db > 0)) throw DomainError("theta step must be positive");
  if (!(min_db <= max_db)) throw DomainError("theta range must satisfy min <= max");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((max_db - min_db) / step_db + 0.5));
  for (std::size_t i = 0; i <= count; ++i) grid.push_back(min_db + static_cast<double>(i) * step_db);
  return grid;
}

CdfInversion invert_cdf(const CdfApproximation& cdf, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("percentile must lie in (0,1)");
  const unsigned n = cdf.order;
  const Real target(p, cdf.digits);
  const auto& F = cdf.values;

  // Smallest k in [0, n] with F[k+1] >= p; then F[k] <= p <= F[k+1].
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (F[mid + 1] >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const std::size_t k = lo;
  CdfInversion out{grid_point(n, k, cdf.digits), n == 0 || target < F[1] || target > F[n]};
  const Real rise = F[k + 1] - F[k];
  if (rise.sign() > 0) {
    Real frac = (target - F[k]) / rise;
    frac /= static_cast<long>(n) + 1;
    out.x += frac;
  }
  return out;
}

std::vector<MomentVector> sir_moments_on_grid(const Real& delta, std::span<const double> theta_db, unsigned n,
                                              unsigned digits, const PercentileOptions& options) {
  std::vector<std::optional<MomentVector>> slots(theta_db.size());
  parallel_for(theta_db.size(), options.threads, [&](std::size_t i) {
    const SirParams params(db_to_linear(Real(theta_db[i], digits), digits), Real(delta, digits));
    slots[i] = sir_poisson_moments(params, n, digits);
  });
  std::vector<MomentVector> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<PercentileCurve> percentile_curves_from_moments(const TransformMatrix& matrix,
                                                            std::span<const MomentVector> moments,
                                                            std::span<const double> theta_db,
                                                            std::span<const double> percentiles, unsigned digits,
                                                            const PercentileOptions& options) {
  if (moments.size() != theta_db.size()) throw DimensionError("one moment vector per theta is required");
  for (double p : percentiles) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("percentile must lie in (0,1)");
  }
  const unsigned n = matrix.order();
  if (n < 2) throw DomainError("percentile curves need n >= 2");

  std::vector<PercentileCurve> curves(percentiles.size());
  for (std::size_t c = 0; c < curves.size(); ++c) {
    curves[c].percentile = percentiles[c];
    curves[c].order = n;
    curves[c].digits = digits;
    curves[c].points.resize(theta_db.size());
  }
  // Each theta writes only its own column of every curve.
  parallel_for(theta_db.size(), options.threads, [&](std::size_t i) {
    const CdfApproximation cdf = cdf_samples(apply(matrix, moments[i], digits));
    const double theta = db_to_linear(Real(theta_db[i], digits), digits).to_double();
    for (std::size_t c = 0; c < curves.size(); ++c) {
      PercentilePoint& point = curves[c].points[i];
      point.theta_db = theta_db[i];
      point.theta = theta;
      const CdfInversion inv = invert_cdf(cdf, percentiles[c]);
      point.reliability = inv.x.to_double();
      point.saturated = inv.saturated;
    }
  });
  return curves;
}

std::vector<PercentileCurve> percentile_curves(std::span<const double> percentiles, const Real& delta,
                                               std::span<const double> theta_db, unsigned n, unsigned digits,
                                               const PercentileOptions& options) {
  if (n < 2) throw DomainError("percentile curves need n >= 2");
  const TransformMatrix matrix = build_matrix(n);
  const std::vector<MomentVector> moments = sir_moments_on_grid(delta, theta_db, n, digits, options);
  return percentile_curves_from_moments(matrix, moments, theta_db, percentiles, digits, options);
}

PercentileCurve percentile_solve(double p, const Real& delta, std::span<const double> theta_db, unsigned n,
                                 unsigned digits, const PercentileOptions& options) {
  const double ps[] = {p};
  return std::move(percentile_curves(ps, delta, theta_db, n, digits, options).front());
}

std::vector<RatePoint> rate_reliability(const PercentileCurve& curve) {
  std::vector<RatePoint> out;
  out.reserve(curve.points.size());
  for (const PercentilePoint& p : curve.points) {
    out.push_back({std::log2(1.0 + p.theta), p.reliability, p.saturated});
  }
  return out;
}

double theta_db_at_reliability(const PercentileCurve& curve, double reliability) {
  std::vector<const PercentilePoint*> usable;
  for (const PercentilePoint& p : curve.points) {
    if (!p.saturated) usable.push_back(&p);
  }
  std::sort(usable.begin(), usable.end(),
            [](const PercentilePoint* a, const PercentilePoint* b) { return a->theta_db < b->theta_db; });
  for (std::size_t i = 0; i + 1 < usable.size(); ++i) {
    const PercentilePoint& a = *usable[i];
    const PercentilePoint& b = *usable[i + 1];
    const double hi = std::max(a.reliability, b.reliability);
    const double lo = std::min(a.reliability, b.reliability);
    if (reliability < lo || reliability > hi) continue;
    if (hi == lo) return a.theta_db;
    const double t = (reliability - a.reliability) / (b.reliability - a.reliability);
    return a.theta_db + t * (b.theta_db - a.theta_db);
  }
  if (usable.size() == 1 && usable.front()->reliability == reliability) return usable.front()->theta_db;
  throw DomainError("reliability " + std::to_string(reliability) + " is not covered by the p=" +
                    std::to_string(curve.percentile) + " curve");
}

double percentile_gap(const PercentileCurve& curve_a, const PercentileCurve& curve_b, double reliability) {
  return theta_db_at_reliability(curve_b, reliability) - theta_db_at_reliability(curve_a, reliability);
}

EdgeGaps edge_gaps(const PercentileCurve& lower, const PercentileCurve& higher) {
  auto first_usable = [](const PercentileCurve& c) -> const PercentilePoint& {
    for (const PercentilePoint& p : c.points) {
      if (!p.saturated) return p;
    }
    throw DomainError("curve has no unsaturated points");
  };
  auto last_usable = [](const PercentileCurve& c) -> const PercentilePoint& {
    for (auto it = c.points.rbegin(); it != c.points.rend(); ++it) {
      if (!it->saturated) return *it;
    }
    throw DomainError("curve has no unsaturated points");
  };
  EdgeGaps gaps;
  const PercentilePoint& low = first_usable(lower);
  gaps.low_reliability = low.reliability;
  gaps.low_gap_db = theta_db_at_reliability(higher, low.reliability) - low.theta_db;
  const PercentilePoint& high = last_usable(higher);
  gaps.high_reliability = high.reliability;
  gaps.high_gap_db = high.theta_db - theta_db_at_reliability(lower, high.reliability);
  return gaps;
}

}  // namespace mdist
