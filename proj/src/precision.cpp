#include "mdist/precision.hpp"

#include "mdist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mdist {

namespace {

// Slack subtracted before ceil so that budgets which are integral in exact
// arithmetic (e.g. 500 + 5 log10 1000) do not round up through fp noise.
constexpr double kCeilSlack = 1e-9;

unsigned half_up(unsigned n) { return (n + 1) / 2; }

unsigned floor_budget(unsigned n, double b) {
  const double raw = std::ceil(b - kCeilSlack);
  const unsigned minimum = std::max(half_up(n), kMinimumDigits);
  if (!(raw > minimum)) return minimum;
  return static_cast<unsigned>(raw);
}

// Elasticity of the local log-log slope over the tail above which decay is
// treated as faster than any power. Power-law tails give ~0, 10^(-c j^e)
// gives ~e.
constexpr double kSuperpolynomialElasticity = 0.25;

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

PrecisionBudget rule_of_thumb_digits(unsigned n) {
  return PrecisionBudget{n, half_up(n) + 16, BudgetBasis::rule_of_thumb, std::nullopt};
}

PrecisionBudget required_digits(unsigned n, const DecayClass& decay) {
  if (n == 0) throw DomainError("required_digits needs n >= 1");
  const double half = static_cast<double>(n) / 2.0;
  const double lg = std::log10(static_cast<double>(n));

  if (const auto* d = std::get_if<Degenerate>(&decay)) {
    throw DegenerateDistribution("moment sequence is a point mass at nu = " + std::to_string(d->nu) +
                                     "; no reconstruction needed",
                                 d->nu);
  }
  double b = 0.0;
  if (const auto* sp = std::get_if<Superpolynomial>(&decay)) {
    b = half + sp->c * std::pow(static_cast<double>(n), sp->exponent) - lg;
  } else {
    const auto& poly = std::get<Polynomial>(decay);
    b = half + (poly.s - 1.0) * lg;
  }
  return PrecisionBudget{n, floor_budget(n, b), BudgetBasis::fitted, decay};
}

DecayClass classify_decay(const MomentVector& moments) {
  if (moments.size() < 4) {
    throw DimensionError("decay classification needs at least 4 moments, got " + std::to_string(moments.size()));
  }
  const unsigned digits = moments.digits();
  const Real variance = moments[2] - moments[1] * moments[1];
  if (variance < pow10(-static_cast<long>(digits / 2), digits)) {
    return Degenerate{moments[1].to_double()};
  }

  const unsigned last = moments.order();
  std::vector<double> neg_log(last + 1, 0.0);  // -ln M_j
  for (unsigned j = 1; j <= last; ++j) {
    if (moments[j].sign() <= 0) throw InvalidMoments("M_" + std::to_string(j) + " must be positive", j);
    neg_log[j] = -log(moments[j]).to_double();
  }

  const unsigned tail_start = std::max(1u, half_up(last));
  auto local_slope = [&](unsigned j) {
    return (neg_log[j] - neg_log[j - 1]) / (std::log(j + 1.0) - std::log(static_cast<double>(j)));
  };

  double s = local_slope(tail_start);
  for (unsigned j = tail_start + 1; j <= last; ++j) s = std::min(s, local_slope(j));

  const double head = local_slope(tail_start);
  const double tail = local_slope(last);
  const bool grows = tail_start < last && head > 0.0 && tail > 0.0 &&
                     std::log(tail / head) / std::log(static_cast<double>(last) / tail_start) >
                         kSuperpolynomialElasticity;
  if (!grows) return Polynomial{std::max(s, 0.0)};

  const double ln10 = std::log(10.0);
  std::vector<double> lx, ly;
  for (unsigned j = tail_start; j <= last; ++j) {
    lx.push_back(std::log(static_cast<double>(j)));
    ly.push_back(std::log(neg_log[j] / ln10));
  }
  const double exponent = std::clamp(least_squares_slope(lx, ly), 0.01, 0.99);
  double c = neg_log[1] / ln10;
  for (unsigned j = 2; j <= last; ++j) {
    c = std::min(c, neg_log[j] / ln10 / std::pow(static_cast<double>(j), exponent));
  }
  return Superpolynomial{c, exponent};
}

std::vector<MonotonicityViolation> check_complete_monotonicity(const MomentVector& moments, unsigned k_max) {
  if (std::size_t{k_max} + 1 > moments.size()) {
    throw DomainError("k_max = " + std::to_string(k_max) + " needs at least " + std::to_string(k_max + 1) +
                      " moments");
  }
  const unsigned digits = moments.digits();
  const Real floor_value = -pow10(-static_cast<long>(digits / 2), digits);

  // row[n] holds (-1)^k (Delta^k M)_n; the next order is row[n] - row[n+1].
  std::vector<Real> row(moments.values().begin(), moments.values().end());
  std::vector<MonotonicityViolation> violations;
  for (unsigned k = 0; k <= k_max; ++k) {
    if (k > 0) {
      for (std::size_t n = 0; n + 1 < row.size(); ++n) row[n] -= row[n + 1];
      row.pop_back();
    }
    for (std::size_t n = 0; n < row.size(); ++n) {
      if (row[n] < floor_value) violations.push_back({k, static_cast<unsigned>(n), row[n]});
    }
  }
  return violations;
}

}  // namespace mdist
