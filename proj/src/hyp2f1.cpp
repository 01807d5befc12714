#include "mdist/hyp2f1.hpp"

#include "mdist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mdist {

Hyp2f1Result gauss_2f1_sir_detailed(const Hyp2f1Request& request, const Hyp2f1Options& options) {
  if (!(request.delta > 0L) || !(request.delta < 1L)) throw DomainError("delta must lie in (0,1)");
  if (!(request.theta > 0L)) throw DomainError("theta must be positive");
  if (request.digits == 0) throw DomainError("digits must be positive");

  const unsigned work = request.digits + options.guard_digits;
  const Real theta(request.theta, work);
  const Real one_plus_theta = theta + 1L;
  const Real z = theta / one_plus_theta;
  const Real c = Real(1L, work) - Real(request.delta, work);

  Hyp2f1Result result;
  if (request.j == 0) {
    result.value = Real(1L, request.digits);
    result.terms = 1;
    return result;
  }

  const double zd = z.to_double();
  const double cd = c.to_double();
  const double jd = static_cast<double>(request.j);

  // Terms grow until (j+k) z / (c+k) drops below 1, then decay at least
  // geometrically; allow the climb plus the usual geometric budget.
  const double peak = std::max(0.0, (jd * zd - cd) / (1.0 - zd));
  const double per_digit = -std::log10(zd);
  const double budget = peak + 10.0 * request.digits / std::max(per_digit, 1e-300);
  const std::size_t cap = budget >= static_cast<double>(options.max_terms)
                              ? options.max_terms
                              : static_cast<std::size_t>(std::ceil(budget)) + 1;

  const mpfr_exp_t tolerance_bits = digits_to_bits(work);

  Real sum(1L, work);
  Real term(1L, work);
  Real denominator(work);
  std::size_t k = 0;
  for (;; ++k) {
    if (k >= cap) {
      throw ConvergenceError("2F1 series did not converge within " + std::to_string(k) + " terms (j=" +
                                 std::to_string(request.j) + ", theta=" + request.theta.to_string(8) + ")",
                             k);
    }
    // t_{k+1} = t_k * z * (j+k) / (c+k)
    mpfr_mul(term.get(), term.get(), z.get(), MPFR_RNDN);
    mpfr_mul_ui(term.get(), term.get(), request.j + k, MPFR_RNDN);
    mpfr_add_ui(denominator.get(), c.get(), k, MPFR_RNDN);
    mpfr_div(term.get(), term.get(), denominator.get(), MPFR_RNDN);
    sum += term;

    const double next_ratio = (jd + static_cast<double>(k + 1)) * zd / (cd + static_cast<double>(k + 1));
    if (next_ratio < 1.0) {
      // Later ratios are no larger than next_ratio, so the remainder is at
      // most term * r / (1 - r).
      const double tail_factor = std::max(1.0, next_ratio / (1.0 - next_ratio));
      const double tail_log2 = static_cast<double>(mpfr_get_exp(term.get())) + std::log2(tail_factor);
      const double sum_log2 = static_cast<double>(mpfr_get_exp(sum.get()) - 1);
      if (tail_log2 < sum_log2 - static_cast<double>(tolerance_bits)) break;
    }
  }

  Real scaled = sum / pow(one_plus_theta, request.j);
  result.value = Real(scaled, request.digits);
  result.terms = k + 2;
  return result;
}

}  // namespace mdist
