#pragma once

// Digit budgets for the binomial-mixture transform and moment-sequence checks.
//
// The transform entries grow like 3^n / n, so roughly n/2 decimal digits are
// lost to cancellation. How many more are needed depends on how fast the
// moments decay.

#include "mdist/real.hpp"
#include "mdist/transform.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace mdist {

/// M_j <= 10^(-c j^exponent)
struct Superpolynomial {
  double c = 1.0;
  double exponent = 0.5;
};

/// M_j <= (j+1)^(-s), estimated over the tail of the sequence.
struct Polynomial {
  double s = 1.0;
};

/// Variance is numerically zero; the distribution is a point mass at nu.
struct Degenerate {
  double nu = 0.0;
};

using DecayClass = std::variant<Superpolynomial, Polynomial, Degenerate>;

enum class BudgetBasis { rule_of_thumb, fitted };

struct PrecisionBudget {
  unsigned order = 0;
  unsigned digits = 0;
  BudgetBasis basis = BudgetBasis::rule_of_thumb;
  std::optional<DecayClass> decay;
};

inline constexpr unsigned kMinimumDigits = 16;

/// ceil(n/2) + 16
PrecisionBudget rule_of_thumb_digits(unsigned n);

/// Superpolynomial: b = n/2 + c n^e - log10 n.
/// Polynomial:      b = n/2 + (s-1) log10 n.
/// Result is ceil(b), floored at max(ceil(n/2), 16). Throws DomainError for
/// n = 0 and DegenerateDistribution for a Degenerate decay class.
PrecisionBudget required_digits(unsigned n, const DecayClass& decay);

/// Needs at least 4 moments.
DecayClass classify_decay(const MomentVector& moments);

struct MonotonicityViolation {
  unsigned k = 0;
  unsigned n = 0;
  Real value;
};

/// Evaluates (-1)^k (Delta^k M)_n for k = 0..k_max and every admissible n.
/// Values below -10^(-digits/2) are returned; an empty result is a pass.
std::vector<MonotonicityViolation> check_complete_monotonicity(const MomentVector& moments,
                                                               unsigned k_max);

}  // namespace mdist
