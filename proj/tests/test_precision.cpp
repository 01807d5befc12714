#include "mdist/errors.hpp"
#include "mdist/moments.hpp"
#include "mdist/precision.hpp"
#include "mdist/transform.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mdist;

TEST(RuleOfThumb, Values) {
  EXPECT_EQ(rule_of_thumb_digits(400).digits, 216u);
  EXPECT_EQ(rule_of_thumb_digits(0).digits, 16u);
  EXPECT_EQ(rule_of_thumb_digits(30).digits, 31u);
  EXPECT_EQ(rule_of_thumb_digits(31).digits, 32u);
  EXPECT_EQ(rule_of_thumb_digits(7).basis, BudgetBasis::rule_of_thumb);
}

TEST(RequiredDigits, SuperpolynomialCase) {
  const PrecisionBudget b = required_digits(350, Superpolynomial{1.0, 0.5});
  const double want = 175 + std::sqrt(350.0) - std::log10(350.0);
  EXPECT_EQ(b.digits, static_cast<unsigned>(std::ceil(want)));
  EXPECT_NEAR(b.digits, 191, 1);
  EXPECT_LE(b.digits, rule_of_thumb_digits(350).digits + 1);
  EXPECT_EQ(b.basis, BudgetBasis::fitted);
}

TEST(RequiredDigits, PolynomialCase) {
  EXPECT_EQ(required_digits(1000, Polynomial{6.0}).digits, 515u);
  EXPECT_EQ(required_digits(1, Polynomial{1.0}).digits, 16u);
}

TEST(RequiredDigits, FloorsAtMatrixRequirement) {
  // A tiny c would otherwise undercut the n/2 digits the matrix needs.
  EXPECT_GE(required_digits(400, Superpolynomial{1e-6, 0.5}).digits, 200u);
}

TEST(RequiredDigits, Errors) {
  EXPECT_THROW(required_digits(0, Polynomial{2.0}), DomainError);
  EXPECT_THROW(required_digits(10, Degenerate{0.5}), DegenerateDistribution);
}

TEST(RequiredDigits, MonotoneInOrder) {
  for (const DecayClass& decay : {DecayClass{Polynomial{1.0}}, DecayClass{Polynomial{4.5}},
                                  DecayClass{Superpolynomial{0.7, 0.3}}, DecayClass{Superpolynomial{2.0, 0.9}}}) {
    unsigned prev = 0;
    for (unsigned n = 1; n <= 1500; ++n) {
      const unsigned d = required_digits(n, decay).digits;
      ASSERT_GE(d, prev) << "n=" << n;
      ASSERT_GE(d, (n + 1) / 2);
      prev = d;
    }
  }
}

TEST(ClassifyDecay, UniformIsPolynomialOfOrderOne) {
  const DecayClass c = classify_decay(uniform_moments(60, 50));
  ASSERT_TRUE(std::holds_alternative<Polynomial>(c));
  EXPECT_NEAR(std::get<Polynomial>(c).s, 1.0, 0.05);
}

TEST(ClassifyDecay, Beta52IsPolynomial) {
  const DecayClass c = classify_decay(beta_moments(BetaParams(Real(5L, 50), Real(2L, 50)), 50, 50));
  ASSERT_TRUE(std::holds_alternative<Polynomial>(c));
  const double s = std::get<Polynomial>(c).s;
  EXPECT_GE(s, 1.5);
  EXPECT_LE(s, 2.5);
}

TEST(ClassifyDecay, PolynomialBoundHoldsOverTail) {
  const MomentVector m = beta_moments(BetaParams(Real(5L, 50), Real(2L, 50)), 50, 50);
  const double s = std::get<Polynomial>(classify_decay(m)).s;
  for (unsigned j = 25; j <= 50; ++j) {
    // Beta tails decay like j^-beta times a constant; the ratio must not grow.
    const double scaled = m[j].to_double() * std::pow(j + 1.0, s);
    EXPECT_LT(scaled, m[25].to_double() * std::pow(26.0, s) * 1.0001);
  }
}

TEST(ClassifyDecay, PointMassesAreDegenerate) {
  for (int i = 1; i <= 9; ++i) {
    const double nu = i / 10.0;
    const DecayClass c = classify_decay(point_mass_moments(Real(std::to_string(nu), 40), 20, 40));
    ASSERT_TRUE(std::holds_alternative<Degenerate>(c)) << nu;
    EXPECT_NEAR(std::get<Degenerate>(c).nu, nu, 1e-12);
  }
}

TEST(ClassifyDecay, FastDecayIsSuperpolynomial) {
  // M_j = 10^(-2 sqrt j)
  std::vector<Real> v;
  for (unsigned j = 0; j <= 60; ++j) v.push_back(pow(Real(10L, 60), Real(-2.0 * std::sqrt(j), 60)));
  const DecayClass c = classify_decay(MomentVector(v, 60));
  ASSERT_TRUE(std::holds_alternative<Superpolynomial>(c));
  EXPECT_NEAR(std::get<Superpolynomial>(c).exponent, 0.5, 0.05);
  EXPECT_NEAR(std::get<Superpolynomial>(c).c, 2.0, 0.2);
}

TEST(ClassifyDecay, NeedsFourMoments) {
  EXPECT_THROW(classify_decay(uniform_moments(2, 20)), DimensionError);
}

TEST(CompleteMonotonicity, AnalyticGeneratorsPass) {
  const unsigned n = 50, d = 60;
  EXPECT_TRUE(check_complete_monotonicity(uniform_moments(n, d), 10).empty());
  EXPECT_TRUE(check_complete_monotonicity(beta_moments(BetaParams(Real(5L, d), Real(2L, d)), n, d), 10).empty());
  EXPECT_TRUE(check_complete_monotonicity(beta_moments(BetaParams(Real(0.5, d), Real(3L, d)), n, d), 10).empty());
  EXPECT_TRUE(check_complete_monotonicity(point_mass_moments(Real(0.3, d), n, d), 10).empty());
  EXPECT_TRUE(check_complete_monotonicity(point_mass_moments(Real(1L, d), n, d), 10).empty());
  for (double theta_db : {-10.0, 0.0, 10.0}) {
    const SirParams p(db_to_linear(Real(theta_db, d), d), Real(0.5, d));
    EXPECT_TRUE(check_complete_monotonicity(sir_poisson_moments(p, n, d), 10).empty()) << theta_db;
  }
}

TEST(CompleteMonotonicity, TamperedSequenceFailsAtSecondDifference) {
  const MomentVector m({Real(1L, 20), Real("0.9", 20), Real("0.5", 20), Real("0.84", 20)}, 20);
  const auto v = check_complete_monotonicity(m, 2);
  ASSERT_FALSE(v.empty());
  bool found = false;
  for (const auto& x : v) {
    if (x.k == 2 && x.n == 0) {
      found = true;
      EXPECT_NEAR(x.value.to_double(), -0.3, 1e-15);
    }
  }
  EXPECT_TRUE(found);
}

TEST(CompleteMonotonicity, OrderMustFitSequence) {
  EXPECT_THROW(check_complete_monotonicity(uniform_moments(3, 20), 4), DomainError);
}

TEST(PrecisionBudget, IsLoadBearingForBeta52) {
  const unsigned n = 100;
  const TransformMatrix a = build_matrix(n);
  EXPECT_THROW(apply(a, beta_moments(BetaParams(Real(5L, 16), Real(2L, 16)), n, 16), 16), PrecisionFailure);
  const unsigned d = rule_of_thumb_digits(n).digits;
  const MixtureWeights w = apply(a, beta_moments(BetaParams(Real(5L, d), Real(2L, d)), n, d), d);
  for (const Real& h : w.values) EXPECT_GE(h, Real(-1e-10, d));
}
