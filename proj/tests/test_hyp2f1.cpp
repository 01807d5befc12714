#include "mdist/errors.hpp"
#include "mdist/hyp2f1.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace mdist;

namespace {

Real eval(unsigned long j, const char* delta, const char* theta, unsigned digits) {
  return gauss_2f1_sir(Hyp2f1Request{j, Real(delta, digits), Real(theta, digits), digits});
}

Real from_dec(const oracle::Dec50& v, unsigned digits) {
  return Real(v.str(50, std::ios_base::scientific), digits);
}

}  // namespace

TEST(Hyp2f1, ZeroOrderIsOne) {
  EXPECT_TRUE(eval(0, "0.3", "7", 30) == 1L);
  EXPECT_TRUE(eval(0, "0.9", "0.001", 30) == 1L);
}

TEST(Hyp2f1, SmallArgumentApproachesOne) {
  EXPECT_NEAR(eval(5, "0.5", "1e-15", 30).to_double(), 1.0, 1e-13);
}

TEST(Hyp2f1, ClosedFormAtHalfDelta) {
  const unsigned d = 45;
  for (const char* theta : {"0.25", "1", "4"}) {
    const Real got = eval(1, "0.5", theta, d);
    const Real want = from_dec(oracle::hyp2f1_half_j1(oracle::Dec50(theta)), d);
    EXPECT_LT(abs(got - want), pow10(-d + 2, d)) << theta;
  }
  EXPECT_NEAR(eval(1, "0.5", "1", 20).to_double(), 1.0 + M_PI / 4, 1e-15);
}

TEST(Hyp2f1, AgreesWithDefiningSeriesForSmallTheta) {
  const unsigned d = 40;
  for (unsigned long j : {1ul, 2ul, 5ul, 17ul, 60ul}) {
    for (const char* delta : {"0.2", "0.5", "0.8"}) {
      for (const char* theta : {"0.01", "0.1", "0.3", "0.5"}) {
        const Real got = eval(j, delta, theta, d);
        const Real want = from_dec(oracle::hyp2f1_direct(j, oracle::Dec50(delta), oracle::Dec50(theta)), d);
        EXPECT_LT(abs(got - want), pow10(-d + 2, d) * want) << j << " " << delta << " " << theta;
      }
    }
  }
}

TEST(Hyp2f1, AgreesWithIndependentPfaffSumForLargeTheta) {
  const unsigned d = 40;
  for (unsigned long j : {1ul, 10ul, 200ul}) {
    for (const char* theta : {"3", "31.6", "100"}) {
      const Real got = eval(j, "0.5", theta, d);
      const Real want = from_dec(oracle::hyp2f1_pfaff(j, oracle::Dec50("0.5"), oracle::Dec50(theta)), d);
      EXPECT_LT(abs(got - want), pow10(-d + 3, d) * want) << j << " " << theta;
    }
  }
}

TEST(Hyp2f1, AtLeastOneAndMonotone) {
  const unsigned d = 30;
  const char* thetas[] = {"0.05", "0.5", "2", "10", "100"};
  for (const char* delta : {"0.25", "0.5", "0.75"}) {
    Real prev_j(d);
    for (unsigned long j = 1; j <= 40; ++j) {
      const Real v = eval(j, delta, "2", d);
      EXPECT_GE(v, 1L);
      if (j > 1) {
        EXPECT_GT(v, prev_j);
      }
      prev_j = v;
    }
    Real prev_t(d);
    for (std::size_t t = 0; t < std::size(thetas); ++t) {
      const Real v = eval(3, delta, thetas[t], d);
      if (t > 0) {
        EXPECT_GT(v, prev_t);
      }
      prev_t = v;
    }
  }
}

TEST(Hyp2f1, RejectsInvalidParameters) {
  EXPECT_THROW(eval(1, "0", "1", 20), DomainError);
  EXPECT_THROW(eval(1, "1", "1", 20), DomainError);
  EXPECT_THROW(eval(1, "0.5", "0", 20), DomainError);
  EXPECT_THROW(eval(1, "0.5", "-1", 20), DomainError);
  EXPECT_THROW(gauss_2f1_sir(Hyp2f1Request{1, Real(0.5, 20), Real(1L, 20), 0}), DomainError);
}

TEST(Hyp2f1, IterationCapReportsTerms) {
  Hyp2f1Options tight;
  tight.max_terms = 5;
  try {
    gauss_2f1_sir(Hyp2f1Request{3, Real(0.5, 30), Real(100L, 30), 30}, tight);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.terms(), 5u);
  }
}

TEST(Hyp2f1, TermCountScalesWithDigits) {
  const auto few = gauss_2f1_sir_detailed(Hyp2f1Request{2, Real(0.5, 20), Real(1L, 20), 20});
  const auto many = gauss_2f1_sir_detailed(Hyp2f1Request{2, Real(0.5, 200), Real(1L, 200), 200});
  EXPECT_GT(many.terms, few.terms);
}
