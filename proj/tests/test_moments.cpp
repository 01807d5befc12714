#include "mdist/errors.hpp"
#include "mdist/moments.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mdist;

namespace {

Real parse(const char* s, unsigned d) { return Real(s, d); }

}  // namespace

TEST(UniformMoments, Values) {
  const MomentVector m = uniform_moments(9, 30);
  EXPECT_TRUE(m[0] == 1L);
  EXPECT_TRUE(m[1] == Real(0.5, 30));
  EXPECT_NEAR(m[9].to_double(), 0.1, 1e-17);
  EXPECT_EQ(m.order(), 9u);
}

TEST(PointMassMoments, Values) {
  const MomentVector one = point_mass_moments(Real(1L, 20), 7, 20);
  for (std::size_t j = 0; j < one.size(); ++j) EXPECT_TRUE(one[j] == 1L);
  const MomentVector zero = point_mass_moments(Real(0L, 20), 4, 20);
  EXPECT_TRUE(zero[0] == 1L);
  for (std::size_t j = 1; j < zero.size(); ++j) EXPECT_TRUE(zero[j].is_zero());
  EXPECT_TRUE(point_mass_moments(Real(0.5, 20), 3, 20)[3] == Real(0.125, 20));
  EXPECT_THROW(point_mass_moments(Real(1.5, 20), 3, 20), DomainError);
}

TEST(BetaMoments, MatchNumericalIntegration) {
  const MomentVector m = beta_moments(BetaParams(Real(5L, 30), Real(2L, 30)), 6, 30);
  for (unsigned j = 1; j <= 6; ++j) {
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [j](double x) { return std::pow(x, j) * oracle::beta52_pdf(x); }, 0.0, 1.0);
    EXPECT_NEAR(m[j].to_double(), integral, 1e-13) << j;
  }
  EXPECT_NEAR(m[1].to_double(), 5.0 / 7.0, 1e-16);
  EXPECT_NEAR(m[2].to_double(), 15.0 / 28.0, 1e-16);
}

TEST(BetaMoments, BetaOneOneIsUniform) {
  const unsigned d = 60;
  const MomentVector b = beta_moments(BetaParams(Real(1L, d), Real(1L, d)), 40, d);
  const MomentVector u = uniform_moments(40, d);
  for (std::size_t j = 0; j < b.size(); ++j) EXPECT_TRUE(b[j] == u[j]) << j;
}

TEST(BetaParams, RejectsNonPositive) {
  EXPECT_THROW(BetaParams(Real(0L, 20), Real(1L, 20)), DomainError);
  EXPECT_THROW(BetaParams(Real(1L, 20), Real(-2L, 20)), DomainError);
}

TEST(SirParams, RejectsOutOfRange) {
  EXPECT_THROW(SirParams(Real(0L, 20), Real(0.5, 20)), DomainError);
  EXPECT_THROW(SirParams(Real(1L, 20), Real(1L, 20)), DomainError);
  EXPECT_THROW(SirParams(Real(1L, 20), Real(0L, 20)), DomainError);
}

TEST(DecibelConversion, RoundTrip) {
  EXPECT_NEAR(db_to_linear(Real(10L, 20), 20).to_double(), 10.0, 1e-15);
  EXPECT_NEAR(db_to_linear(Real(-20L, 20), 20).to_double(), 0.01, 1e-17);
  EXPECT_NEAR(linear_to_db(100.0), 20.0, 1e-12);
}

TEST(SirMoments, FrozenReferenceValues) {
  const unsigned d = 50;
  const MomentVector m = sir_poisson_moments(SirParams(Real(1L, d), Real(0.5, d)), 4, d);
  // 1/(1 + pi/4)
  const Real m1 = Real(1L, d) / (Real(1L, d) + pi(d) / 4L);
  EXPECT_LT(abs(m[1] - m1), pow10(-45, d));
  // 50-digit reference for 1/2F1(2, -1/2; 1/2; -1), computed with an
  // independent arbitrary-precision package.
  EXPECT_LT(abs(m[2] - parse("0.411845119473537329391205136872694818403598024", d)), pow10(-44, d));
  const oracle::Dec50 ref = 1 / oracle::hyp2f1_pfaff(3, oracle::Dec50("0.5"), oracle::Dec50(1));
  EXPECT_NEAR(m[3].to_double(), ref.convert_to<double>(), 1e-15);
}

TEST(SirMoments, SmallThetaLimit) {
  const MomentVector m = sir_poisson_moments(SirParams(Real("1e-12", 30), Real(0.5, 30)), 10, 30);
  for (std::size_t j = 0; j < m.size(); ++j) EXPECT_NEAR(m[j].to_double(), 1.0, 1e-9);
}

TEST(SirMoments, StrictlyDecreasingInOrderAndTheta) {
  const unsigned d = 40, n = 30;
  std::vector<MomentVector> by_theta;
  for (double db : {-10.0, -3.0, 0.0, 5.0, 12.0}) {
    by_theta.push_back(sir_poisson_moments(SirParams(db_to_linear(Real(db, d), d), Real(0.6, d)), n, d));
  }
  for (const MomentVector& m : by_theta) {
    for (unsigned j = 1; j <= n; ++j) EXPECT_LT(m[j], m[j - 1]);
  }
  for (std::size_t t = 1; t < by_theta.size(); ++t) {
    for (unsigned j = 1; j <= n; ++j) EXPECT_LT(by_theta[t][j], by_theta[t - 1][j]);
  }
}

TEST(SirMoments, RecurrenceAgreesWithSeries) {
  const unsigned d = 80, n = 120;
  for (double db : {-15.0, 0.0, 15.0}) {
    const SirParams p(db_to_linear(Real(db, d), d), Real(0.5, d));
    const MomentVector a = sir_poisson_moments(p, n, d, SirMomentMethod::recurrence);
    const MomentVector b = sir_poisson_moments(p, n, d, SirMomentMethod::series);
    for (unsigned j = 0; j <= n; ++j) EXPECT_LT(abs(a[j] - b[j]), pow10(-75, d) * b[j]) << db << " " << j;
  }
}

TEST(SirMoments, NeedsDoublePrecision) {
  EXPECT_THROW(sir_poisson_moments(SirParams(Real(1L, 15), Real(0.5, 15)), 4, 15), DomainError);
}

TEST(MomentFile, RoundTripPreservesEveryDigit) {
  const unsigned d = 70;
  const MomentVector m = beta_moments(BetaParams(Real(5L, d), Real(2L, d)), 25, d);
  std::stringstream buffer;
  write_moments(m, buffer);
  const MomentVector back = read_moments(buffer);
  ASSERT_EQ(back.size(), m.size());
  EXPECT_EQ(back.digits(), d);
  for (std::size_t j = 0; j < m.size(); ++j) EXPECT_TRUE(back[j] == m[j]) << j;
}

TEST(MomentFile, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "mdist_moments_roundtrip.csv";
  const MomentVector m = uniform_moments(10, 30);
  save_moments(m, path);
  const MomentVector back = load_moments(path);
  for (std::size_t j = 0; j < m.size(); ++j) EXPECT_TRUE(back[j] == m[j]);
  std::filesystem::remove(path);
}

TEST(MomentFile, RejectsZerothMomentOtherThanOne) {
  std::istringstream in("j,M_j\n0,0.9\n1,0.5\n");
  try {
    read_moments(in);
    FAIL();
  } catch (const InvalidMoments& e) {
    EXPECT_EQ(e.index(), 0u);
    EXPECT_NE(std::string(e.what()).find("M_0"), std::string::npos);
  }
}

TEST(MomentFile, RejectsIncreaseWithIndex) {
  std::istringstream in("j,M_j\n0,1\n1,0.5\n2,0.3\n3,0.4\n");
  try {
    read_moments(in);
    FAIL();
  } catch (const InvalidMoments& e) {
    EXPECT_EQ(e.index(), 3u);
  }
  std::istringstream again("j,M_j\n0,1\n1,0.5\n2,0.3\n3,0.4\n");
  EXPECT_EQ(read_moments(again, LoadOptions{0, false}).size(), 4u);
}

TEST(MomentFile, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_moments(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("j,M_j\n0,1\n1,abc\n"), 3u);
  EXPECT_EQ(line_of("j,M_j\n0,1\n2,0.5\n"), 3u);
  EXPECT_EQ(line_of("# digits=30\nj,M_j\n0,1\n1\n"), 4u);
  EXPECT_GT(line_of("x,y\n0,1\n"), 0u);
}

TEST(MomentFile, DigitsFromHeaderOrMantissa) {
  std::istringstream header("# digits=45\nj,M_j\n0,1\n1,0.5\n");
  EXPECT_EQ(read_moments(header).digits(), 45u);
  std::istringstream mantissa("j,M_j\n0,1\n1,0.12345678901234567890123456789\n");
  EXPECT_GE(read_moments(mantissa).digits(), 29u);
}

TEST(MomentFile, MissingFileIsIoError) {
  EXPECT_THROW(load_moments("/nonexistent/dir/m.csv"), IoError);
}
