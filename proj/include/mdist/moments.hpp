#pragma once

// Moment sequences of reference distributions and of the downlink Poisson
// cellular SIR model, plus the moment CSV format:
//
//   # digits=<d>        (optional)
//   j,M_j
//   0,1
//   1,0.5
//   ...

#include "mdist/real.hpp"
#include "mdist/transform.hpp"

#include <filesystem>
#include <iosfwd>

namespace mdist {

struct BetaParams {
  Real alpha;
  Real beta;

  /// Throws DomainError unless both parameters are positive.
  BetaParams(Real a, Real b);
};

/// Threshold theta on a linear scale and delta = 2 / path-loss exponent.
struct SirParams {
  Real theta;
  Real delta;

  /// Throws DomainError unless theta > 0 and 0 < delta < 1.
  SirParams(Real t, Real d);
};

/// 10^(theta_db / 10)
Real db_to_linear(const Real& theta_db, unsigned digits);
double linear_to_db(double theta);

/// M_j = 1/(j+1)
MomentVector uniform_moments(unsigned n, unsigned digits);

/// M_j = nu^j, 0 <= nu <= 1.
MomentVector point_mass_moments(const Real& nu, unsigned n, unsigned digits);

/// M_j = prod_{i<j} (alpha+i)/(alpha+beta+i)
MomentVector beta_moments(const BetaParams& params, unsigned n, unsigned digits);

enum class SirMomentMethod {
  /// Every 2F1 value from its own transformed series.
  series,
  /// 2F1(0) and 2F1(1) from the series, the rest from the three-term
  /// contiguous relation in j (forward-stable: 2F1 grows like j^delta while
  /// the competing solution decays like (1+theta)^-j). The last value is
  /// checked against the series; on disagreement the series is used for all.
  recurrence,
};

/// M_j = 1 / 2F1(j, -delta; 1-delta; -theta). Needs digits >= 16.
MomentVector sir_poisson_moments(const SirParams& params, unsigned n, unsigned digits,
                                 SirMomentMethod method = SirMomentMethod::recurrence);

struct LoadOptions {
  /// Working digits; 0 uses the `# digits=` line or else the longest mantissa.
  unsigned digits = 0;
  /// Reject sequences that are outside [0,1] or increase.
  bool validate = true;
};

/// Throws ParseError (with line number) or InvalidMoments.
MomentVector read_moments(std::istream& in, const LoadOptions& options = {});
MomentVector load_moments(const std::filesystem::path& path, const LoadOptions& options = {});

void write_moments(const MomentVector& moments, std::ostream& out);
void save_moments(const MomentVector& moments, const std::filesystem::path& path);

}  // namespace mdist
