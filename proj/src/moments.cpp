#include "mdist/moments.hpp"

#include "mdist/errors.hpp"
#include "mdist/hyp2f1.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace mdist {

BetaParams::BetaParams(Real a, Real b) : alpha(std::move(a)), beta(std::move(b)) {
  if (!(alpha > 0L) || !(beta > 0L)) throw DomainError("beta parameters must be positive");
}

SirParams::SirParams(Real t, Real d) : theta(std::move(t)), delta(std::move(d)) {
  if (!(theta > 0L)) throw DomainError("theta must be positive");
  if (!(delta > 0L) || !(delta < 1L)) throw DomainError("delta must lie in (0,1)");
}

Real db_to_linear(const Real& theta_db, unsigned digits) {
  Real exponent(theta_db, digits);
  exponent /= 10L;
  return pow(Real(10L, digits), exponent);
}

double linear_to_db(double theta) { return 10.0 * std::log10(theta); }

MomentVector uniform_moments(unsigned n, unsigned digits) {
  std::vector<Real> m;
  m.reserve(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    Real v(1L, digits);
    v /= static_cast<long>(j) + 1;
    m.push_back(std::move(v));
  }
  return MomentVector(std::move(m), digits);
}

MomentVector point_mass_moments(const Real& nu, unsigned n, unsigned digits) {
  if (!(nu >= 0L) || !(nu <= 1L)) throw DomainError("point mass location must lie in [0,1]");
  const Real base(nu, digits);
  std::vector<Real> m;
  m.reserve(n + 1);
  Real v(1L, digits);
  for (unsigned j = 0; j <= n; ++j) {
    m.push_back(v);
    v *= base;
  }
  return MomentVector(std::move(m), digits);
}

MomentVector beta_moments(const BetaParams& params, unsigned n, unsigned digits) {
  const Real a(params.alpha, digits);
  const Real ab = a + Real(params.beta, digits);
  std::vector<Real> m;
  m.reserve(n + 1);
  Real v(1L, digits);
  for (unsigned j = 0; j <= n; ++j) {
    m.push_back(v);
    v *= a + static_cast<long>(j);
    v /= ab + static_cast<long>(j);
  }
  return MomentVector(std::move(m), digits);
}

namespace {

constexpr unsigned kRecurrenceGuardDigits = 10;

std::vector<Real> hyp2f1_by_series(const SirParams& params, unsigned n, unsigned digits) {
  std::vector<Real> f;
  f.reserve(n + 1);
  for (unsigned j = 0; j <= n; ++j) f.push_back(gauss_2f1_sir(Hyp2f1Request{j, params.delta, params.theta, digits}));
  return f;
}

// (c-a) F(a-1) + (2a - c + (b-a) z) F(a) + a (z-1) F(a+1) = 0 with
// b = -delta, c = 1-delta, z = -theta.
std::vector<Real> hyp2f1_by_recurrence(const SirParams& params, unsigned n, unsigned digits) {
  const unsigned work = digits + kRecurrenceGuardDigits;
  const Real delta(params.delta, work);
  const Real theta(params.theta, work);
  const Real one_plus_theta = theta + 1L;

  std::vector<Real> f;
  f.reserve(n + 1);
  f.emplace_back(1L, work);
  if (n >= 1) f.push_back(gauss_2f1_sir(Hyp2f1Request{1, params.delta, params.theta, work}));
  for (unsigned a = 1; a + 1 <= n; ++a) {
    const long al = static_cast<long>(a);
    Real lower = (Real(1L, work) - delta - al) * f[a - 1];
    Real middle = (delta + (2 * al - 1) + theta * (delta + al)) * f[a];
    Real next = (lower + middle) / (one_plus_theta * al);
    f.push_back(std::move(next));
  }
  return f;
}

}  // namespace

MomentVector sir_poisson_moments(const SirParams& params, unsigned n, unsigned digits, SirMomentMethod method) {
  if (digits < 16) throw DomainError("SIR moments need at least 16 digits");

  std::vector<Real> f;
  if (method == SirMomentMethod::recurrence && n >= 2) {
    f = hyp2f1_by_recurrence(params, n, digits);
    const Real check = gauss_2f1_sir(Hyp2f1Request{n, params.delta, params.theta, digits});
    const Real drift = abs(f[n] - check) / check;
    if (drift > pow10(-static_cast<long>(digits) + 2, digits)) f = hyp2f1_by_series(params, n, digits);
  } else {
    f = hyp2f1_by_series(params, n, digits);
  }

  std::vector<Real> m;
  m.reserve(n + 1);
  m.emplace_back(1L, digits);
  for (unsigned j = 1; j <= n; ++j) {
    Real one(1L, digits);
    m.push_back(Real(one / f[j], digits));
  }
  return MomentVector(std::move(m), digits);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Significant digits of a decimal mantissa, ignoring sign, leading zeros and
// the exponent.
unsigned mantissa_digits(const std::string& text) {
  unsigned count = 0;
  bool leading = true;
  for (char ch : text) {
    if (ch == 'e' || ch == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(ch))) continue;
    if (leading && ch == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

}  // namespace

MomentVector read_moments(std::istream& in, const LoadOptions& options) {
  unsigned declared = 0;
  bool saw_header = false;
  std::vector<std::pair<std::size_t, std::string>> cells;  // (line, value text)

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto pos = t.find("digits=");
      if (pos != std::string::npos) {
        try {
          declared = static_cast<unsigned>(std::stoul(t.substr(pos + 7)));
        } catch (const std::exception&) {
          throw ParseError("bad digits declaration", line_no);
        }
      }
      continue;
    }
    if (!saw_header) {
      std::string compact;
      for (char ch : t) {
        if (ch != ' ' && ch != '\t') compact += ch;
      }
      if (compact != "j,M_j") throw ParseError("expected header 'j,M_j'", line_no);
      saw_header = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos) throw ParseError("expected 'j,M_j' row", line_no);
    const std::string index_text = trim(t.substr(0, comma));
    const std::string value_text = trim(t.substr(comma + 1));
    std::size_t index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(index_text, &used);
      if (used != index_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad index '" + index_text + "'", line_no);
    }
    if (index != cells.size()) {
      throw ParseError("expected index " + std::to_string(cells.size()) + ", found " + index_text, line_no);
    }
    if (value_text.empty()) throw ParseError("missing value", line_no);
    cells.emplace_back(line_no, value_text);
  }
  if (!saw_header) throw ParseError("missing header 'j,M_j'", line_no);
  if (cells.empty()) throw ParseError("no moments", line_no);

  unsigned digits = options.digits != 0 ? options.digits : declared;
  if (digits == 0) {
    for (const auto& [ln, text] : cells) digits = std::max(digits, mantissa_digits(text));
    digits = std::max(digits, 16u);
  }

  std::vector<Real> values;
  values.reserve(cells.size());
  for (const auto& [ln, text] : cells) {
    try {
      values.emplace_back(text, digits);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), ln);
    }
  }
  if (!(values.front() == 1L)) throw InvalidMoments("M_0 must equal 1 (found " + cells.front().second + ")", 0);

  MomentVector moments(std::move(values), digits);
  if (options.validate) validate_moments(moments);
  return moments;
}

MomentVector load_moments(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_moments(in, options);
}

void write_moments(const MomentVector& moments, std::ostream& out) {
  out << "# digits=" << moments.digits() << '\n';
  out << "j,M_j\n";
  for (std::size_t j = 0; j < moments.size(); ++j) out << j << ',' << moments[j].to_string() << '\n';
}

void save_moments(const MomentVector& moments, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_moments(moments, out);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mdist
