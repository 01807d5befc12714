#pragma once

// Reference implementations used only by tests. They share no code with the
// library and favour directness over speed.

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using Dec50 = boost::multiprecision::cpp_dec_float_50;

// C(n,k) by Pascal's rule in 64-bit; exact for n <= 60.
inline std::int64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::vector<std::int64_t> row(n + 1, 0);
  row[0] = 1;
  for (unsigned r = 1; r <= n; ++r) {
    for (unsigned c = r; c > 0; --c) row[c] += row[c - 1];
  }
  return row[k];
}

inline double beta52_cdf(double x) { return 6 * std::pow(x, 5) - 5 * std::pow(x, 6); }
inline double beta52_pdf(double x) { return 30 * std::pow(x, 4) * (1 - x); }

inline double binomial_pmf(unsigned n, unsigned k, double p) {
  return static_cast<double>(binomial(n, k)) * std::pow(p, k) * std::pow(1 - p, n - k);
}

// 2F1(j, -delta; 1-delta; -theta) by the defining series; |theta| < 1.
inline Dec50 hyp2f1_direct(unsigned long j, const Dec50& delta, const Dec50& theta) {
  Dec50 sum = 1, term = 1;
  const Dec50 a = j, b = -delta, c = 1 - delta, z = -theta;
  const Dec50 eps("1e-48");
  for (unsigned k = 0; k < 100000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
    sum += term;
    if (k > j && abs(term) < eps * abs(sum)) break;
  }
  return sum;
}

// 2F1(j, 1; 1-delta; z) after the Pfaff map, summed without a tail bound.
inline Dec50 hyp2f1_pfaff(unsigned long j, const Dec50& delta, const Dec50& theta) {
  const Dec50 z = theta / (1 + theta), c = 1 - delta;
  Dec50 sum = 1, term = 1;
  const Dec50 eps("1e-52");
  for (unsigned k = 0; k < 2000000; ++k) {
    term *= (Dec50(j) + k) / (c + k) * z;
    sum += term;
    if (k > j + 10 && term < eps * sum) break;
  }
  return sum / pow(1 + theta, Dec50(j));
}

// 1 + sqrt(theta) atan(sqrt(theta)) = 2F1(1, -1/2; 1/2; -theta).
inline Dec50 hyp2f1_half_j1(const Dec50& theta) { return 1 + sqrt(theta) * atan(sqrt(theta)); }

}  // namespace oracle
