#pragma once

// Gauss hypergeometric function for the SIR-moment family
//
//   2F1(j, -delta; 1 - delta; -theta),  j >= 0, 0 < delta < 1, theta > 0.
//
// The defining series diverges for theta >= 1. The Pfaff transformation
// rewrites the value as
//
//   (1+theta)^(-j) 2F1(j, 1; 1 - delta; theta/(1+theta)),
//
// a series of nonnegative terms with argument in [0,1).

#include "mdist/real.hpp"

#include <cstddef>

namespace mdist {

struct Hyp2f1Request {
  unsigned long j = 0;
  Real delta;
  Real theta;
  unsigned digits = 16;
};

struct Hyp2f1Options {
  unsigned guard_digits = 10;
  std::size_t max_terms = 1'000'000;
};

struct Hyp2f1Result {
  Real value;
  std::size_t terms = 0;
};

/// Throws DomainError for parameters out of range and ConvergenceError if the
/// series has not met its tail bound within the iteration cap.
Hyp2f1Result gauss_2f1_sir_detailed(const Hyp2f1Request& request, const Hyp2f1Options& options = {});

inline Real gauss_2f1_sir(const Hyp2f1Request& request, const Hyp2f1Options& options = {}) {
  return gauss_2f1_sir_detailed(request, options).value;
}

}  // namespace mdist
