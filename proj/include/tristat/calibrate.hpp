#pragma once

#include <stdexcept>
#include <string>

#include "tristat/ensemble.hpp"

// Inversion of the charge-fraction curve. nu(gamma) is strictly decreasing
// (its derivative is -Var(M) < 0) with open range (-q, q), so any admissible
// target has exactly one preimage, found by bracketed bisection.

namespace tristat::calibrate {

/// Requested more charge than the domain's capacity admits: |nu| >= q (or a
/// population outside (N-q, N+q)). Those values are asymptotic limits, never
/// attained at finite gamma.
class UnreachableTargetError : public std::domain_error {
 public:
  explicit UnreachableTargetError(const std::string& what)
      : std::domain_error(what) {}
};

struct InversionResult {
  double gamma = 0.0;
  double achieved_nu = 0.0;  // transferred_charge(q, gamma), recomputed
  int iterations = 0;        // bracket expansions + bisection steps
  double bracket_width_final = 0.0;
};

/// Finds the unique gamma with nu(gamma; q) = target_nu. Initial bracket
/// [-1/q, 1/q], doubled until the target is straddled, then bisected to a
/// bracket width of 1e-12.
InversionResult gamma_for_charge(int max_capacity, double target_nu);

/// Same, for a target mean population in (N-q, N+q); delegates with
/// target - N.
InversionResult gamma_for_population(const DomainSpec& spec,
                                     double target_population);

}  // namespace tristat::calibrate
