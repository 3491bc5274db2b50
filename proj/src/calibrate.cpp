#include "tristat/calibrate.hpp"

#include <cmath>

namespace tristat::calibrate {
namespace {

constexpr double kBracketWidthTol = 1e-12;

double nu_at(int q, double gamma) {
  return transferred_charge(q, ChemicalPotential(gamma)).nu;
}

}  // namespace

InversionResult gamma_for_charge(int max_capacity, double target_nu) {
  if (max_capacity < 1) {
    throw std::domain_error("max_capacity must be a positive integer");
  }
  if (!std::isfinite(target_nu) ||
      std::fabs(target_nu) >= static_cast<double>(max_capacity)) {
    throw UnreachableTargetError(
        "target charge fraction must satisfy |nu| < q; +/-q are asymptotic "
        "limits never attained at finite gamma");
  }

  const int q = max_capacity;
  int iterations = 0;

  // nu is strictly decreasing and odd, so nu(lo) > nu(hi) for lo < hi.
  // Expand the bracket until the target is straddled; guaranteed to
  // terminate because nu covers all of (-q, q).
  double lo = -1.0 / q;
  double hi = 1.0 / q;
  while (nu_at(q, lo) < target_nu) {
    lo *= 2.0;
    ++iterations;
  }
  while (nu_at(q, hi) > target_nu) {
    hi *= 2.0;
    ++iterations;
  }

  while (hi - lo > kBracketWidthTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    ++iterations;
    if (nu_at(q, mid) > target_nu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  InversionResult result;
  result.gamma = 0.5 * (lo + hi);
  result.achieved_nu = nu_at(q, result.gamma);
  result.iterations = iterations;
  result.bracket_width_final = hi - lo;
  return result;
}

InversionResult gamma_for_population(const DomainSpec& spec,
                                     double target_population) {
  const double lo = spec.cation_population();
  const double hi = spec.anion_population();
  if (!std::isfinite(target_population) || target_population <= lo ||
      target_population >= hi) {
    throw UnreachableTargetError(
        "target population must lie strictly inside (N-q, N+q)");
  }
  return gamma_for_charge(spec.max_capacity,
                          target_population - spec.baseline_population);
}

}  // namespace tristat::calibrate
