#include "tristat/ensemble.hpp"

#include <cmath>
#include <string>

namespace tristat {
namespace {

// Below this a weight's entropy contribution is taken as zero (x ln x -> 0).
constexpr double kEntropyFloor = 1e-300;

// Shared pieces of the saturation-safe evaluation. With h = |gamma|*q,
// u = exp(-h) and t = u^2, the identities
//
//   2 cosh(gamma q) + 1 = e^h (1 + t + u)
//   2 sinh(|gamma| q)   = e^h (1 - t)
//   2 cosh(gamma q) - 1 = e^h (1 + t - u)
//
// turn every closed form into a ratio of quantities in (0, 3], valid at any
// finite gamma. Forming cosh/sinh directly would overflow near
// |gamma|*q ~ 710.
struct ScaledParts {
  double u;   // exp(-|gamma| q)
  double t;   // exp(-2 |gamma| q)
  double em;  // 1 - t, cancellation-free via expm1
  double d;   // 1 + t + u, in (1, 3]
};

ScaledParts scaled_parts(int q, double gamma) {
  const double h = std::fabs(gamma) * static_cast<double>(q);
  const double u = std::exp(-h);
  const double t = u * u;
  const double em = -std::expm1(-2.0 * h);
  return {u, t, em, 1.0 + t + u};
}

// -sign(gamma), exactly +0.0 at gamma == 0 so the odd quantities carry no
// negative-zero artifact into rendered output.
double neg_sign(double gamma) {
  if (gamma > 0.0) return -1.0;
  if (gamma < 0.0) return 1.0;
  return 0.0;
}

void require_capacity(int q) {
  if (q < 1) {
    throw std::domain_error("max_capacity must be a positive integer, got " +
                            std::to_string(q));
  }
}

}  // namespace

DomainSpec::DomainSpec(int baseline_population_in, int max_capacity_in)
    : baseline_population(baseline_population_in),
      max_capacity(max_capacity_in) {
  require_capacity(max_capacity);
  if (baseline_population - max_capacity < 0) {
    throw std::domain_error(
        "cation state would hold a negative electron count: N=" +
        std::to_string(baseline_population) +
        ", q=" + std::to_string(max_capacity));
  }
}

ChemicalPotential::ChemicalPotential(double gamma) : value(gamma) {
  if (!std::isfinite(gamma)) {
    throw std::invalid_argument("chemical potential must be finite");
  }
}

double log_partition(const DomainSpec& spec, ChemicalPotential gamma) {
  const auto p = scaled_parts(spec.max_capacity, gamma.value);
  const double h = std::fabs(gamma.value) * spec.max_capacity;
  // ln Xi = -gamma N + ln(1 + 2 cosh(gamma q)) = -gamma N + h + ln(1 + u + t)
  return -gamma.value * spec.baseline_population + h + std::log1p(p.u + p.t);
}

WeightVector weights(const DomainSpec& spec, ChemicalPotential gamma) {
  const auto p = scaled_parts(spec.max_capacity, gamma.value);
  const double largest = 1.0 / p.d;
  const double middle = p.u / p.d;
  const double smallest = p.t / p.d;
  // gamma > 0 favors the smallest population, i.e. the cation.
  return gamma.value >= 0.0 ? WeightVector{largest, middle, smallest}
                            : WeightVector{smallest, middle, largest};
}

TransferredCharge transferred_charge(int max_capacity,
                                     ChemicalPotential gamma) {
  require_capacity(max_capacity);
  const auto p = scaled_parts(max_capacity, gamma.value);
  return {neg_sign(gamma.value) * max_capacity * p.em / p.d};
}

double mean_population(const DomainSpec& spec, ChemicalPotential gamma) {
  return spec.baseline_population +
         transferred_charge(spec.max_capacity, gamma).nu;
}

double variance(int max_capacity, ChemicalPotential gamma) {
  require_capacity(max_capacity);
  const auto p = scaled_parts(max_capacity, gamma.value);
  const double q2 = static_cast<double>(max_capacity) * max_capacity;
  return q2 * p.u * (1.0 + p.t + 4.0 * p.u) / (p.d * p.d);
}

double purity(int max_capacity, ChemicalPotential gamma) {
  require_capacity(max_capacity);
  const auto p = scaled_parts(max_capacity, gamma.value);
  return (1.0 + p.t - p.u) / p.d;
}

double covariance_rho_m(int max_capacity, ChemicalPotential gamma) {
  require_capacity(max_capacity);
  const auto p = scaled_parts(max_capacity, gamma.value);
  return neg_sign(gamma.value) * max_capacity * p.em * p.u / (p.d * p.d);
}

double entropy(const DomainSpec& spec, ChemicalPotential gamma) {
  const WeightVector w = weights(spec, gamma);
  const auto term = [](double x) {
    return x < kEntropyFloor ? 0.0 : -x * std::log(x);
  };
  return term(w.cation) + term(w.neutral) + term(w.anion);
}

}  // namespace tristat
