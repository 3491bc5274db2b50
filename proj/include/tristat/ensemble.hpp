#pragma once

#include <stdexcept>

// Closed-form statistics of a three-state charge-transfer ensemble.
//
// A molecular domain with baseline electron count N and maximum transferable
// charge q is modeled as a mixture of the three particle-number states
// {N-q, N, N+q} with exponential weights exp(-gamma*M)/Xi, where gamma is the
// chemical potential acting as control parameter and Xi the normalizing
// partition function. Everything in this header is a pure function of
// (N, q, gamma); all evaluations are saturation-safe for any finite gamma.

namespace tristat {

/// Baseline electron count N and maximum transferable charge q of a domain.
/// Construction enforces q >= 1 and N - q >= 0 (the cation state holds a
/// physical electron count).
struct DomainSpec {
  int baseline_population;  // N, electrons
  int max_capacity;         // q, elementary charge units

  DomainSpec(int baseline_population, int max_capacity);

  int cation_population() const { return baseline_population - max_capacity; }
  int anion_population() const { return baseline_population + max_capacity; }
};

/// Control parameter conjugate to the particle-number fluctuation. Any finite
/// value is admissible, positive or negative; NaN and +/-inf are rejected
/// because the pure limit states they would label are not reachable.
struct ChemicalPotential {
  double value;

  explicit ChemicalPotential(double gamma);
};

/// Statistical weights of the cation (N-q), neutral (N) and anion (N+q)
/// states. Sums to one; strictly positive until the smallest weight
/// underflows double precision (|gamma|*q beyond ~370).
struct WeightVector {
  double cation;
  double neutral;
  double anion;

  double sum() const { return cation + neutral + anion; }
  double sum_squares() const {
    return cation * cation + neutral * neutral + anion * anion;
  }
};

/// Fraction of charge transferred to (nu > 0) or from (nu < 0) the domain.
/// |nu| < q at any finite gamma; the asymptotes +/-q are approached but only
/// attained by floating-point saturation.
struct TransferredCharge {
  double nu;
};

/// ln Xi(gamma; q) = -gamma*N + ln(1 + 2 cosh(gamma q)), evaluated in shifted
/// exponential form so it stays finite at any finite gamma.
double log_partition(const DomainSpec& spec, ChemicalPotential gamma);

/// The three statistical weights exp(-gamma M)/Xi. Independent of N after
/// normalization.
WeightVector weights(const DomainSpec& spec, ChemicalPotential gamma);

/// Mean electron number <M> = N + nu(gamma; q), confined to (N-q, N+q).
double mean_population(const DomainSpec& spec, ChemicalPotential gamma);

/// nu = -2q sinh(gamma q) / (2 cosh(gamma q) + 1): odd in gamma, strictly
/// decreasing, bounded by the capacity.
TransferredCharge transferred_charge(int max_capacity, ChemicalPotential gamma);

/// Particle-number variance 2q^2 (cosh(gamma q) + 2) / (2 cosh(gamma q) + 1)^2:
/// even in gamma, maximal at gamma = 0 with value 2q^2/3, vanishing in both
/// saturated regimes.
double variance(int max_capacity, ChemicalPotential gamma);

/// Quantum purity Tr{rho^2} = (2 cosh(gamma q) - 1) / (2 cosh(gamma q) + 1):
/// even in gamma, minimum 1/3 at gamma = 0, approaching 1 in the ionic limits.
double purity(int max_capacity, ChemicalPotential gamma);

/// Covariance between the state and the number operator,
/// -2q sinh(gamma q) / (2 cosh(gamma q) + 1)^2: odd in gamma, zero at the
/// uncorrelated point gamma = 0 and in both saturated regimes.
double covariance_rho_m(int max_capacity, ChemicalPotential gamma);

/// von Neumann entropy -sum w ln w over the three states; contributions of
/// weights below 1e-300 are taken as zero (the x ln x -> 0 limit), so the
/// result stays NaN-free under saturation.
double entropy(const DomainSpec& spec, ChemicalPotential gamma);

}  // namespace tristat
