#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tristat/ensemble.hpp"

// Executable form of the quantum expectation identity. For any observable A
// commuting with the state, the derivative of its expectation with respect
// to the chemical potential satisfies
//
//   d<A>/dgamma = <dA/dgamma> - <A M> - (dlnXi/dgamma) <A>,
//
// with dlnXi/dgamma = -<M>. The left side is estimated by a central finite
// difference, the right side assembled term by term, and the two compared
// against a tolerance. Specializations cover the particle-number
// fluctuation-dissipation identity d<M>/dgamma = -Var(M) and its purity
// counterpart dphi/dgamma = -2 Cov(rho, M).

namespace tristat::qei {

/// Raised when a test operator misbehaves: a non-finite eigenvalue, or a
/// declared gamma-derivative that disagrees with a finite difference of the
/// eigenvalue itself.
class ObservableError : public std::runtime_error {
 public:
  explicit ObservableError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A test operator sharing the ensemble's eigenbasis, represented by one
/// eigenvalue per particle-number state. Diagonal operators commute with the
/// state by construction, so the compatibility requirement of the identity
/// is built into the representation rather than checked at runtime.
struct DiagonalObservable {
  std::string label;
  /// a(M, gamma)
  std::function<double(int population, double gamma)> eigenvalue;
  /// da/dgamma(M, gamma); gate-checked against a finite difference of
  /// eigenvalue before any identity is verified.
  std::function<double(int population, double gamma)> gamma_derivative;
};

/// Finite-difference step and stencil for the left side.
struct FiniteDiffConfig {
  enum class Scheme { Central2, Central4 };

  double step = 1e-5;  // must lie in (0, 1e-2]
  Scheme scheme = Scheme::Central2;

  /// Default step policy 1e-5 * max(1, |gamma|), clamped to the valid range;
  /// balances truncation against roundoff in double precision.
  static FiniteDiffConfig for_gamma(double gamma,
                                    Scheme scheme = Scheme::Central2);
};

/// Right-hand side of the identity, term by term. rhs is always computed as
/// term_da - term_am - term_logxi * mean_observable, in exactly that order,
/// so the recorded breakdown reproduces it bit for bit.
struct QeiTerms {
  double term_da = 0.0;          // <dA/dgamma>
  double term_am = 0.0;          // <A M>
  double term_logxi = 0.0;       // dlnXi/dgamma = -<M>
  double mean_observable = 0.0;  // <A>
  double rhs = 0.0;
};

/// Outcome of one identity check. passed is true iff abs_residual <=
/// tolerance or rel_residual <= tolerance.
struct QeiReport {
  std::string label;
  double gamma = 0.0;
  double lhs = 0.0;  // finite-difference d<A>/dgamma
  double rhs = 0.0;
  double term_da = 0.0;
  double term_am = 0.0;
  double term_logxi = 0.0;
  double mean_observable = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline constexpr double kDefaultTolerance = 1e-6;

/// <A> = sum over the three states of w_M * a(M, gamma).
double expectation(const DiagonalObservable& obs, const DomainSpec& spec,
                   ChemicalPotential gamma);

/// Assembles the analytic right side.
QeiTerms qei_rhs(const DiagonalObservable& obs, const DomainSpec& spec,
                 ChemicalPotential gamma);

/// Central-difference estimate of d<A>/dgamma.
double qei_lhs_fd(const DiagonalObservable& obs, const DomainSpec& spec,
                  ChemicalPotential gamma, const FiniteDiffConfig& cfg);

/// Full check for one observable at one point. Runs the derivative
/// self-consistency gate first and throws ObservableError if the observable
/// fails it.
QeiReport verify_qei(const DiagonalObservable& obs, const DomainSpec& spec,
                     ChemicalPotential gamma, const FiniteDiffConfig& cfg,
                     double tolerance = kDefaultTolerance);
QeiReport verify_qei(const DiagonalObservable& obs, const DomainSpec& spec,
                     ChemicalPotential gamma,
                     double tolerance = kDefaultTolerance);

/// Fluctuation-dissipation check d<M>/dgamma = -Var(M), with the right side
/// taken from the closed-form variance.
QeiReport verify_fdt(const DomainSpec& spec, ChemicalPotential gamma,
                     const FiniteDiffConfig& cfg,
                     double tolerance = kDefaultTolerance);
QeiReport verify_fdt(const DomainSpec& spec, ChemicalPotential gamma,
                     double tolerance = kDefaultTolerance);

/// Purity counterpart dphi/dgamma = -2 Cov(rho, M), closed forms both sides
/// of the breakdown, finite difference of the purity on the left.
QeiReport verify_pfdt(const DomainSpec& spec, ChemicalPotential gamma,
                      const FiniteDiffConfig& cfg,
                      double tolerance = kDefaultTolerance);
QeiReport verify_pfdt(const DomainSpec& spec, ChemicalPotential gamma,
                      double tolerance = kDefaultTolerance);

// Bundled test operators.
DiagonalObservable identity_observable();        // a = 1
DiagonalObservable number_observable();          // a = M
DiagonalObservable number_squared_observable();  // a = M^2
DiagonalObservable scaled_number_observable();   // a = gamma * M

/// The state itself as test operator: a(M, gamma) = w_M(gamma), with the
/// exact derivative dw_M/dgamma = w_M (<M> - M) supplied analytically.
DiagonalObservable state_weight_observable(const DomainSpec& spec);

/// All five of the above, for grid sweeps.
std::vector<DiagonalObservable> bundled_observables(const DomainSpec& spec);

}  // namespace tristat::qei
