#include "tristat/qei.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace tristat::qei {
namespace {

// Gate thresholds for the declared-derivative consistency check.
constexpr double kGateRelTol = 1e-6;
constexpr double kGateAbsTol = 1e-9;

std::array<int, 3> basis_states(const DomainSpec& spec) {
  return {spec.cation_population(), spec.baseline_population,
          spec.anion_population()};
}

std::array<double, 3> basis_weights(const DomainSpec& spec,
                                    ChemicalPotential gamma) {
  const WeightVector w = weights(spec, gamma);
  return {w.cation, w.neutral, w.anion};
}

void validate(const FiniteDiffConfig& cfg) {
  if (!(cfg.step > 0.0) || cfg.step > 1e-2) {
    throw std::invalid_argument(
        "finite-difference step must lie in (0, 1e-2]");
  }
}

template <typename F>
double central_diff(F&& f, double x, const FiniteDiffConfig& cfg) {
  const double h = cfg.step;
  if (cfg.scheme == FiniteDiffConfig::Scheme::Central2) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
  }
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) /
         (12.0 * h);
}

double require_finite(double v, const char* what,
                      const DiagonalObservable& obs, int population) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "observable '" << obs.label << "' produced a non-finite " << what
        << " at M=" << population;
    throw ObservableError(msg.str());
  }
  return v;
}

// The declared gamma-derivative must track a finite difference of the
// eigenvalue on every basis state before any identity is checked.
void check_derivative_consistency(const DiagonalObservable& obs,
                                  const DomainSpec& spec,
                                  ChemicalPotential gamma,
                                  const FiniteDiffConfig& cfg) {
  FiniteDiffConfig probe = cfg;
  probe.scheme = FiniteDiffConfig::Scheme::Central2;
  for (int m : basis_states(spec)) {
    const double declared =
        require_finite(obs.gamma_derivative(m, gamma.value), "derivative",
                       obs, m);
    const double fd = central_diff(
        [&obs, m](double g) { return obs.eigenvalue(m, g); }, gamma.value,
        probe);
    const double abs_diff = std::fabs(fd - declared);
    const double scale = std::max(std::fabs(fd), std::fabs(declared));
    if (abs_diff > kGateAbsTol && abs_diff > kGateRelTol * scale) {
      std::ostringstream msg;
      msg << "observable '" << obs.label
          << "' failed the derivative self-consistency gate at M=" << m
          << ", gamma=" << gamma.value << ": declared " << declared
          << " vs finite difference " << fd;
      throw ObservableError(msg.str());
    }
  }
}

QeiReport assemble(std::string label, double gamma, double lhs,
                   const QeiTerms& terms, double tolerance) {
  QeiReport report;
  report.label = std::move(label);
  report.gamma = gamma;
  report.lhs = lhs;
  report.rhs = terms.rhs;
  report.term_da = terms.term_da;
  report.term_am = terms.term_am;
  report.term_logxi = terms.term_logxi;
  report.mean_observable = terms.mean_observable;
  report.abs_residual = std::fabs(lhs - terms.rhs);
  const double scale = std::max(std::fabs(lhs), std::fabs(terms.rhs));
  report.rel_residual = scale > 0.0 ? report.abs_residual / scale : 0.0;
  report.tolerance = tolerance;
  report.passed = report.abs_residual <= tolerance ||
                  report.rel_residual <= tolerance;
  return report;
}

}  // namespace

FiniteDiffConfig FiniteDiffConfig::for_gamma(double gamma, Scheme scheme) {
  FiniteDiffConfig cfg;
  cfg.step = std::min(1e-5 * std::max(1.0, std::fabs(gamma)), 1e-2);
  cfg.scheme = scheme;
  return cfg;
}

double expectation(const DiagonalObservable& obs, const DomainSpec& spec,
                   ChemicalPotential gamma) {
  const auto states = basis_states(spec);
  const auto w = basis_weights(spec, gamma);
  double sum = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    sum += w[i] * require_finite(obs.eigenvalue(states[i], gamma.value),
                                 "eigenvalue", obs, states[i]);
  }
  return sum;
}

QeiTerms qei_rhs(const DiagonalObservable& obs, const DomainSpec& spec,
                 ChemicalPotential gamma) {
  const auto states = basis_states(spec);
  const auto w = basis_weights(spec, gamma);
  double sum_a = 0.0;    // <A>
  double sum_da = 0.0;   // <dA/dgamma>
  double sum_am = 0.0;   // <A M>
  double sum_m = 0.0;    // <M>
  for (std::size_t i = 0; i < states.size(); ++i) {
    const int m = states[i];
    const double a =
        require_finite(obs.eigenvalue(m, gamma.value), "eigenvalue", obs, m);
    const double da = require_finite(obs.gamma_derivative(m, gamma.value),
                                     "derivative", obs, m);
    sum_a += w[i] * a;
    sum_da += w[i] * da;
    sum_am += w[i] * a * m;
    sum_m += w[i] * m;
  }
  QeiTerms terms;
  terms.term_da = sum_da;
  terms.term_am = sum_am;
  terms.term_logxi = -sum_m;
  terms.mean_observable = sum_a;
  terms.rhs = terms.term_da - terms.term_am -
              terms.term_logxi * terms.mean_observable;
  return terms;
}

double qei_lhs_fd(const DiagonalObservable& obs, const DomainSpec& spec,
                  ChemicalPotential gamma, const FiniteDiffConfig& cfg) {
  validate(cfg);
  return central_diff(
      [&obs, &spec](double g) {
        return expectation(obs, spec, ChemicalPotential(g));
      },
      gamma.value, cfg);
}

QeiReport verify_qei(const DiagonalObservable& obs, const DomainSpec& spec,
                     ChemicalPotential gamma, const FiniteDiffConfig& cfg,
                     double tolerance) {
  validate(cfg);
  check_derivative_consistency(obs, spec, gamma, cfg);
  const double lhs = qei_lhs_fd(obs, spec, gamma, cfg);
  return assemble(obs.label, gamma.value, lhs, qei_rhs(obs, spec, gamma),
                  tolerance);
}

QeiReport verify_qei(const DiagonalObservable& obs, const DomainSpec& spec,
                     ChemicalPotential gamma, double tolerance) {
  return verify_qei(obs, spec, gamma, FiniteDiffConfig::for_gamma(gamma.value),
                    tolerance);
}

QeiReport verify_fdt(const DomainSpec& spec, ChemicalPotential gamma,
                     const FiniteDiffConfig& cfg, double tolerance) {
  validate(cfg);
  const double lhs = central_diff(
      [&spec](double g) { return mean_population(spec, ChemicalPotential(g)); },
      gamma.value, cfg);
  const double mean = mean_population(spec, gamma);
  QeiTerms terms;
  terms.term_da = 0.0;
  terms.term_am = variance(spec.max_capacity, gamma) + mean * mean;  // <M^2>
  terms.term_logxi = -mean;
  terms.mean_observable = mean;
  terms.rhs = terms.term_da - terms.term_am -
              terms.term_logxi * terms.mean_observable;  // = -Var(M)
  return assemble("fdt", gamma.value, lhs, terms, tolerance);
}

QeiReport verify_fdt(const DomainSpec& spec, ChemicalPotential gamma,
                     double tolerance) {
  return verify_fdt(spec, gamma, FiniteDiffConfig::for_gamma(gamma.value),
                    tolerance);
}

QeiReport verify_pfdt(const DomainSpec& spec, ChemicalPotential gamma,
                      const FiniteDiffConfig& cfg, double tolerance) {
  validate(cfg);
  const int q = spec.max_capacity;
  const double lhs = central_diff(
      [q](double g) { return purity(q, ChemicalPotential(g)); }, gamma.value,
      cfg);
  const double phi = purity(q, gamma);
  const double cov = covariance_rho_m(q, gamma);
  const double mean = mean_population(spec, gamma);
  QeiTerms terms;
  terms.term_da = -cov;                 // <d rho/d gamma> = -Cov(rho, M)
  terms.term_am = cov + mean * phi;     // <rho M>
  terms.term_logxi = -mean;
  terms.mean_observable = phi;
  terms.rhs = terms.term_da - terms.term_am -
              terms.term_logxi * terms.mean_observable;  // = -2 Cov(rho, M)
  return assemble("pfdt", gamma.value, lhs, terms, tolerance);
}

QeiReport verify_pfdt(const DomainSpec& spec, ChemicalPotential gamma,
                      double tolerance) {
  return verify_pfdt(spec, gamma, FiniteDiffConfig::for_gamma(gamma.value),
                     tolerance);
}

DiagonalObservable identity_observable() {
  return {"identity", [](int, double) { return 1.0; },
          [](int, double) { return 0.0; }};
}

DiagonalObservable number_observable() {
  return {"number",
          [](int m, double) { return static_cast<double>(m); },
          [](int, double) { return 0.0; }};
}

DiagonalObservable number_squared_observable() {
  return {"number^2",
          [](int m, double) {
            return static_cast<double>(m) * static_cast<double>(m);
          },
          [](int, double) { return 0.0; }};
}

DiagonalObservable scaled_number_observable() {
  return {"gamma*number",
          [](int m, double gamma) { return gamma * static_cast<double>(m); },
          [](int m, double) { return static_cast<double>(m); }};
}

DiagonalObservable state_weight_observable(const DomainSpec& spec) {
  const auto weight_of = [spec](int m, double gamma) {
    const WeightVector w = weights(spec, ChemicalPotential(gamma));
    if (m == spec.cation_population()) return w.cation;
    if (m == spec.baseline_population) return w.neutral;
    if (m == spec.anion_population()) return w.anion;
    throw ObservableError("state-weight observable queried outside the basis");
  };
  return {"state-weight", weight_of,
          [spec, weight_of](int m, double gamma) {
            const ChemicalPotential g(gamma);
            return weight_of(m, gamma) * (mean_population(spec, g) - m);
          }};
}

std::vector<DiagonalObservable> bundled_observables(const DomainSpec& spec) {
  return {identity_observable(), number_observable(),
          number_squared_observable(), scaled_number_observable(),
          state_weight_observable(spec)};
}

}  // namespace tristat::qei
