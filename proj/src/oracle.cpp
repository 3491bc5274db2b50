#include "tristat/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tristat::oracle {
namespace {

constexpr double kEntropyFloor = 1e-300;

void require_valid_states(const std::vector<int>& states) {
  if (states.empty()) {
    throw std::invalid_argument("ensemble needs at least one state");
  }
  std::vector<int> sorted = states;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("ensemble states must be distinct");
  }
}

void require_finite_gamma(double gamma) {
  if (!std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be finite");
  }
}

double max_exponent(std::span<const int> states, double gamma) {
  double shift = -std::numeric_limits<double>::infinity();
  for (int m : states) shift = std::max(shift, -gamma * m);
  return shift;
}

// Exact integer power for the small k used here.
double ipow(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace

GeneralEnsemble make_ensemble(std::vector<int> states, double gamma) {
  require_valid_states(states);
  require_finite_gamma(gamma);

  const double shift = max_exponent(states, gamma);
  std::vector<double> w(states.size());
  CompensatedSum norm;
  for (std::size_t i = 0; i < states.size(); ++i) {
    w[i] = std::exp(-gamma * states[i] - shift);
    norm.add(w[i]);
  }
  const double total = norm.value();
  for (double& wi : w) wi /= total;
  return {std::move(states), gamma, std::move(w)};
}

double log_partition(std::span<const int> states, double gamma) {
  if (states.empty()) {
    throw std::invalid_argument("ensemble needs at least one state");
  }
  require_finite_gamma(gamma);
  const double shift = max_exponent(states, gamma);
  CompensatedSum sum;
  for (int m : states) sum.add(std::exp(-gamma * m - shift));
  return shift + std::log(sum.value());
}

double moment(const GeneralEnsemble& ens, int k) {
  if (k < 0) throw std::invalid_argument("moment order must be >= 0");
  CompensatedSum acc;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    acc.add(ens.weights[i] * ipow(static_cast<double>(ens.states[i]), k));
  }
  return acc.value();
}

double purity(const GeneralEnsemble& ens) {
  CompensatedSum acc;
  for (double w : ens.weights) acc.add(w * w);
  return acc.value();
}

double covariance_rho_m(const GeneralEnsemble& ens) {
  CompensatedSum ww_m;   // sum w^2 M
  CompensatedSum ww;     // sum w^2
  CompensatedSum w_m;    // sum w M
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double w = ens.weights[i];
    const double m = static_cast<double>(ens.states[i]);
    ww_m.add(w * w * m);
    ww.add(w * w);
    w_m.add(w * m);
  }
  return ww_m.value() - ww.value() * w_m.value();
}

double entropy(const GeneralEnsemble& ens) {
  CompensatedSum acc;
  for (double w : ens.weights) {
    if (w >= kEntropyFloor) acc.add(-w * std::log(w));
  }
  return acc.value();
}

}  // namespace tristat::oracle
