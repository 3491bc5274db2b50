#pragma once

#include <cmath>
#include <span>
#include <vector>

// Brute-force reference ensemble. Builds an exponential distribution over an
// arbitrary finite list of integer particle numbers and evaluates every
// statistic by direct summation. Deliberately knows nothing about the
// closed forms in ensemble.hpp -- that independence is what makes it useful
// as a validation oracle.

namespace tristat::oracle {

/// Neumaier-compensated accumulator; keeps direct sums accurate enough for
/// 1e-12 comparisons even over 10^4 terms.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// A finite exponential ensemble: distinct integer particle numbers with
/// weights proportional to exp(-gamma * M), normalized.
struct GeneralEnsemble {
  std::vector<int> states;
  double gamma = 0.0;
  std::vector<double> weights;

  std::size_t size() const { return states.size(); }
};

/// Builds the ensemble with shifted exponents (the largest exponent is
/// subtracted before exponentiation). states must be non-empty and distinct.
GeneralEnsemble make_ensemble(std::vector<int> states, double gamma);

/// ln sum_i exp(-gamma * M_i), by shifted direct summation.
double log_partition(std::span<const int> states, double gamma);

/// k-th raw moment sum_i w_i * M_i^k.
double moment(const GeneralEnsemble& ens, int k);

/// sum_i w_i^2 (expectation of the state itself).
double purity(const GeneralEnsemble& ens);

/// sum_i w_i^2 M_i - (sum_i w_i^2)(sum_i w_i M_i).
double covariance_rho_m(const GeneralEnsemble& ens);

/// -sum_i w_i ln w_i, with the x ln x -> 0 limit for underflowed weights.
double entropy(const GeneralEnsemble& ens);

}  // namespace tristat::oracle
