#include "tristat/ensemble.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "tristat/oracle.hpp"

using namespace tristat;

namespace {

ChemicalPotential cp(double g) { return ChemicalPotential(g); }

// Expected values below were frozen from an independent 30-digit
// direct-summation computation over the three states; the closed forms and
// the oracle module must both reproduce them.
constexpr double kMean511 = 4.4247896173955586;
constexpr double kNu11 = -0.57521038260444143;
constexpr double kVar11 = 0.42440454468925445;
constexpr double kPurity11 = 0.5105430578904047;
constexpr double kCov11 = -0.14077035746963013;
constexpr double kEntropy511 = 0.83239558183993887;

}  // namespace

TEST_SUITE("ensemble") {

TEST_CASE("domain spec validation") {
  const DomainSpec spec(5, 1);
  CHECK(spec.baseline_population == 5);
  CHECK(spec.max_capacity == 1);
  CHECK(spec.cation_population() == 4);
  CHECK(spec.anion_population() == 6);

  CHECK_NOTHROW(DomainSpec(1, 1));  // cation population may reach zero
  CHECK_THROWS_AS(DomainSpec(2, 3), std::domain_error);
  CHECK_THROWS_AS(DomainSpec(0, 1), std::domain_error);
  CHECK_THROWS_AS(DomainSpec(5, 0), std::domain_error);
  CHECK_THROWS_AS(DomainSpec(5, -2), std::domain_error);
}

TEST_CASE("chemical potential validation") {
  CHECK(ChemicalPotential(0.0).value == 0.0);
  CHECK(ChemicalPotential(-1.5e3).value == -1.5e3);
  CHECK_THROWS_AS(ChemicalPotential(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(ChemicalPotential(INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(ChemicalPotential(-INFINITY), std::invalid_argument);
}

TEST_CASE("log partition") {
  CHECK(std::fabs(log_partition(DomainSpec(5, 1), cp(0.0)) - std::log(3.0)) <=
        1e-12);
  // -gamma*N + ln(1 + 2 cosh(gamma q)) at (N=1, q=1, gamma=1)
  CHECK(std::fabs(log_partition(DomainSpec(1, 1), cp(1.0)) -
                  0.40760596444438034) <= 1e-12);
  CHECK(std::fabs(log_partition(DomainSpec(3, 2), cp(-2.0)) -
                  10.018479302594657) <= 1e-12);
  // matches the oracle's direct log-sum-exp over the same states
  const std::vector<int> states = {1, 3, 5};
  CHECK(std::fabs(log_partition(DomainSpec(3, 2), cp(-2.0)) -
                  oracle::log_partition(states, -2.0)) <= 1e-12);
  // never formed via raw Xi: stays finite deep in saturation
  CHECK(std::isfinite(log_partition(DomainSpec(10, 2), cp(1000.0))));
  CHECK(std::isfinite(log_partition(DomainSpec(10, 2), cp(-1000.0))));
}

TEST_CASE("weights at gamma zero are uniform") {
  for (int q : {1, 2, 5}) {
    const WeightVector w = weights(DomainSpec(q + 3, q), cp(0.0));
    CHECK(std::fabs(w.cation - 1.0 / 3.0) <= 1e-15);
    CHECK(std::fabs(w.neutral - 1.0 / 3.0) <= 1e-15);
    CHECK(std::fabs(w.anion - 1.0 / 3.0) <= 1e-15);
  }
}

TEST_CASE("weights frozen point") {
  const WeightVector w = weights(DomainSpec(5, 1), cp(1.0));
  CHECK(std::fabs(w.cation - 0.66524095577482189) <= 1e-13);
  CHECK(std::fabs(w.neutral - 0.24472847105479765) <= 1e-13);
  CHECK(std::fabs(w.anion - 0.090030573170380458) <= 1e-13);
  CHECK(std::fabs(w.sum() - 1.0) <= 1e-12);
}

TEST_CASE("weights survive strong saturation without underflow artifacts") {
  const WeightVector w = weights(DomainSpec(5, 2), cp(30.0));
  CHECK(w.cation >= 1.0 - 1e-20);
  CHECK(w.neutral > 0.0);
  CHECK(w.neutral <= 1e-20);
  CHECK(w.anion > 0.0);
  CHECK(w.anion <= 1e-20);
  CHECK(std::fabs(w.sum() - 1.0) <= 1e-12);
}

TEST_CASE("weight properties over random parameters") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 10000; ++i) {
    const int q = testutil::uniform_int(rng, 1, 6);
    const int n = q + testutil::uniform_int(rng, 0, 20);
    const double g = testutil::uniform(rng, -40.0, 40.0);
    const WeightVector w = weights(DomainSpec(n, q), cp(g));
    CHECK(std::fabs(w.sum() - 1.0) <= 1e-12);
    CHECK(w.cation > 0.0);
    CHECK(w.neutral > 0.0);
    CHECK(w.anion > 0.0);
  }
  // cation/anion ratio equals exp(2 gamma q), checked where neither weight
  // has drifted into the subnormal range
  for (int i = 0; i < 2000; ++i) {
    const int q = testutil::uniform_int(rng, 1, 6);
    const double g = testutil::uniform(rng, -30.0 / q, 30.0 / q);
    const WeightVector w = weights(DomainSpec(q + 4, q), cp(g));
    const double ratio = w.cation / w.anion;
    const double expected = std::exp(2.0 * g * q);
    CHECK(std::fabs(ratio - expected) <= 1e-10 * expected);
  }
}

TEST_CASE("transferred charge") {
  const TransferredCharge zero = transferred_charge(3, cp(0.0));
  CHECK(zero.nu == 0.0);
  CHECK_FALSE(std::signbit(zero.nu));  // no -0 leaking into output

  CHECK(std::fabs(transferred_charge(1, cp(1.0)).nu - kNu11) <= 1e-12);
  CHECK(std::fabs(transferred_charge(1, cp(-1.0)).nu + kNu11) <= 1e-12);
  CHECK_THROWS_AS(transferred_charge(0, cp(1.0)), std::domain_error);
  CHECK_THROWS_AS(transferred_charge(-1, cp(1.0)), std::domain_error);
}

TEST_CASE("variance") {
  CHECK(std::fabs(variance(1, cp(0.0)) - 2.0 / 3.0) <= 1e-15);
  CHECK(std::fabs(variance(3, cp(0.0)) - 6.0) <= 1e-12);
  CHECK(std::fabs(variance(1, cp(1.0)) - kVar11) <= 1e-12);
  CHECK_THROWS_AS(variance(0, cp(0.0)), std::domain_error);
}

TEST_CASE("purity") {
  for (int q : {1, 2, 3, 6}) {
    CHECK(std::fabs(purity(q, cp(0.0)) - 1.0 / 3.0) <= 1e-15);
  }
  CHECK(std::fabs(purity(1, cp(1.0)) - kPurity11) <= 1e-12);
  const double saturated = purity(2, cp(30.0));
  CHECK(saturated >= 1.0 - 1e-20);
  CHECK(saturated <= 1.0);
  CHECK(std::isfinite(saturated));
}

TEST_CASE("covariance") {
  const double at_zero = covariance_rho_m(1, cp(0.0));
  CHECK(at_zero == 0.0);
  CHECK_FALSE(std::signbit(at_zero));
  CHECK(std::fabs(covariance_rho_m(1, cp(1.0)) - kCov11) <= 1e-12);
  CHECK(std::fabs(covariance_rho_m(1, cp(-1.0)) + kCov11) <= 1e-12);
  CHECK_THROWS_AS(covariance_rho_m(0, cp(0.5)), std::domain_error);
}

TEST_CASE("entropy") {
  CHECK(std::fabs(entropy(DomainSpec(5, 1), cp(0.0)) - std::log(3.0)) <=
        1e-12);
  CHECK(std::fabs(entropy(DomainSpec(9, 4), cp(0.0)) - std::log(3.0)) <=
        1e-12);
  CHECK(std::fabs(entropy(DomainSpec(5, 1), cp(1.0)) - kEntropy511) <= 1e-12);
  const double saturated = entropy(DomainSpec(5, 1), cp(50.0));
  CHECK(saturated >= 0.0);
  CHECK(saturated < 1e-18);
  CHECK(std::isfinite(saturated));
}

TEST_CASE("mean population") {
  CHECK(std::fabs(mean_population(DomainSpec(5, 1), cp(0.0)) - 5.0) <= 1e-15);
  CHECK(std::fabs(mean_population(DomainSpec(5, 1), cp(1.0)) - kMean511) <=
        1e-12);
  // saturates to N + q in the deep acceptor regime
  CHECK(std::fabs(mean_population(DomainSpec(5, 2), cp(-50.0)) - 7.0) <=
        1e-10);
}

TEST_CASE("parity in gamma") {
  std::mt19937_64 rng(77001);
  for (int i = 0; i < 2000; ++i) {
    const int q = testutil::uniform_int(rng, 1, 6);
    const int n = q + testutil::uniform_int(rng, 0, 10);
    const DomainSpec spec(n, q);
    const double g = testutil::uniform(rng, 0.0, 30.0 / q);
    CHECK(std::fabs(transferred_charge(q, cp(-g)).nu +
                    transferred_charge(q, cp(g)).nu) <= 1e-12);
    CHECK(std::fabs(covariance_rho_m(q, cp(-g)) + covariance_rho_m(q, cp(g))) <=
          1e-12);
    CHECK(std::fabs(variance(q, cp(-g)) - variance(q, cp(g))) <= 1e-12);
    CHECK(std::fabs(purity(q, cp(-g)) - purity(q, cp(g))) <= 1e-12);
    CHECK(std::fabs(entropy(spec, cp(-g)) - entropy(spec, cp(g))) <= 1e-12);
  }
}

TEST_CASE("bounds on the non-saturated domain") {
  std::mt19937_64 rng(424242);
  const double ln3 = std::log(3.0);
  for (int i = 0; i < 4000; ++i) {
    const int q = testutil::uniform_int(rng, 1, 6);
    const DomainSpec spec(q + 4, q);
    const double g = testutil::uniform(rng, -30.0 / q, 30.0 / q);
    const double nu = transferred_charge(q, cp(g)).nu;
    CHECK(nu > -q);
    CHECK(nu < q);
    const double var = variance(q, cp(g));
    CHECK(var > 0.0);
    CHECK(var <= 2.0 * q * q / 3.0 + 1e-12);
    const double phi = purity(q, cp(g));
    CHECK(phi >= 1.0 / 3.0 - 1e-15);
    CHECK(phi < 1.0);
    const double s = entropy(spec, cp(g));
    CHECK(s > 0.0);
    CHECK(s <= ln3 + 1e-12);
    const double mean = mean_population(spec, cp(g));
    CHECK(mean > spec.cation_population());
    CHECK(mean < spec.anion_population());
  }
}

TEST_CASE("purity equals the summed squared weights") {
  std::mt19937_64 rng(90210);
  for (int i = 0; i < 2000; ++i) {
    const int q = testutil::uniform_int(rng, 1, 6);
    const DomainSpec spec(q + 2, q);
    const double g = testutil::uniform(rng, -30.0 / q, 30.0 / q);
    CHECK(std::fabs(purity(q, cp(g)) - weights(spec, cp(g)).sum_squares()) <=
          1e-12);
  }
}

TEST_CASE("variance decomposition cross-check") {
  // Var = q^2 (1 - w_neutral) - nu^2, an algebraic consequence of the
  // closed forms that exercises an independent combination of them.
  std::mt19937_64 rng(5150);
  for (int i = 0; i < 2000; ++i) {
    const int q = testutil::uniform_int(rng, 1, 6);
    const DomainSpec spec(q + 2, q);
    const double g = testutil::uniform(rng, -30.0 / q, 30.0 / q);
    const double nu = transferred_charge(q, cp(g)).nu;
    const double w_neutral = weights(spec, cp(g)).neutral;
    const double decomposed =
        static_cast<double>(q) * q * (1.0 - w_neutral) - nu * nu;
    CHECK(std::fabs(variance(q, cp(g)) - decomposed) <= 1e-12);
  }
}

TEST_CASE("closed forms match the brute-force oracle") {
  for (int q : {1, 3, 6}) {
    const int n = q + 4;
    const DomainSpec spec(n, q);
    const std::vector<int> states = {n - q, n, n + q};
    for (int i = 0; i < 81; ++i) {
      const double g = -30.0 / q + i * (60.0 / q) / 80.0;
      const auto ens = oracle::make_ensemble(states, g);
      const double m1 = oracle::moment(ens, 1);
      CHECK(std::fabs(mean_population(spec, cp(g)) - m1) <= 1e-12);
      CHECK(std::fabs(transferred_charge(q, cp(g)).nu - (m1 - n)) <= 1e-12);
      CHECK(std::fabs(variance(q, cp(g)) -
                      (oracle::moment(ens, 2) - m1 * m1)) <= 1e-12);
      CHECK(std::fabs(purity(q, cp(g)) - oracle::purity(ens)) <= 1e-12);
      CHECK(std::fabs(covariance_rho_m(q, cp(g)) -
                      oracle::covariance_rho_m(ens)) <= 1e-12);
      CHECK(std::fabs(entropy(spec, cp(g)) - oracle::entropy(ens)) <= 1e-12);
    }
  }
}

TEST_CASE("transferred charge is strictly decreasing") {
  for (int q : {1, 2, 5}) {
    double previous = transferred_charge(q, cp(-20.0 / q)).nu;
    for (int i = 1; i < 1000; ++i) {
      const double g = -20.0 / q + i * (40.0 / q) / 999.0;
      const double nu = transferred_charge(q, cp(g)).nu;
      CHECK(nu < previous);
      previous = nu;
    }
  }
}

TEST_CASE("saturation robustness at extreme gamma") {
  for (double g : {-1000.0, 1000.0}) {
    for (int q = 1; q <= 6; ++q) {
      const DomainSpec spec(q + 4, q);
      CHECK(std::isfinite(log_partition(spec, cp(g))));
      const WeightVector w = weights(spec, cp(g));
      CHECK(std::isfinite(w.cation));
      CHECK(std::isfinite(w.neutral));
      CHECK(std::isfinite(w.anion));
      CHECK(std::fabs(w.sum() - 1.0) <= 1e-12);
      CHECK(std::isfinite(mean_population(spec, cp(g))));
      CHECK(std::isfinite(transferred_charge(q, cp(g)).nu));
      CHECK(std::isfinite(variance(q, cp(g))));
      CHECK(std::isfinite(purity(q, cp(g))));
      CHECK(std::isfinite(covariance_rho_m(q, cp(g))));
      CHECK(std::isfinite(entropy(spec, cp(g))));
    }
  }
}

}  // TEST_SUITE
