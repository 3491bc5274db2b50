#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tristat/ensemble.hpp"

// Command implementations behind the tristat executable. Everything here
// renders to strings (CSV or JSON) or a plain-text verification report, so
// the commands are directly testable without spawning processes.
//
// CSV contract: header `gamma,<column>[,<column>...]`, one row per grid
// point, values with 12 significant digits, '.' decimal separator, LF line
// endings, no locale dependence. Identical config => byte-identical output.
// JSON carries a config echo plus a rows array with values numerically
// identical to the CSV rendering.

namespace tristat::cli {

enum class Quantity {
  Nu,
  Mean,
  Variance,
  Purity,
  Covariance,
  Entropy,
  Weights,  // expands to columns w_cation, w_neutral, w_anion
};

enum class OutputFormat { Csv, Json };

Quantity parse_quantity(std::string_view name);
std::string_view quantity_name(Quantity q);
OutputFormat parse_format(std::string_view name);

/// Grid sweep over gamma. qs normally holds one capacity; figure presets use
/// {1, 2, 3} and suffix the columns with _q<k>.
struct SweepConfig {
  int n = 10;
  std::vector<int> qs;
  double gamma_min = -6.0;
  double gamma_max = 6.0;
  int steps = 601;
  std::vector<Quantity> quantities;
  OutputFormat format = OutputFormat::Csv;
};

/// fig1a -> nu, fig1b -> variance, fig2a -> purity, fig2b -> covariance;
/// all over q in {1,2,3}, gamma in [-6,6], 601 steps.
SweepConfig preset_sweep(std::string_view preset);

/// Uniform grid point i, exact at both endpoints.
double grid_gamma(double gamma_min, double gamma_max, int steps, int index);

std::string render_sweep(const SweepConfig& cfg);

/// Single-point evaluation.
struct EvalConfig {
  int n = 10;
  int q = 1;
  double gamma = 0.0;
  std::vector<Quantity> quantities;
  OutputFormat format = OutputFormat::Csv;
};

std::string render_eval(const EvalConfig& cfg);

/// Identity-verification run: fluctuation-dissipation, purity counterpart,
/// and the generic identity for the five bundled observables, on a gamma
/// grid (or a single point) for each capacity in qs.
struct VerifyConfig {
  int n = 10;
  std::vector<int> qs = {1, 2, 3};
  std::optional<double> gamma;  // set: single point; unset: grid below
  double gamma_min = -6.0;
  double gamma_max = 6.0;
  int steps = 121;
  double tolerance = 1e-6;
};

struct VerifySummary {
  int checks = 0;
  int failures = 0;
  std::string report;

  bool all_passed() const { return failures == 0; }
};

VerifySummary run_verify(const VerifyConfig& cfg);

/// Inversion: exactly one of target_nu / target_population must be set;
/// the population flavor also needs n.
struct InvertConfig {
  int q = 1;
  std::optional<int> n;
  std::optional<double> target_nu;
  std::optional<double> target_population;
  OutputFormat format = OutputFormat::Csv;
};

std::string render_invert(const InvertConfig& cfg);

}  // namespace tristat::cli
