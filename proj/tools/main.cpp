#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tristat/calibrate.hpp"
#include "tristat/cli.hpp"
#include "tristat/qei.hpp"

#include "CLI11.hpp"

namespace {

// Exit codes: 0 success, 1 verification failure, 2 input/spec error,
// 3 I/O error.
enum ExitCode { kOk = 0, kVerifyFailed = 1, kInputError = 2, kIoError = 3 };

int emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return kOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << out_path << "' for writing\n";
    return kIoError;
  }
  out << content;
  if (!out.flush()) {
    std::cerr << "error: failed writing '" << out_path << "'\n";
    return kIoError;
  }
  return kOk;
}

std::vector<tristat::cli::Quantity> parse_quantities(
    const std::vector<std::string>& names,
    const std::vector<tristat::cli::Quantity>& fallback) {
  if (names.empty()) return fallback;
  std::vector<tristat::cli::Quantity> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    out.push_back(tristat::cli::parse_quantity(name));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tristat;

  CLI::App app{"Three-state charge-transfer ensemble toolkit"};
  app.require_subcommand(1);

  const auto format_check = CLI::IsMember({"csv", "json"});
  const std::vector<cli::Quantity> default_quantities = {
      cli::Quantity::Nu,       cli::Quantity::Mean,
      cli::Quantity::Variance, cli::Quantity::Purity,
      cli::Quantity::Covariance, cli::Quantity::Entropy};

  // --- eval -----------------------------------------------------------
  auto* eval = app.add_subcommand(
      "eval", "Evaluate ensemble quantities at a single gamma");
  int eval_n = 10, eval_q = 1;
  double eval_gamma = 0.0;
  std::vector<std::string> eval_quantities;
  std::string eval_format = "csv", eval_out;
  eval->add_option("--n", eval_n, "Baseline electron count N")->required();
  eval->add_option("--q", eval_q, "Maximum transferable charge q")->required();
  eval->add_option("--gamma", eval_gamma, "Chemical potential")->required();
  eval->add_option("--quantities", eval_quantities,
                   "Comma-separated subset of nu,mean,variance,purity,"
                   "covariance,entropy,weights (default: all but weights)")
      ->delimiter(',');
  eval->add_option("--format", eval_format, "csv or json")->check(format_check);
  eval->add_option("--out", eval_out, "Output file (default: stdout)");

  // --- sweep ----------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate quantities on a uniform gamma grid");
  int sweep_n = 10, sweep_q = 1, sweep_steps = 601;
  double sweep_min = -6.0, sweep_max = 6.0;
  std::vector<std::string> sweep_quantities;
  std::string sweep_format = "csv", sweep_out, sweep_preset;
  auto* sweep_q_opt =
      sweep->add_option("--q", sweep_q, "Maximum transferable charge q");
  auto* sweep_n_opt =
      sweep->add_option("--n", sweep_n, "Baseline electron count N");
  auto* sweep_min_opt =
      sweep->add_option("--gamma-min", sweep_min, "Grid lower endpoint");
  auto* sweep_max_opt =
      sweep->add_option("--gamma-max", sweep_max, "Grid upper endpoint");
  auto* sweep_steps_opt = sweep->add_option(
      "--steps", sweep_steps, "Grid size including both endpoints (>= 2)");
  auto* sweep_quant_opt =
      sweep->add_option("--quantities", sweep_quantities,
                        "Comma-separated quantities (default: all but weights)")
          ->delimiter(',');
  auto* sweep_preset_opt = sweep->add_option(
      "--preset", sweep_preset,
      "Figure-data preset: fig1a (nu), fig1b (variance), fig2a (purity), "
      "fig2b (covariance); q in {1,2,3}, gamma in [-6,6], 601 steps");
  sweep_preset_opt->check(CLI::IsMember({"fig1a", "fig1b", "fig2a", "fig2b"}))
      ->excludes(sweep_q_opt, sweep_n_opt, sweep_min_opt, sweep_max_opt,
                 sweep_steps_opt, sweep_quant_opt);
  sweep->add_option("--format", sweep_format, "csv or json")
      ->check(format_check);
  sweep->add_option("--out", sweep_out, "Output file (default: stdout)");

  // --- verify ---------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify",
      "Check the expectation identities (fluctuation-dissipation, purity "
      "counterpart, generic identity for the bundled observables)");
  int verify_n = 10, verify_steps = 121;
  std::vector<int> verify_qs;
  double verify_min = -6.0, verify_max = 6.0, verify_tol = 1e-6;
  std::optional<double> verify_gamma;
  double verify_gamma_value = 0.0;
  verify->add_option("--n", verify_n, "Baseline electron count N");
  verify->add_option("--q", verify_qs,
                     "Capacities to check (default: 1 2 3)");
  auto* verify_gamma_opt = verify->add_option(
      "--gamma", verify_gamma_value, "Check a single gamma instead of a grid");
  verify->add_option("--gamma-min", verify_min, "Grid lower endpoint");
  verify->add_option("--gamma-max", verify_max, "Grid upper endpoint");
  verify->add_option("--steps", verify_steps, "Grid size (default 121)");
  verify->add_option("--tolerance", verify_tol,
                     "Pass when |lhs-rhs| <= tol or the relative residual "
                     "<= tol (default 1e-6)");

  // --- invert ---------------------------------------------------------
  auto* invert = app.add_subcommand(
      "invert", "Find the gamma producing a target charge fraction or "
                "population");
  int invert_q = 1, invert_n = 0;
  double invert_nu = 0.0, invert_population = 0.0;
  std::string invert_format = "csv", invert_out;
  invert->add_option("--q", invert_q, "Maximum transferable charge q")
      ->required();
  auto* invert_n_opt =
      invert->add_option("--n", invert_n, "Baseline electron count N");
  auto* invert_nu_opt = invert->add_option(
      "--nu", invert_nu, "Target transferred charge fraction, |nu| < q");
  auto* invert_pop_opt =
      invert->add_option("--population", invert_population,
                         "Target mean population in (N-q, N+q); requires --n");
  invert_nu_opt->excludes(invert_pop_opt, invert_n_opt);
  invert_pop_opt->needs(invert_n_opt);
  invert->add_option("--format", invert_format, "csv or json")
      ->check(format_check);
  invert->add_option("--out", invert_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*eval) {
      cli::EvalConfig cfg;
      cfg.n = eval_n;
      cfg.q = eval_q;
      cfg.gamma = eval_gamma;
      cfg.quantities = parse_quantities(eval_quantities, default_quantities);
      cfg.format = cli::parse_format(eval_format);
      return emit(cli::render_eval(cfg), eval_out);
    }

    if (*sweep) {
      cli::SweepConfig cfg;
      if (*sweep_preset_opt) {
        cfg = cli::preset_sweep(sweep_preset);
      } else {
        if (!*sweep_q_opt) {
          throw std::invalid_argument("sweep requires --q or --preset");
        }
        cfg.n = sweep_n;
        cfg.qs = {sweep_q};
        cfg.gamma_min = sweep_min;
        cfg.gamma_max = sweep_max;
        cfg.steps = sweep_steps;
        cfg.quantities =
            parse_quantities(sweep_quantities, default_quantities);
      }
      cfg.format = cli::parse_format(sweep_format);
      return emit(cli::render_sweep(cfg), sweep_out);
    }

    if (*verify) {
      cli::VerifyConfig cfg;
      cfg.n = verify_n;
      if (!verify_qs.empty()) cfg.qs = verify_qs;
      if (*verify_gamma_opt) cfg.gamma = verify_gamma_value;
      cfg.gamma_min = verify_min;
      cfg.gamma_max = verify_max;
      cfg.steps = verify_steps;
      cfg.tolerance = verify_tol;
      const cli::VerifySummary summary = cli::run_verify(cfg);
      std::cout << summary.report;
      return summary.all_passed() ? kOk : kVerifyFailed;
    }

    if (*invert) {
      cli::InvertConfig cfg;
      cfg.q = invert_q;
      if (*invert_n_opt) cfg.n = invert_n;
      if (*invert_nu_opt) cfg.target_nu = invert_nu;
      if (*invert_pop_opt) cfg.target_population = invert_population;
      cfg.format = cli::parse_format(invert_format);
      return emit(cli::render_invert(cfg), invert_out);
    }
  } catch (const std::domain_error& e) {  // includes UnreachableTargetError
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const qei::ObservableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }

  return kOk;
}
