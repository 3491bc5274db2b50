#include "tristat/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "tristat/calibrate.hpp"
#include "tristat/qei.hpp"

#include "json.hpp"

namespace tristat::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

// 12 significant digits, C locale, no trailing padding.
std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// The double a reader of the CSV cell obtains; JSON rows carry exactly this
// so both formats are numerically identical.
double csv_parsed(double v) {
  return std::strtod(format_value(v).c_str(), nullptr);
}

struct Column {
  std::string name;
  int q = 1;
  Quantity quantity = Quantity::Nu;
  int sub = 0;  // weight component: 0 cation, 1 neutral, 2 anion
};

std::vector<Column> build_columns(const std::vector<int>& qs,
                                  const std::vector<Quantity>& quantities) {
  const bool multi_q = qs.size() > 1;
  std::vector<Column> cols;
  for (Quantity qty : quantities) {
    for (int q : qs) {
      const std::string suffix = multi_q ? "_q" + std::to_string(q) : "";
      if (qty == Quantity::Weights) {
        cols.push_back({"w_cation" + suffix, q, qty, 0});
        cols.push_back({"w_neutral" + suffix, q, qty, 1});
        cols.push_back({"w_anion" + suffix, q, qty, 2});
      } else {
        cols.push_back(
            {std::string(quantity_name(qty)) + suffix, q, qty, 0});
      }
    }
  }
  return cols;
}

double column_value(const Column& col, int n, ChemicalPotential gamma) {
  switch (col.quantity) {
    case Quantity::Nu:
      return transferred_charge(col.q, gamma).nu;
    case Quantity::Mean:
      return mean_population(DomainSpec(n, col.q), gamma);
    case Quantity::Variance:
      return variance(col.q, gamma);
    case Quantity::Purity:
      return purity(col.q, gamma);
    case Quantity::Covariance:
      return covariance_rho_m(col.q, gamma);
    case Quantity::Entropy:
      return entropy(DomainSpec(n, col.q), gamma);
    case Quantity::Weights: {
      const WeightVector w = weights(DomainSpec(n, col.q), gamma);
      return col.sub == 0 ? w.cation : (col.sub == 1 ? w.neutral : w.anion);
    }
  }
  throw std::logic_error("unhandled quantity");
}

void validate_common(int n, const std::vector<int>& qs,
                     const std::vector<Quantity>& quantities) {
  if (qs.empty()) throw std::invalid_argument("at least one q is required");
  if (quantities.empty()) {
    throw std::invalid_argument("at least one quantity is required");
  }
  for (int q : qs) static_cast<void>(DomainSpec(n, q));  // q >= 1, n - q >= 0
}

std::string render_table(const std::vector<double>& gammas,
                         const std::vector<Column>& cols, int n,
                         OutputFormat format, ordered_json config_echo) {
  if (format == OutputFormat::Csv) {
    std::string out = "gamma";
    for (const Column& c : cols) out += "," + c.name;
    out += '\n';
    for (double g : gammas) {
      const ChemicalPotential gamma(g);
      out += format_value(g);
      for (const Column& c : cols) {
        out += ',';
        out += format_value(column_value(c, n, gamma));
      }
      out += '\n';
    }
    return out;
  }

  ordered_json doc;
  doc["config"] = std::move(config_echo);
  ordered_json rows = ordered_json::array();
  for (double g : gammas) {
    const ChemicalPotential gamma(g);
    ordered_json row;
    row["gamma"] = csv_parsed(g);
    for (const Column& c : cols) {
      row[c.name] = csv_parsed(column_value(c, n, gamma));
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + '\n';
}

ordered_json quantities_echo(const std::vector<Quantity>& quantities) {
  ordered_json arr = ordered_json::array();
  for (Quantity q : quantities) arr.push_back(std::string(quantity_name(q)));
  return arr;
}

std::string format_scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

Quantity parse_quantity(std::string_view name) {
  if (name == "nu") return Quantity::Nu;
  if (name == "mean") return Quantity::Mean;
  if (name == "variance") return Quantity::Variance;
  if (name == "purity") return Quantity::Purity;
  if (name == "covariance") return Quantity::Covariance;
  if (name == "entropy") return Quantity::Entropy;
  if (name == "weights") return Quantity::Weights;
  throw std::invalid_argument("unknown quantity '" + std::string(name) +
                              "' (expected nu, mean, variance, purity, "
                              "covariance, entropy or weights)");
}

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Nu: return "nu";
    case Quantity::Mean: return "mean";
    case Quantity::Variance: return "variance";
    case Quantity::Purity: return "purity";
    case Quantity::Covariance: return "covariance";
    case Quantity::Entropy: return "entropy";
    case Quantity::Weights: return "weights";
  }
  return "?";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(name) +
                              "' (expected csv or json)");
}

SweepConfig preset_sweep(std::string_view preset) {
  SweepConfig cfg;
  cfg.qs = {1, 2, 3};
  cfg.gamma_min = -6.0;
  cfg.gamma_max = 6.0;
  cfg.steps = 601;
  if (preset == "fig1a") {
    cfg.quantities = {Quantity::Nu};
  } else if (preset == "fig1b") {
    cfg.quantities = {Quantity::Variance};
  } else if (preset == "fig2a") {
    cfg.quantities = {Quantity::Purity};
  } else if (preset == "fig2b") {
    cfg.quantities = {Quantity::Covariance};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(preset) +
                                "' (expected fig1a, fig1b, fig2a or fig2b)");
  }
  return cfg;
}

double grid_gamma(double gamma_min, double gamma_max, int steps, int index) {
  if (index == 0) return gamma_min;
  if (index == steps - 1) return gamma_max;
  return gamma_min + (index * (gamma_max - gamma_min)) / (steps - 1);
}

std::string render_sweep(const SweepConfig& cfg) {
  validate_common(cfg.n, cfg.qs, cfg.quantities);
  if (cfg.steps < 2) throw std::invalid_argument("steps must be >= 2");
  if (!(cfg.gamma_min < cfg.gamma_max)) {
    throw std::invalid_argument("gamma_min must be less than gamma_max");
  }
  static_cast<void>(ChemicalPotential(cfg.gamma_min));
  static_cast<void>(ChemicalPotential(cfg.gamma_max));

  std::vector<double> gammas(cfg.steps);
  for (int i = 0; i < cfg.steps; ++i) {
    gammas[i] = grid_gamma(cfg.gamma_min, cfg.gamma_max, cfg.steps, i);
  }

  ordered_json echo;
  echo["command"] = "sweep";
  echo["n"] = cfg.n;
  echo["q"] = cfg.qs;
  echo["gamma_min"] = cfg.gamma_min;
  echo["gamma_max"] = cfg.gamma_max;
  echo["steps"] = cfg.steps;
  echo["quantities"] = quantities_echo(cfg.quantities);

  return render_table(gammas, build_columns(cfg.qs, cfg.quantities), cfg.n,
                      cfg.format, std::move(echo));
}

std::string render_eval(const EvalConfig& cfg) {
  validate_common(cfg.n, {cfg.q}, cfg.quantities);
  ChemicalPotential gamma(cfg.gamma);

  ordered_json echo;
  echo["command"] = "eval";
  echo["n"] = cfg.n;
  echo["q"] = cfg.q;
  echo["gamma"] = cfg.gamma;
  echo["quantities"] = quantities_echo(cfg.quantities);

  return render_table({gamma.value}, build_columns({cfg.q}, cfg.quantities),
                      cfg.n, cfg.format, std::move(echo));
}

VerifySummary run_verify(const VerifyConfig& cfg) {
  if (cfg.qs.empty()) throw std::invalid_argument("at least one q is required");
  if (!(cfg.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  for (int q : cfg.qs) static_cast<void>(DomainSpec(cfg.n, q));

  std::vector<double> gammas;
  if (cfg.gamma) {
    gammas.push_back(ChemicalPotential(*cfg.gamma).value);
  } else {
    if (cfg.steps < 2) throw std::invalid_argument("steps must be >= 2");
    if (!(cfg.gamma_min < cfg.gamma_max)) {
      throw std::invalid_argument("gamma_min must be less than gamma_max");
    }
    for (int i = 0; i < cfg.steps; ++i) {
      gammas.push_back(
          grid_gamma(cfg.gamma_min, cfg.gamma_max, cfg.steps, i));
    }
  }

  struct Row {
    std::string label;
    int q = 0;
    int points = 0;
    int failures = 0;
    double max_abs = 0.0;
    double max_rel = 0.0;
  };
  std::vector<Row> rows;
  std::ostringstream failures;
  VerifySummary summary;

  const auto record = [&](const qei::QeiReport& report, Row& row) {
    ++summary.checks;
    ++row.points;
    row.max_abs = std::max(row.max_abs, report.abs_residual);
    row.max_rel = std::max(row.max_rel, report.rel_residual);
    if (!report.passed) {
      ++summary.failures;
      ++row.failures;
      failures << "FAIL q=" << row.q << " gamma=" << format_value(report.gamma)
               << " check=" << report.label
               << " lhs=" << format_value(report.lhs)
               << " rhs=" << format_value(report.rhs)
               << " abs=" << format_scientific(report.abs_residual)
               << " rel=" << format_scientific(report.rel_residual) << '\n';
    }
  };

  for (int q : cfg.qs) {
    const DomainSpec spec(cfg.n, q);
    const auto observables = qei::bundled_observables(spec);

    std::vector<Row> block;
    block.push_back({"fdt", q});
    block.push_back({"pfdt", q});
    for (const auto& obs : observables) block.push_back({obs.label, q});

    for (double g : gammas) {
      const ChemicalPotential gamma(g);
      const auto cfg_fd = qei::FiniteDiffConfig::for_gamma(g);
      record(qei::verify_fdt(spec, gamma, cfg_fd, cfg.tolerance), block[0]);
      record(qei::verify_pfdt(spec, gamma, cfg_fd, cfg.tolerance), block[1]);
      for (std::size_t i = 0; i < observables.size(); ++i) {
        record(qei::verify_qei(observables[i], spec, gamma, cfg_fd,
                               cfg.tolerance),
               block[2 + i]);
      }
    }
    rows.insert(rows.end(), block.begin(), block.end());
  }

  std::ostringstream out;
  out << std::left << std::setw(14) << "check" << std::right << std::setw(4)
      << "q" << std::setw(9) << "points" << std::setw(10) << "failures"
      << std::setw(16) << "max|lhs-rhs|" << std::setw(13) << "max rel"
      << '\n';
  for (const Row& row : rows) {
    out << std::left << std::setw(14) << row.label << std::right
        << std::setw(4) << row.q << std::setw(9) << row.points
        << std::setw(10) << row.failures << std::setw(16)
        << format_scientific(row.max_abs) << std::setw(13)
        << format_scientific(row.max_rel) << '\n';
  }
  out << failures.str();
  out << "verify: " << summary.checks << " checks, " << summary.failures
      << " failures (tolerance " << format_value(cfg.tolerance) << ")\n";
  summary.report = out.str();
  return summary;
}

std::string render_invert(const InvertConfig& cfg) {
  if (cfg.target_nu.has_value() == cfg.target_population.has_value()) {
    throw std::invalid_argument(
        "exactly one of a target charge fraction or a target population is "
        "required");
  }

  calibrate::InversionResult result;
  std::optional<double> achieved_population;
  ordered_json echo;
  echo["command"] = "invert";
  echo["q"] = cfg.q;
  if (cfg.target_nu) {
    result = calibrate::gamma_for_charge(cfg.q, *cfg.target_nu);
    echo["target_nu"] = *cfg.target_nu;
  } else {
    if (!cfg.n) {
      throw std::invalid_argument("a population target requires n");
    }
    const DomainSpec spec(*cfg.n, cfg.q);
    result = calibrate::gamma_for_population(spec, *cfg.target_population);
    achieved_population = *cfg.n + result.achieved_nu;
    echo["n"] = *cfg.n;
    echo["target_population"] = *cfg.target_population;
  }

  if (cfg.format == OutputFormat::Csv) {
    std::string header = "gamma,achieved_nu";
    std::string row = format_value(result.gamma) + "," +
                      format_value(result.achieved_nu);
    if (achieved_population) {
      header += ",achieved_population";
      row += "," + format_value(*achieved_population);
    }
    header += ",iterations,bracket_width";
    row += "," + std::to_string(result.iterations) + "," +
           format_value(result.bracket_width_final);
    return header + '\n' + row + '\n';
  }

  ordered_json doc;
  doc["config"] = std::move(echo);
  ordered_json res;
  res["gamma"] = csv_parsed(result.gamma);
  res["achieved_nu"] = csv_parsed(result.achieved_nu);
  if (achieved_population) {
    res["achieved_population"] = csv_parsed(*achieved_population);
  }
  res["iterations"] = result.iterations;
  res["bracket_width"] = csv_parsed(result.bracket_width_final);
  doc["result"] = std::move(res);
  return doc.dump(2) + '\n';
}

}  // namespace tristat::cli
