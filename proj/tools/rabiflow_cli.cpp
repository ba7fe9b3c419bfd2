#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rabiflow/config.hpp"
#include "rabiflow/emit.hpp"
#include "rabiflow/fock.hpp"
#include "rabiflow/harness.hpp"

using namespace rabiflow;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kToleranceFailure = 2;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("list", "bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int cmd_validate(int n_max, double tol) {
  const ValidationReport report = run_validation(n_max, {0.0, 6.25}, tol);
  std::printf("%-12s %6s  %-44s %12s %10s  %s\n", "suite", "B_R", "identity", "residual", "tol",
              "status");
  for (const ValidationRow& row : report.rows) {
    const char* status = !row.enforced ? "info" : row.pass() ? "ok" : "FAIL";
    std::printf("%-12s %6g  %-44s %12.3e %10.1e  %s\n", row.suite.c_str(), row.b_r,
                row.identity.c_str(), row.residual, row.tolerance, status);
  }
  std::printf("n_max = %d, %.2f s, %s\n", report.n_max, report.seconds,
              report.ok() ? "all identities hold" : "tolerance exceeded");
  return report.ok() ? kOk : kToleranceFailure;
}

int cmd_run(const std::string& preset_name, const std::string& config_path,
            std::optional<std::filesystem::path> out, bool svg) {
  ScenarioConfig cfg = preset_name.empty() ? load_config(config_path) : preset(preset_name);
  const std::filesystem::path dir = out.value_or(cfg.output_dir.value_or("."));
  const ScenarioResult result = run_scenario(cfg);
  std::filesystem::create_directories(dir);

  std::printf("%s: A0 = %.6g, n_max = %d, t_c = %.6g, t_H = %.6g, Rabi period = %.6g\n",
              cfg.name.c_str(), result.action, result.n_max, result.window.t_collapse,
              result.window.t_heisenberg, result.window.rabi_period);
  for (const char* obs : {"sigma3", "field"}) {
    const std::vector<TimeSeries> group = result.observable(obs);
    if (group.empty()) continue;
    const std::filesystem::path csv = dir / (cfg.name + "_" + obs + ".csv");
    write_csv(group, csv);
    std::printf("  wrote %s\n", csv.string().c_str());
    if (svg) {
      const std::filesystem::path plot = dir / (cfg.name + "_" + obs + ".svg");
      write_svg(group, plot, cfg.name + " " + obs);
      std::printf("  wrote %s\n", plot.string().c_str());
    }
    const TimeSeries& oracle = result.find(obs, Provenance::oracle);
    for (const TimeSeries& s : group) {
      if (s.provenance == Provenance::oracle) continue;
      const ComparisonReport rep = compare(s, oracle);
      std::printf("  %-22s vs oracle: max |diff| %.4e, normalized %.4e\n", s.key().c_str(),
                  rep.max_abs, rep.normalized);
    }
  }
  return kOk;
}

int cmd_scan(const std::string& preset_name, const std::string& config_path,
             const std::string& hbar_list, std::optional<std::uint64_t> seed) {
  ScenarioConfig cfg = preset_name.empty() ? load_config(config_path) : preset(preset_name);
  if (seed) cfg.quadrature.seed = *seed;
  const std::vector<double> hbars = parse_list(hbar_list);
  const ScalingReport scan = hbar_scan(cfg, hbars);

  std::printf("A0 = %.6g, B_R = %.6g, lambda = %.6g\n", scan.action, scan.b_r, scan.lambda);
  std::printf("%10s %12s %14s %14s %14s %14s\n", "hbar", "|alpha0|^2", "t_c/T oracle",
              "t_c/T closed", "dressed peak", "field error");
  for (const ScanPoint& p : scan.points) {
    std::printf("%10.6g %12.6g %14.6g %14.6g %14.6g %14.6g\n", p.hbar, p.alpha0_sq,
                p.collapse_periods, p.collapse_closed_periods, p.dressed_peak, p.field_rel_error);
  }
  auto line = [](const char* what, const PowerLawFit& f) {
    std::printf("%-28s exponent %+.4f +/- %.4f\n", what, f.exponent, f.exponent_stderr);
  };
  line("oracle collapse time", scan.collapse);
  line("dressed peak amplitude", scan.dressed_peak);
  line("field relative error", scan.field_error);
  return kOk;
}

const TimeSeries& select(const std::vector<TimeSeries>& all, const std::string& key,
                         const std::string& which) {
  if (key.empty()) {
    if (all.size() == 1) return all.front();
    throw ConfigError("select-" + which, "file holds " + std::to_string(all.size()) +
                                             " series; pick one as observable/provenance");
  }
  for (const TimeSeries& s : all) {
    if (s.key() == key) return s;
  }
  throw ConfigError("select-" + which, "no series '" + key + "'");
}

int cmd_compare(const std::string& path_a, const std::string& path_b, const std::string& window,
                const std::string& sel_a, const std::string& sel_b) {
  const std::vector<TimeSeries> all_a = read_csv(path_a);
  const std::vector<TimeSeries> all_b = read_csv(path_b);
  const TimeSeries& a = select(all_a, sel_a, "a");
  const TimeSeries& b = select(all_b, sel_b, "b");

  std::optional<std::pair<double, double>> win;
  if (!window.empty()) {
    const std::vector<double> w = parse_list(window);
    if (w.size() != 2) throw ConfigError("window", "expected T0,T1");
    win = std::make_pair(w[0], w[1]);
  }
  const ComparisonReport rep = compare(a, b, win);
  std::printf("%s vs %s on [%s, %s]\n", a.key().c_str(), b.key().c_str(),
              format_double(rep.window.first).c_str(), format_double(rep.window.second).c_str());
  for (const QuadratureDeviation& q : rep.components) {
    std::printf("  %s: max |diff| %.6e, span %.6e, normalized %.6e\n", q.component.c_str(),
                q.max_abs, q.span, q.normalized);
  }
  std::printf("  max |diff| %.6e, normalized %.6e\n", rep.max_abs, rep.normalized);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-packet Rabi oscillations: exact oracle vs semiclassical closed forms"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check operator identities and flows");
  int n_max = 128;
  double tol = 1e-10;
  validate->add_option("--n-max", n_max, "Fock cutoff")->check(CLI::Range(4, 4096));
  validate->add_option("--tol", tol, "Residual tolerance");

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV series");
  std::string preset_name, config_path, out_dir;
  bool svg = false;
  auto* run_preset = run->add_option("--preset", preset_name, "Built-in scenario");
  auto* run_config = run->add_option("--config", config_path, "Scenario file");
  run_preset->excludes(run_config);
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--svg", svg, "Also write SVG plots");

  auto* scan = app.add_subcommand("scan", "Repeat a scenario over several hbar");
  std::string hbar_list;
  std::optional<std::uint64_t> seed;
  auto* scan_preset = scan->add_option("--preset", preset_name, "Built-in scenario");
  auto* scan_config = scan->add_option("--config", config_path, "Scenario file");
  scan_preset->excludes(scan_config);
  scan->add_option("--hbar", hbar_list, "Comma separated hbar values")->required();
  scan->add_option("--seed", seed, "Monte-Carlo seed");

  auto* cmp = app.add_subcommand("compare", "Compare two CSV series");
  std::string path_a, path_b, window, sel_a, sel_b;
  cmp->add_option("--a", path_a, "CSV file")->required();
  cmp->add_option("--b", path_b, "Reference CSV file")->required();
  cmp->add_option("--window", window, "T0,T1");
  cmp->add_option("--select-a", sel_a, "observable/provenance in a");
  cmp->add_option("--select-b", sel_b, "observable/provenance in b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*validate) return cmd_validate(n_max, tol);
    if ((*run || *scan) && preset_name.empty() && config_path.empty()) {
      throw ConfigError("--preset", "give --preset or --config");
    }
    if (*run) {
      std::optional<std::filesystem::path> out;
      if (!out_dir.empty()) out = out_dir;
      return cmd_run(preset_name, config_path, out, svg);
    }
    if (*scan) return cmd_scan(preset_name, config_path, hbar_list, seed);
    if (*cmp) return cmd_compare(path_a, path_b, window, sel_a, sel_b);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fock::TruncationError& e) {
    std::cerr << "error: " << e.what() << " (need n_max >= " << e.required_n_max() << ")\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
