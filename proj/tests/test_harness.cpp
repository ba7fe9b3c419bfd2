#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "rabiflow/config.hpp"
#include "rabiflow/emit.hpp"
#include "rabiflow/fit.hpp"
#include "rabiflow/harness.hpp"

using namespace rabiflow;

namespace {

const char* kBase = R"(
[model]
hbar = 1
g = 1
b_r = 6.25

[prep]
n_mean = 8
atomic = excited

[time]
t_max_collapse_units = 3
samples_per_rabi_period = 40

[observables]
sigma3 = true
field = true
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::string config_error_field(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TimeSeries series(std::vector<double> t, std::vector<cplx> v, Provenance p = Provenance::oracle) {
  TimeSeries s;
  s.observable = "sigma3";
  s.provenance = p;
  s.t = std::move(t);
  s.values = std::move(v);
  return s;
}

}  // namespace

TEST_CASE("config parsing") {
  const ScenarioConfig cfg = parse_config(kBase, "base");
  CHECK(cfg.name == "base");
  CHECK(cfg.params.b_r() == doctest::Approx(6.25));
  CHECK(std::norm(cfg.prep.alpha0) == doctest::Approx(8.0));
  CHECK(cfg.n_mean.value() == 8.0);
  CHECK(cfg.field);
  CHECK_FALSE(cfg.phase_space);

  const ScenarioConfig d = parse_config(replace(kBase, "b_r = 6.25", "delta = 2.5"));
  CHECK(d.params.b_r() == doctest::Approx(6.25));

  const ScenarioConfig a =
      parse_config(replace(kBase, "n_mean = 8", "alpha0_re = 1.5\nalpha0_im = -2"));
  CHECK(a.prep.alpha0 == cplx(1.5, -2.0));
  CHECK_FALSE(a.n_mean.has_value());
}

TEST_CASE("config errors name the offending key") {
  CHECK(config_error_field(replace(kBase, "b_r = 6.25", "")) == "model.b_r");
  CHECK(config_error_field(replace(kBase, "b_r = 6.25", "b_r = 6.25\ndelta = 2.5")) == "model.b_r");
  CHECK(config_error_field(replace(kBase, "b_r = 6.25", "delta = -1")) == "model.delta");
  CHECK(config_error_field(replace(kBase, "hbar = 1", "hbar = 0")) == "model.hbar");
  CHECK(config_error_field(replace(kBase, "g = 1", "g = abc")) == "model.g");
  CHECK(config_error_field(replace(kBase, "n_mean = 8", "n_mean = 8\nalpha0_re = 1")) == "prep.n_mean");
  CHECK(config_error_field(replace(kBase, "atomic = excited", "atomic = ground")) == "prep.atomic");
  CHECK(config_error_field(replace(kBase, "samples_per_rabi_period = 40",
                                   "samples_per_rabi_period = 39")) ==
        "time.samples_per_rabi_period");
  CHECK(config_error_field(replace(kBase, "atomic = excited", "atomic = plus-dressed")) ==
        "observables.field");
  CHECK(config_error_field(std::string(kBase) + "phase_space = true\n[quadrature]\nrule = monte-carlo\n") ==
        "quadrature.seed");
  CHECK(config_error_field(std::string(kBase) + "[quadrature]\norder = 1\n") == "quadrature.order");
  CHECK(config_error_field(std::string(kBase) + "[quadrature]\nrule = simpson\n") == "quadrature.rule");
  CHECK(config_error_field("[model\nhbar = 1") == "file");
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.ini"), ConfigError);

  const ScenarioConfig mc =
      parse_config(std::string(kBase) + "phase_space = true\n[quadrature]\nrule = monte-carlo\nseed = 9\n");
  CHECK(mc.quadrature.seed.value() == 9u);
}

TEST_CASE("presets") {
  for (const std::string& name : preset_names()) {
    const ScenarioConfig cfg = preset(name);
    CHECK(cfg.name == name);
    CHECK(cfg.params.b_r() == doctest::Approx(6.25));
    CHECK(cfg.params.hbar == 1.0);
  }
  CHECK(std::norm(preset("fig1-bottom").prep.alpha0) == doctest::Approx(50.0));
  CHECK(preset("fig1-top").prep.atomic == AtomicPrep::plus_dressed);
  CHECK(preset("fig2-top").field);
  CHECK_FALSE(preset("fig2-top").sigma3);
  CHECK_THROWS_AS(preset("fig3"), ConfigError);
}

TEST_CASE("time grid") {
  ScenarioConfig cfg = preset("fig1-top");
  const ValidityWindow w = validity_window(cfg.params, cfg.prep);
  const std::vector<double> t = time_grid(cfg);
  CHECK(t.front() == 0.0);
  CHECK(t[1] == doctest::Approx(w.rabi_period / 40.0));
  CHECK(t.back() <= 3.0 * w.t_collapse + 1e-12);
  CHECK(t.back() + t[1] > 3.0 * w.t_collapse);

  cfg.t_max_collapse_units = 0.0;
  CHECK(time_grid(cfg).size() == 1);
  const ScenarioResult r = run_scenario(cfg);
  CHECK(r.find("sigma3", Provenance::oracle).size() == 1);
}

TEST_CASE("sampled collapse and Heisenberg windows for the figure presets") {
  for (const std::string& name : preset_names()) {
    const ScenarioConfig cfg = preset(name);
    const ValidityWindow w = validity_window(cfg.params, cfg.prep);
    CAPTURE(name);
    // half the revival time bounds every window we sample
    CHECK(3.0 * w.t_collapse <= std::numbers::pi * w.t_heisenberg);
  }
  const ScenarioConfig big = preset("fig1-bottom");
  const ValidityWindow w = validity_window(big.params, big.prep);
  CHECK(3.0 * w.t_collapse <= 0.5 * w.t_heisenberg);
}

TEST_CASE("scenario series") {
  ScenarioConfig cfg = preset("fig2-top");
  cfg.sigma3 = true;
  cfg.phase_space = true;
  cfg.quadrature.order = 24;
  const ScenarioResult r = run_scenario(cfg);
  CHECK(r.series.size() == 7);
  CHECK(r.observable("field").size() == 4);
  CHECK(r.n_max == 44);
  CHECK(r.action == doctest::Approx(4.5));

  const TimeSeries& oracle = r.find("field", Provenance::oracle);
  CHECK(std::abs(oracle.values[0] - 2.0) < 1e-12);
  CHECK(std::abs(r.find("field", Provenance::phase_space).values[0] - 2.0) < 1e-10);
  CHECK(r.find("sigma3", Provenance::oracle).values[0].real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(r.find("sigma3", Provenance::adiabatic_only), std::out_of_range);

  for (const TimeSeries& s : r.series) CHECK(s.t == oracle.t);
}

TEST_CASE("comparison") {
  const TimeSeries a = series({0, 1, 2, 3}, {1.0, 0.5, -0.5, -1.0});
  TimeSeries b = a;
  CHECK(compare(a, b).max_abs == 0.0);
  CHECK(compare(a, b).components.size() == 1);

  b.values[2] = -0.25;
  const ComparisonReport rep = compare(a, b);
  CHECK(rep.max_abs == doctest::Approx(0.25));
  CHECK(rep.component("re").span == doctest::Approx(2.0));
  CHECK(rep.normalized == doctest::Approx(0.125));

  const ComparisonReport early = compare(a, b, std::make_pair(0.0, 1.0));
  CHECK(early.max_abs == 0.0);
  CHECK(early.t.size() == 2);
  CHECK_THROWS(compare(a, b, std::make_pair(-1.0, 1.0)));
  CHECK_THROWS(compare(a, b, std::make_pair(2.0, 1.0)));

  TimeSeries shorter = a;
  shorter.t.pop_back();
  shorter.values.pop_back();
  CHECK_THROWS(compare(shorter, b));
  TimeSeries shifted = a;
  shifted.t[1] = 1.5;
  CHECK_THROWS(compare(shifted, b));

  TimeSeries c = a;
  c.values[1] = cplx(0.5, 0.1);
  const ComparisonReport cx = compare(a, c);
  CHECK(cx.components.size() == 2);
  CHECK(cx.component("im").max_abs == doctest::Approx(0.1));
  CHECK(cx.component("im").span == doctest::Approx(0.1));
  CHECK(cx.component("im").normalized == doctest::Approx(1.0));
  CHECK(compare(c, a).component("im").normalized == std::numeric_limits<double>::infinity());
}

TEST_CASE("collapse fit recovers a synthetic Gaussian envelope") {
  const double c2 = 0.15;
  const double rabi = 2 * std::numbers::pi / 0.9;
  const double t_c = 2.3;
  std::vector<double> t, y;
  for (int i = 0; i <= 40 * 8; ++i) {
    const double ti = i * 0.9 / 40.0;
    t.push_back(ti);
    y.push_back(c2 + (1 - c2) * std::cos(rabi * ti) * std::exp(-0.5 * ti * ti / (t_c * t_c)));
  }
  const CollapseFit fit = fit_collapse(t, y, c2);
  CHECK(fit.t_collapse == doctest::Approx(t_c).epsilon(1e-6));
  CHECK(fit.amplitude == doctest::Approx(1 - c2).epsilon(1e-6));
  CHECK(fit.extrema >= 5);

  const CollapseFit loose = fit_collapse(t, y);
  CHECK(loose.t_collapse == doctest::Approx(t_c).epsilon(0.05));

  std::vector<double> flat(t.size(), 1.0);
  CHECK_THROWS_AS(fit_collapse(t, flat), FitError);
}

TEST_CASE("collapse fit on closed-form and exact series") {
  const ScenarioResult r = run_scenario(preset("collapse-50"));
  const double t_c = r.window.t_collapse;
  const CollapseFit closed = fit_collapse(r.find("sigma3", Provenance::closed_form));
  CHECK(closed.t_collapse == doctest::Approx(t_c).epsilon(0.01));
  const CollapseFit oracle = fit_collapse(r.find("sigma3", Provenance::oracle));
  CHECK(oracle.t_collapse == doctest::Approx(t_c).epsilon(0.10));
}

TEST_CASE("power-law fit") {
  const std::vector<double> x{1.0, 0.25, 0.0625};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  const PowerLawFit f = fit_power_law(x, y);
  CHECK(f.exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.exponent_stderr < 1e-12);
  CHECK_THROWS_AS(fit_power_law(std::vector<double>{1, 2}, std::vector<double>{1, 2}), FitError);
  CHECK_THROWS_AS(fit_power_law(x, std::vector<double>{1, -1, 1}), FitError);
}

TEST_CASE("hbar scan needs three points") {
  const std::vector<double> two{1.0, 0.5};
  CHECK_THROWS_AS(hbar_scan(preset("collapse-50"), two), ConfigError);
  const std::vector<double> too_big{1.0, 0.5, 200.0};
  CHECK_THROWS_AS(hbar_scan(preset("collapse-50"), too_big), ConfigError);
}

TEST_CASE("doubles round-trip through their shortest form") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("CSV output") {
  const ScenarioConfig cfg = preset("fig1-top");
  const ScenarioResult r1 = run_scenario(cfg);
  const ScenarioResult r2 = run_scenario(cfg);
  const std::string text = to_csv(r1.series);
  CHECK(text == to_csv(r2.series));
  CHECK(text.rfind("t,observable,provenance,re,im\n", 0) == 0);

  const std::vector<TimeSeries> back = parse_csv(text);
  REQUIRE(back.size() == r1.series.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].key() == r1.series[k].key());
    CHECK(back[k].t == r1.series[k].t);
    CHECK(back[k].values == r1.series[k].values);
  }

  const std::filesystem::path path = std::filesystem::temp_directory_path() / "rabiflow_test.csv";
  write_csv(r1.series, path);
  CHECK(read_csv(path).size() == back.size());
  std::filesystem::remove(path);

  CHECK_THROWS_AS(to_csv(std::vector<TimeSeries>{}), std::invalid_argument);
  CHECK_THROWS(parse_csv("time,value\n1,2\n"));
  CHECK_THROWS(parse_csv("t,observable,provenance,re,im\n0,sigma3,oracle,1\n"));
  CHECK_THROWS(parse_csv("t,observable,provenance,re,im\n0,sigma3,guess,1,0\n"));
}

TEST_CASE("SVG output") {
  const ScenarioResult r = run_scenario(preset("fig2-top"));
  const std::string svg = to_svg(r.series, "fig2-top field");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK_THROWS(to_svg(std::vector<TimeSeries>{}, "empty"));
}

TEST_CASE("validation report on a reduced basis") {
  const ValidationReport rep = run_validation(32);
  CHECK(rep.ok());
  CHECK(rep.n_max == 32);
  bool has_info = false;
  for (const ValidationRow& row : rep.rows) has_info = has_info || !row.enforced;
  CHECK(has_info);
}
