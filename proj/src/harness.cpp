#include "rabiflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

#include "rabiflow/fock.hpp"

namespace rabiflow {

namespace {

constexpr cplx kI{0.0, 1.0};

TimeSeries make_series(std::string observable, Provenance provenance, std::span<const double> times) {
  TimeSeries s;
  s.observable = std::move(observable);
  s.provenance = provenance;
  s.t.assign(times.begin(), times.end());
  s.values.reserve(times.size());
  return s;
}

template <typename Measure>
TimeSeries oracle_series(const ModelParams& params, const WavePacketPrep& prep,
                         std::span<const double> times, std::string observable, Measure measure) {
  const fock::Basis basis = fock::Basis::for_coherent(std::abs(prep.alpha0));
  const fock::SectorDecomposition sectors(basis, params);
  const fock::AtomFieldState initial = fock::prepare_state(prep, basis, params);
  TimeSeries s = make_series(std::move(observable), Provenance::oracle, times);
  for (double t : times) s.values.push_back(measure(fock::propagate(initial, t, sectors), t));
  return s;
}

// f(t) at every time, split across hardware threads
std::vector<cplx> evaluate_parallel(std::span<const double> times,
                                    const std::function<cplx(double)>& f) {
  std::vector<cplx> out(times.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, times.size()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < times.size(); i += workers) out[i] = f(times[i]);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

std::vector<double> uniform_grid(double dt, double t_max) {
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) times[i] = double(i) * dt;
  return times;
}

}  // namespace

std::vector<double> time_grid(const ScenarioConfig& config) {
  const ValidityWindow w = validity_window(config.params, config.prep);
  return uniform_grid(w.rabi_period / config.samples_per_rabi_period,
                      config.t_max_collapse_units * w.t_collapse);
}

TimeSeries oracle_sigma3(const ModelParams& params, const WavePacketPrep& prep,
                         std::span<const double> times) {
  return oracle_series(params, prep, times, "sigma3", [](const fock::AtomFieldState& psi, double) {
    return cplx(fock::mean_sigma3(psi), 0.0);
  });
}

TimeSeries oracle_field(const ModelParams& params, const WavePacketPrep& prep,
                        std::span<const double> times) {
  return oracle_series(params, prep, times, "field",
                       [&params](const fock::AtomFieldState& psi, double t) {
                         return fock::mean_field(psi) * std::exp(kI * params.omega * t);
                       });
}

const TimeSeries& ScenarioResult::find(std::string_view observable_name,
                                       Provenance provenance) const {
  for (const TimeSeries& s : series) {
    if (s.observable == observable_name && s.provenance == provenance) return s;
  }
  throw std::out_of_range("no series " + std::string(observable_name) + "/" +
                          std::string(to_string(provenance)));
}

std::vector<TimeSeries> ScenarioResult::observable(std::string_view name) const {
  std::vector<TimeSeries> out;
  for (const TimeSeries& s : series) {
    if (s.observable == name) out.push_back(s);
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  const ModelParams& params = config.params;
  const WavePacketPrep& prep = config.prep;
  derive_scales(params);
  if (config.field && prep.atomic != AtomicPrep::excited) {
    throw ConfigError("observables.field", "the field closed form requires atomic = excited");
  }

  ScenarioResult result;
  result.config = config;
  result.window = validity_window(params, prep);
  result.action = prep.action(params.hbar);
  result.n_max = fock::Basis::required_cutoff(std::abs(prep.alpha0));
  const std::vector<double> times = time_grid(config);

  std::optional<WignerEngine> engine;
  if (config.phase_space) engine.emplace(config.quadrature, prep, params);

  if (config.sigma3) {
    result.series.push_back(oracle_sigma3(params, prep, times));
    TimeSeries closed = make_series("sigma3", Provenance::closed_form, times);
    for (double t : times) {
      closed.values.emplace_back(prep.atomic == AtomicPrep::excited
                                     ? sigma3_collapse(t, prep, params)
                                     : sigma3_dressed(t, prep, params),
                                 0.0);
    }
    result.series.push_back(std::move(closed));
    if (engine) {
      const QuasiFlowSymbol symbol = sigma3_symbol(params);
      TimeSeries ps = make_series("sigma3", Provenance::phase_space, times);
      ps.values = evaluate_parallel(times, [&](double t) {
        return cplx(engine->expectation(symbol, t).real(), 0.0);
      });
      result.series.push_back(std::move(ps));
    }
  }

  if (config.field) {
    result.series.push_back(oracle_field(params, prep, times));
    TimeSeries closed = make_series("field", Provenance::closed_form, times);
    TimeSeries adiabatic = make_series("field", Provenance::adiabatic_only, times);
    for (double t : times) {
      const FieldAmplitude f = field_amplitude_rotating(t, prep, params);
      closed.values.push_back(f.total);
      adiabatic.values.push_back(f.adiabatic);
    }
    result.series.push_back(std::move(closed));
    result.series.push_back(std::move(adiabatic));
    if (engine) {
      // <b> = sqrt(hbar) <a> at leading order
      const QuasiFlowSymbol symbol = b_symbol(params);
      TimeSeries ps = make_series("field", Provenance::phase_space, times);
      ps.values = evaluate_parallel(times, [&](double t) {
        return engine->expectation(symbol, t) * std::exp(kI * params.omega * t) /
               std::sqrt(params.hbar);
      });
      result.series.push_back(std::move(ps));
    }
  }
  return result;
}

const QuadratureDeviation& ComparisonReport::component(std::string_view name) const {
  for (const QuadratureDeviation& c : components) {
    if (c.component == name) return c;
  }
  throw std::out_of_range("comparison has no component " + std::string(name));
}

ComparisonReport compare(const TimeSeries& a, const TimeSeries& b,
                         std::optional<std::pair<double, double>> window) {
  if (a.t.size() != b.t.size()) throw std::invalid_argument("compare: time grids differ in length");
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    if (std::abs(a.t[i] - b.t[i]) > 1e-12 * std::max(1.0, std::abs(b.t[i]))) {
      throw std::invalid_argument("compare: time grids differ at sample " + std::to_string(i));
    }
  }
  if (a.t.empty()) throw std::invalid_argument("compare: empty series");

  ComparisonReport report;
  report.window = window.value_or(std::make_pair(b.t.front(), b.t.back()));
  if (report.window.first > report.window.second || report.window.first < b.t.front() ||
      report.window.second > b.t.back()) {
    throw std::invalid_argument("compare: window lies outside the simulated range");
  }

  bool complex_valued = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.values[i].imag() != 0.0 || b.values[i].imag() != 0.0) complex_valued = true;
  }

  struct Acc {
    double max_abs = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  } re, im;

  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = b.t[i];
    if (t < report.window.first || t > report.window.second) continue;
    const cplx d = a.values[i] - b.values[i];
    report.t.push_back(t);
    report.residuals.push_back(d);
    report.max_abs = std::max(report.max_abs, complex_valued ? std::abs(d) : std::abs(d.real()));
    re.max_abs = std::max(re.max_abs, std::abs(d.real()));
    re.lo = std::min(re.lo, b.values[i].real());
    re.hi = std::max(re.hi, b.values[i].real());
    im.max_abs = std::max(im.max_abs, std::abs(d.imag()));
    im.lo = std::min(im.lo, b.values[i].imag());
    im.hi = std::max(im.hi, b.values[i].imag());
  }

  auto finish = [](const char* name, const Acc& acc) {
    QuadratureDeviation q{name, acc.max_abs, acc.hi - acc.lo, 0.0};
    if (q.span > 0.0) {
      q.normalized = q.max_abs / q.span;
    } else {
      q.normalized = q.max_abs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return q;
  };
  report.components.push_back(finish("re", re));
  if (complex_valued) report.components.push_back(finish("im", im));

  report.normalized = 0.0;
  for (const QuadratureDeviation& q : report.components) {
    report.normalized = std::max(report.normalized, q.normalized);
  }
  return report;
}

ScalingReport hbar_scan(const ScenarioConfig& base, std::span<const double> hbars) {
  if (hbars.size() < 3) throw ConfigError("hbar", "an hbar scan needs at least 3 points");
  const Scales sc = derive_scales(base.params);

  ScalingReport report;
  report.action = base.prep.action(base.params.hbar);
  report.b_r = sc.b_r;
  report.lambda = sc.lambda;
  const double phase = std::arg(base.prep.alpha0);

  auto run_point = [&](double hbar) {
    if (!(hbar > 0.0)) throw ConfigError("hbar", "scan values must be positive");
    const double alpha_sq = report.action / hbar - 0.5;
    if (!(alpha_sq > 0.0)) throw ConfigError("hbar", "hbar too large for the base action");
    const ModelParams params =
        ModelParams::from_action_scale(hbar, sc.lambda, sc.b_r, base.params.omega);
    WavePacketPrep excited{std::polar(std::sqrt(alpha_sq), phase), AtomicPrep::excited};
    WavePacketPrep dressed{excited.alpha0, AtomicPrep::plus_dressed};

    ScenarioConfig cfg = base;
    cfg.params = params;
    cfg.prep = excited;
    const std::vector<double> times = time_grid(cfg);
    const ValidityWindow w = validity_window(params, excited);

    ScanPoint p{};
    p.hbar = hbar;
    p.alpha0_sq = alpha_sq;
    p.collapse_periods = fit_collapse(oracle_sigma3(params, excited, times)).t_collapse / w.rabi_period;
    p.collapse_closed_periods = w.collapse_in_periods();

    const double c = mixing(report.action, params).c;
    for (double t : times) {
      p.dressed_peak = std::max(p.dressed_peak, std::abs(sigma3_dressed(t, dressed, params) - c));
    }

    const TimeSeries oracle = oracle_field(params, excited, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const cplx closed = field_amplitude_rotating(times[i], excited, params).total;
      p.field_rel_error =
          std::max(p.field_rel_error, std::abs(closed.real() - oracle.values[i].real()));
    }
    p.field_rel_error /= std::abs(excited.alpha0);
    return p;
  };

  std::vector<std::future<ScanPoint>> jobs;
  for (double hbar : hbars) jobs.push_back(std::async(std::launch::async, run_point, hbar));
  for (auto& job : jobs) report.points.push_back(job.get());

  std::vector<double> h, tc, peak, err;
  for (const ScanPoint& p : report.points) {
    h.push_back(p.hbar);
    tc.push_back(p.collapse_periods);
    peak.push_back(p.dressed_peak);
    err.push_back(p.field_rel_error);
  }
  report.collapse = fit_power_law(h, tc);
  report.dressed_peak = fit_power_law(h, peak);
  report.field_error = fit_power_law(h, err);
  return report;
}

bool ValidationReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass(); });
}

ValidationReport run_validation(int n_max, std::vector<double> b_r_values, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  ValidationReport report;
  report.n_max = n_max;

  for (double b_r : b_r_values) {
    const ModelParams params = ModelParams::from_action_scale(1.0, 1.0, b_r);
    const fock::Basis basis(n_max);
    const fock::OperatorSet ops = fock::build_operators(basis, params);

    const fock::NormalFormReport nf = fock::verify_normal_form(ops, basis, params);
    report.rows.push_back(
        {"normal-form", b_r, "|H - normal form| / |H|", nf.relative_residual(), 1e-12, true});
    report.rows.push_back(
        {"normal-form", b_r, "dark-state discrepancy (excluded)", nf.dark_state_discrepancy, 0.0, false});

    for (const fock::IdentityResidual& r : fock::verify_polariton_algebra(ops, basis, params)) {
      report.rows.push_back({"algebra", b_r, r.name, r.residual, tolerance, r.enforced});
    }

    // three Rabi periods of the middle sector
    const double mid = 0.5 * n_max * params.hbar;
    const double period = std::numbers::pi * params.hbar / dressed_energy(mid, params);
    std::vector<double> times;
    for (int j = 0; j <= 12; ++j) times.push_back(3.0 * period * j / 12.0);
    const fock::FlowReport flows = fock::verify_heisenberg_flows(ops, basis, params, times, tolerance);
    report.rows.push_back({"flow", b_r, "tau3(t)", flows.tau3_residual, tolerance, true});
    report.rows.push_back({"flow", b_r, "b(t)", flows.b_residual, tolerance, true});
  }

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace rabiflow
