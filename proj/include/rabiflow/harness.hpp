#pragma once

// Scenario execution, oracle-vs-semiclassics comparison, hbar scans and the
// operator-identity validation suite.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rabiflow/config.hpp"
#include "rabiflow/fit.hpp"
#include "rabiflow/semiclassics.hpp"
#include "rabiflow/series.hpp"

namespace rabiflow {

/// t_i = i * dt with dt = rabi_period / samples_per_rabi_period, up to
/// t_max_collapse_units * t_collapse inclusive.
std::vector<double> time_grid(const ScenarioConfig& config);

struct ScenarioResult {
  ScenarioConfig config;
  ValidityWindow window;
  double action;  // A0
  int n_max;
  std::vector<TimeSeries> series;

  const TimeSeries& find(std::string_view observable, Provenance provenance) const;
  std::vector<TimeSeries> observable(std::string_view name) const;
};

/// Oracle and closed-form series for every requested observable, plus the
/// phase-space series and the adiabatic-only field component on request.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Exact <sigma3>(t) and <a>(t) e^{i omega t} on the given times.
TimeSeries oracle_sigma3(const ModelParams& params, const WavePacketPrep& prep,
                         std::span<const double> times);
TimeSeries oracle_field(const ModelParams& params, const WavePacketPrep& prep,
                        std::span<const double> times);

struct QuadratureDeviation {
  std::string component;  // "re" or "im"
  double max_abs;
  double span;            // max - min of the reference series on the window
  double normalized;      // max_abs / span
};

struct ComparisonReport {
  double max_abs = 0.0;
  double normalized = 0.0;  // worst over components with nonzero span
  std::pair<double, double> window;
  std::vector<double> t;
  std::vector<cplx> residuals;  // a - b on the window
  std::vector<QuadratureDeviation> components;

  const QuadratureDeviation& component(std::string_view name) const;
};

/// Compares a against the reference b. Both must share the same time grid.
/// The imaginary component is included when either series has one.
ComparisonReport compare(const TimeSeries& a, const TimeSeries& b,
                         std::optional<std::pair<double, double>> window = std::nullopt);

struct ScanPoint {
  double hbar;
  double alpha0_sq;
  double collapse_periods;         // oracle t_c in Rabi periods
  double collapse_closed_periods;  // 1/(sqrt(hbar A0) Omega') in Rabi periods
  double dressed_peak;             // max |sigma3_dressed - c(A0)|
  double field_rel_error;          // max |Re(closed - oracle)| / |alpha0|
};

struct ScalingReport {
  double action;
  double b_r;
  double lambda;
  std::vector<ScanPoint> points;
  PowerLawFit collapse;
  PowerLawFit dressed_peak;
  PowerLawFit field_error;
};

/// Holds A0, B_R and lambda of `base` fixed and repeats the comparison at each
/// hbar (alpha0 and delta recomputed per point). Needs at least three points.
ScalingReport hbar_scan(const ScenarioConfig& base, std::span<const double> hbars);

struct ValidationRow {
  std::string suite;
  double b_r;
  std::string identity;
  double residual;
  double tolerance;
  bool enforced;
  bool pass() const { return !enforced || residual <= tolerance; }
};

struct ValidationReport {
  int n_max;
  std::vector<ValidationRow> rows;
  double seconds;
  bool ok() const;
};

/// Normal form, polariton algebra and Heisenberg flow checks at hbar = g = 1,
/// omega = 0 for each B_R.
ValidationReport run_validation(int n_max = 128, std::vector<double> b_r_values = {0.0, 6.25},
                                double tolerance = 1e-10);

}  // namespace rabiflow
