#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rabiflow/prep.hpp"
#include "rabiflow/semiclassics.hpp"
#include "rabiflow/spectral.hpp"

namespace rabiflow {

/// Invalid or inconsistent scenario configuration. field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ModelParams params;
  WavePacketPrep prep;
  std::optional<double> n_mean;  // mean polariton number, mapped to |alpha0|^2

  double t_max_collapse_units = 3.0;
  int samples_per_rabi_period = 40;

  bool sigma3 = true;
  bool field = false;
  bool phase_space = false;
  PhaseSpaceQuadrature quadrature;

  std::optional<std::filesystem::path> output_dir;
};

/// Parses the sectioned key = value format:
///
///   [model]        hbar, g, omega, and exactly one of b_r | delta
///   [prep]         exactly one of n_mean | alpha0_re (+ alpha0_im); atomic
///   [time]         t_max_collapse_units, samples_per_rabi_period (>= 40)
///   [observables]  sigma3, field, phase_space
///   [quadrature]   rule (gauss-hermite | monte-carlo), order, samples, seed
///   [output]       dir
ScenarioConfig parse_config(std::string_view text, std::string name = "scenario");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Built-in figure scenarios: fig1-top, fig1-bottom, fig2-top, fig2-bottom,
/// plus collapse-50 (excited atom, N = 50).
ScenarioConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Figure convention: B_R = 6.25 hbar, lambda = hbar = 1, omega = 0, |alpha0|^2 = N.
ScenarioConfig figure_scenario(double n_mean, AtomicPrep atomic, double b_r = 6.25,
                               double hbar = 1.0);

}  // namespace rabiflow
