#include "rabiflow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace rabiflow {

namespace pt = boost::property_tree;

namespace {

template <typename T>
std::optional<T> get(const pt::ptree& tree, const std::string& key) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node) return std::nullopt;
  try {
    return node->get_value<T>();
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError(key, "cannot parse value '" + node->data() + "'");
  }
}

bool get_flag(const pt::ptree& tree, const std::string& key, bool fallback) {
  const auto raw = get<std::string>(tree, key);
  if (!raw) return fallback;
  if (*raw == "true" || *raw == "1" || *raw == "yes" || *raw == "on") return true;
  if (*raw == "false" || *raw == "0" || *raw == "no" || *raw == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + *raw + "'");
}

double positive(const pt::ptree& tree, const std::string& key, double fallback) {
  const double v = get<double>(tree, key).value_or(fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be positive and finite");
  return v;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::string name) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("file", e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  ScenarioConfig cfg;
  cfg.name = std::move(name);

  // [model]
  const double hbar = positive(tree, "model.hbar", 1.0);
  const double g = positive(tree, "model.g", 1.0);
  const double omega = get<double>(tree, "model.omega").value_or(0.0);
  const auto b_r = get<double>(tree, "model.b_r");
  const auto delta = get<double>(tree, "model.delta");
  if (b_r.has_value() == delta.has_value()) {
    throw ConfigError("model.b_r", "give exactly one of b_r or delta");
  }
  cfg.params.hbar = hbar;
  cfg.params.g = g;
  cfg.params.omega = omega;
  if (b_r) {
    if (*b_r < 0.0) throw ConfigError("model.b_r", "must be non-negative");
    cfg.params.nu = omega + 2.0 * std::sqrt(hbar) * g * std::sqrt(*b_r) / hbar;
  } else {
    if (*delta < 0.0) throw ConfigError("model.delta", "negative detuning is not supported");
    cfg.params.nu = omega + 2.0 * *delta / hbar;
  }

  // [prep]
  const auto n_mean = get<double>(tree, "prep.n_mean");
  const auto re = get<double>(tree, "prep.alpha0_re");
  const auto im = get<double>(tree, "prep.alpha0_im");
  const bool has_alpha = re.has_value() || im.has_value();
  if (n_mean.has_value() == has_alpha) {
    throw ConfigError("prep.n_mean", "give exactly one of n_mean or alpha0_re/alpha0_im");
  }
  if (n_mean) {
    if (!(*n_mean > 0.0)) throw ConfigError("prep.n_mean", "must be positive");
    cfg.n_mean = *n_mean;
    cfg.prep.alpha0 = std::sqrt(*n_mean);
  } else {
    cfg.prep.alpha0 = cplx(re.value_or(0.0), im.value_or(0.0));
    if (std::norm(cfg.prep.alpha0) == 0.0) {
      throw ConfigError("prep.alpha0_re", "|alpha0| must be positive");
    }
  }
  try {
    cfg.prep.atomic = atomic_prep_from_string(get<std::string>(tree, "prep.atomic").value_or("excited"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("prep.atomic", e.what());
  }

  // [time]
  cfg.t_max_collapse_units = get<double>(tree, "time.t_max_collapse_units").value_or(3.0);
  if (!(cfg.t_max_collapse_units >= 0.0)) {
    throw ConfigError("time.t_max_collapse_units", "must be non-negative");
  }
  cfg.samples_per_rabi_period = get<int>(tree, "time.samples_per_rabi_period").value_or(40);
  if (cfg.samples_per_rabi_period < 40) {
    throw ConfigError("time.samples_per_rabi_period", "must be at least 40");
  }

  // [observables]
  cfg.sigma3 = get_flag(tree, "observables.sigma3", true);
  cfg.field = get_flag(tree, "observables.field", false);
  cfg.phase_space = get_flag(tree, "observables.phase_space", false);
  if (!cfg.sigma3 && !cfg.field) {
    throw ConfigError("observables", "request at least one of sigma3 or field");
  }
  if (cfg.field && cfg.prep.atomic != AtomicPrep::excited) {
    throw ConfigError("observables.field", "the field closed form requires atomic = excited");
  }

  // [quadrature]
  const std::string rule = get<std::string>(tree, "quadrature.rule").value_or("gauss-hermite");
  if (rule == "gauss-hermite") {
    cfg.quadrature.kind = QuadratureKind::gauss_hermite;
  } else if (rule == "monte-carlo") {
    cfg.quadrature.kind = QuadratureKind::monte_carlo;
  } else {
    throw ConfigError("quadrature.rule", "expected gauss-hermite or monte-carlo, got '" + rule + "'");
  }
  cfg.quadrature.order = get<int>(tree, "quadrature.order").value_or(40);
  if (cfg.quadrature.order < 2 || cfg.quadrature.order > 300) {
    throw ConfigError("quadrature.order", "must be in [2, 300]");
  }
  const auto samples = get<long long>(tree, "quadrature.samples");
  if (samples) {
    if (*samples <= 0) throw ConfigError("quadrature.samples", "must be positive");
    cfg.quadrature.samples = static_cast<std::size_t>(*samples);
  }
  if (const auto seed = get<unsigned long long>(tree, "quadrature.seed")) cfg.quadrature.seed = *seed;
  if (cfg.phase_space && cfg.quadrature.kind == QuadratureKind::monte_carlo && !cfg.quadrature.seed) {
    throw ConfigError("quadrature.seed", "Monte-Carlo integration requires an explicit seed");
  }

  // [output]
  if (const auto dir = get<std::string>(tree, "output.dir")) cfg.output_dir = *dir;

  try {
    derive_scales(cfg.params);
  } catch (const SpectralError& e) {
    throw ConfigError("model", e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.stem().string());
}

ScenarioConfig figure_scenario(double n_mean, AtomicPrep atomic, double b_r, double hbar) {
  ScenarioConfig cfg;
  cfg.params = ModelParams::from_action_scale(hbar, 1.0, b_r);
  cfg.n_mean = n_mean;
  cfg.prep.alpha0 = std::sqrt(n_mean);
  cfg.prep.atomic = atomic;
  return cfg;
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig cfg;
  if (name == "fig1-top") {
    cfg = figure_scenario(8.0, AtomicPrep::plus_dressed);
  } else if (name == "fig1-bottom") {
    cfg = figure_scenario(50.0, AtomicPrep::plus_dressed);
  } else if (name == "fig2-top") {
    cfg = figure_scenario(4.0, AtomicPrep::excited);
    cfg.sigma3 = false;
    cfg.field = true;
  } else if (name == "fig2-bottom") {
    cfg = figure_scenario(8.0, AtomicPrep::excited);
    cfg.sigma3 = false;
    cfg.field = true;
  } else if (name == "collapse-50") {
    cfg = figure_scenario(50.0, AtomicPrep::excited);
  } else {
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
  }
  cfg.name = std::string(name);
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"fig1-top", "fig1-bottom", "fig2-top", "fig2-bottom", "collapse-50"};
}

}  // namespace rabiflow
