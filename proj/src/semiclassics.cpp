#include "rabiflow/semiclassics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rabiflow/quadrature.hpp"

namespace rabiflow {

namespace {

constexpr cplx kI{0.0, 1.0};

void require(const WavePacketPrep& prep, AtomicPrep expected, const char* who) {
  if (prep.atomic != expected) {
    throw std::invalid_argument(std::string(who) + ": requires atomic preparation '" +
                                std::string(to_string(expected)) + "'");
  }
}

PolarizationMatrix projection_from(double c, double s, double sign) {
  return 0.5 * (pauli::identity() + sign * (s * pauli::tau1() + c * pauli::tau3()));
}

}  // namespace

double collapse_envelope(double t, const WavePacketPrep& prep, const ModelParams& params) {
  const double a0 = prep.action(params.hbar);
  const DressedFrame f = frequencies(a0, params);
  const double x = f.rabi_prime * t;
  return std::exp(-0.5 * params.hbar * a0 * x * x);
}

double sigma3_collapse(double t, const WavePacketPrep& prep, const ModelParams& params) {
  require(prep, AtomicPrep::excited, "sigma3_collapse");
  const DressedFrame f = frequencies(prep.action(params.hbar), params);
  return f.c * f.c + f.s * f.s * std::cos(f.rabi * t) * collapse_envelope(t, prep, params);
}

double sigma3_dressed(double t, const WavePacketPrep& prep, const ModelParams& params) {
  require(prep, AtomicPrep::plus_dressed, "sigma3_dressed");
  const double a0 = prep.action(params.hbar);
  const DressedFrame f = frequencies(a0, params);
  const double amplitude =
      params.hbar * f.rabi_prime * t * f.s * (a0 * f.theta_prime + 0.5 * f.s);
  return f.c - amplitude * std::sin(f.rabi * t) * collapse_envelope(t, prep, params);
}

FieldAmplitude field_amplitude_rotating(double t, const WavePacketPrep& prep,
                                        const ModelParams& params) {
  require(prep, AtomicPrep::excited, "field_amplitude_rotating");
  const double a0 = prep.action(params.hbar);
  const DressedFrame f = frequencies(a0, params);
  const double phase = f.phase_freq * t;
  const cplx adiabatic = (std::cos(phase) - kI * f.c * std::sin(phase)) * prep.alpha0;
  const cplx rabi = (params.hbar / (4.0 * a0)) * f.s * f.s *
                    (1.0 - std::exp(-kI * f.rabi * t) * collapse_envelope(t, prep, params)) *
                    prep.alpha0;
  return {adiabatic + rabi, adiabatic};
}

ValidityWindow validity_window(const ModelParams& params, const WavePacketPrep& prep) {
  const double a0 = prep.action(params.hbar);
  const DressedFrame f = frequencies(a0, params);
  ValidityWindow w{};
  w.t_collapse = 1.0 / (std::sqrt(params.hbar * a0) * f.rabi_prime);
  w.t_heisenberg = 1.0 / (params.hbar * f.rabi_prime);
  w.rabi_period = 2.0 * std::numbers::pi / f.rabi;
  return w;
}

double action_symbol(cplx beta, double hbar) { return std::norm(beta) + 0.5 * hbar; }

PolarizationMatrix quasiflow_sigma3(cplx beta, double t, const ModelParams& params) {
  const double b = action_symbol(beta, params.hbar);
  const Mixing m = mixing(b, params);
  const double rabi = 2.0 * dressed_energy(b, params) / params.hbar;
  const double c = m.c;
  const double s = m.s;
  return c * (s * pauli::tau1() + c * pauli::tau3()) -
         (s * c * pauli::tau1() - s * s * pauli::tau3()) * std::cos(rabi * t) +
         s * pauli::tau2() * std::sin(rabi * t);
}

PolarizationMatrix quasiflow_b(cplx beta, double t, const ModelParams& params) {
  const double hbar = params.hbar;
  const double b = action_symbol(beta, hbar);
  const Mixing m = mixing(b, params);
  const Mixing m_up = mixing(b + hbar, params);
  const double rabi = 2.0 * dressed_energy(b, params) / hbar;
  const double phase = phase_frequency_h(b, params);

  const PolarizationMatrix p_plus = projection_from(m.c, m.s, 1.0);
  const PolarizationMatrix p_minus = projection_from(m.c, m.s, -1.0);
  const PolarizationMatrix p_plus_up = projection_from(m_up.c, m_up.s, 1.0);
  const PolarizationMatrix p_minus_up = projection_from(m_up.c, m_up.s, -1.0);

  const PolarizationMatrix flow =
      (p_plus + p_minus * std::exp(-kI * rabi * t)) * p_plus_up * std::exp(-kI * phase * t) +
      (p_plus * std::exp(kI * rabi * t) + p_minus) * p_minus_up * std::exp(kI * phase * t);
  return flow * (std::exp(-kI * params.omega * t) * beta);
}

QuasiFlowSymbol sigma3_symbol(const ModelParams& params) {
  return [params](cplx beta, double t) { return quasiflow_sigma3(beta, t, params); };
}

QuasiFlowSymbol b_symbol(const ModelParams& params) {
  return [params](cplx beta, double t) { return quasiflow_b(beta, t, params); };
}

QuasiFlowSymbol constant_symbol(const PolarizationMatrix& m) {
  return [m](cplx, double) { return m; };
}

WignerEngine::WignerEngine(const PhaseSpaceQuadrature& quadrature, const WavePacketPrep& prep,
                           const ModelParams& params)
    : density_(atomic_density(prep, params)), center_(std::sqrt(params.hbar) * prep.alpha0) {
  // exp(-2|beta - beta0|^2 / hbar) = exp(-(u^2 + v^2)) with beta - beta0 = sqrt(hbar/2) (u + iv)
  const double scale = std::sqrt(0.5 * params.hbar);

  if (quadrature.kind == QuadratureKind::gauss_hermite) {
    if (quadrature.order < 2) {
      throw QuadratureError("WignerEngine: Gauss-Hermite order must be at least 2, got " +
                            std::to_string(quadrature.order));
    }
    const GaussHermiteRule rule = gauss_hermite(quadrature.order);
    points_.reserve(rule.nodes.size() * rule.nodes.size());
    weights_.reserve(points_.capacity());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        points_.push_back(center_ + scale * cplx(rule.nodes[i], rule.nodes[j]));
        weights_.push_back(rule.weights[i] * rule.weights[j] / std::numbers::pi);
      }
    }
  } else {
    if (!quadrature.seed) {
      throw QuadratureError("WignerEngine: Monte-Carlo integration requires an explicit seed");
    }
    if (quadrature.samples == 0) throw QuadratureError("WignerEngine: zero Monte-Carlo samples");
    std::mt19937_64 rng(*quadrature.seed);
    // density exp(-u^2)/sqrt(pi) has variance 1/2
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    points_.reserve(quadrature.samples);
    for (std::size_t i = 0; i < quadrature.samples; ++i) {
      const double u = normal(rng);
      const double v = normal(rng);
      points_.push_back(center_ + scale * cplx(u, v));
    }
    weights_.assign(quadrature.samples, 1.0 / double(quadrature.samples));
  }

  normalization_ = expectation(constant_symbol(pauli::identity()), 0.0).real();
  if (std::abs(normalization_ - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "WignerEngine: identity symbol integrates to " << normalization_ << " (not 1)";
    throw QuadratureError(msg.str());
  }
}

cplx WignerEngine::expectation(const QuasiFlowSymbol& symbol, double t) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    acc += weights_[i] * (symbol(points_[i], t) * density_).trace();
  }
  return acc;
}

double WignerEngine::integrate(const std::function<double(cplx)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) acc += weights_[i] * f(points_[i]);
  return acc;
}

cplx wigner_expectation(const QuasiFlowSymbol& symbol, const WavePacketPrep& prep, double t,
                        const PhaseSpaceQuadrature& quadrature, const ModelParams& params) {
  return WignerEngine(quadrature, prep, params).expectation(symbol, t);
}

}  // namespace rabiflow
