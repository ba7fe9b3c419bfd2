#include "rabiflow/spectral.hpp"

#include <cmath>
#include <string>

namespace rabiflow {

ModelParams ModelParams::from_action_scale(double hbar, double lambda, double b_r,
                                           double omega) {
  if (!(hbar > 0.0) || !(lambda > 0.0) || !(b_r >= 0.0)) {
    throw SpectralError("from_action_scale: need hbar > 0, lambda > 0, B_R >= 0");
  }
  ModelParams p;
  p.hbar = hbar;
  p.g = lambda / std::sqrt(hbar);
  p.omega = omega;
  // delta = lambda sqrt(B_R) and delta = hbar (nu - omega) / 2
  p.nu = omega + 2.0 * lambda * std::sqrt(b_r) / hbar;
  return p;
}

double ModelParams::lambda() const { return std::sqrt(hbar) * g; }

double ModelParams::b_r() const {
  const double ratio = delta() / lambda();
  return ratio * ratio;
}

Scales derive_scales(const ModelParams& params) {
  if (!(params.hbar > 0.0)) {
    throw SpectralError("derive_scales: hbar must be positive");
  }
  if (!(params.g > 0.0)) {
    throw SpectralError("derive_scales: g must be positive (B_R undefined at g = 0)");
  }
  if (params.nu < params.omega) {
    throw SpectralError("derive_scales: negative detuning nu < omega is not supported");
  }
  return {params.delta(), params.lambda(), params.b_r()};
}

Mixing mixing(double action, const ModelParams& params) {
  const double b_r = derive_scales(params).b_r;
  if (action < 0.0) {
    throw SpectralError("mixing: action must be non-negative, got " + std::to_string(action));
  }
  if (action == 0.0 && b_r == 0.0) {
    throw SpectralError("mixing: B = B_R = 0 is indeterminate");
  }
  const double total = action + b_r;
  return {std::sqrt(b_r / total), std::sqrt(action / total)};
}

double dressed_energy(double action, const ModelParams& params) {
  const Scales sc = derive_scales(params);
  if (action < 0.0) throw SpectralError("dressed_energy: negative action");
  return sc.lambda * std::sqrt(action + sc.b_r);
}

double phase_frequency_h(double action, const ModelParams& params) {
  const Scales sc = derive_scales(params);
  if (action < 0.0) throw SpectralError("phase_frequency_h: negative action");
  // eps(B+h) - eps(B) = lambda h / (sqrt(B+h+B_R) + sqrt(B+B_R))
  return sc.lambda /
         (std::sqrt(action + params.hbar + sc.b_r) + std::sqrt(action + sc.b_r));
}

DressedFrame frequencies(double action, const ModelParams& params) {
  const Scales sc = derive_scales(params);
  const Mixing m = mixing(action, params);
  if (m.s == 0.0) {
    throw SpectralError("frequencies: theta' undefined at s = 0 (B = 0)");
  }
  const double total = action + sc.b_r;
  const double root = std::sqrt(total);

  DressedFrame f{};
  f.action = action;
  f.c = m.c;
  f.s = m.s;
  f.eps = sc.lambda * root;
  f.eps_plus = params.omega * action + f.eps;
  f.eps_minus = params.omega * action - f.eps;
  f.rabi = 2.0 * f.eps / params.hbar;
  f.rabi_prime = sc.lambda / (params.hbar * root);
  f.phase_freq_h = phase_frequency_h(action, params);
  f.phase_freq = sc.lambda / (2.0 * root);
  f.theta_prime = m.c / (2.0 * m.s * total);
  return f;
}

namespace pauli {

PolarizationMatrix identity() { return PolarizationMatrix::Identity(); }

PolarizationMatrix tau1() {
  PolarizationMatrix m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

PolarizationMatrix tau2() {
  const cplx i{0.0, 1.0};
  PolarizationMatrix m;
  m << 0.0, -i, i, 0.0;
  return m;
}

PolarizationMatrix tau3() {
  PolarizationMatrix m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace pauli

PolarizationMatrix dressed_projection(double action, Dressed sign,
                                      const ModelParams& params) {
  const Mixing m = mixing(action, params);
  const double sgn = sign == Dressed::plus ? 1.0 : -1.0;
  return 0.5 * (pauli::identity() + sgn * (m.s * pauli::tau1() + m.c * pauli::tau3()));
}

}  // namespace rabiflow
