#pragma once

// Scalar spectral functions of the polariton action B and the 2x2 dressed
// polarization algebra of the rotating-wave Jaynes-Cummings model.

#include <complex>
#include <stdexcept>

#include <Eigen/Core>

namespace rabiflow {

using cplx = std::complex<double>;

/// Operator on the two-dimensional internal polarization space.
/// Basis order is (up, down) with tau3 = diag(+1, -1).
using PolarizationMatrix = Eigen::Matrix2cd;

class SpectralError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Physical constants of the model. Only the four primitive constants are
/// stored; delta, lambda and B_R are always recomputed from them.
struct ModelParams {
  double hbar = 1.0;
  double g = 1.0;      // dipole coupling
  double omega = 0.0;  // field mode frequency
  double nu = 0.0;     // atomic transition frequency

  /// Builds parameters from the action scale B_R and lambda = sqrt(hbar) g,
  /// which is the natural way to hold the dynamics fixed while varying hbar.
  static ModelParams from_action_scale(double hbar, double lambda, double b_r,
                                       double omega = 0.0);

  double delta() const { return 0.5 * hbar * (nu - omega); }
  double lambda() const;
  double b_r() const;
};

struct Scales {
  double delta;
  double lambda;
  double b_r;
};

/// delta = hbar (nu - omega) / 2, lambda = sqrt(hbar) g, B_R = (delta/lambda)^2.
/// Rejects hbar <= 0, g <= 0 and nu < omega.
Scales derive_scales(const ModelParams& params);

struct Mixing {
  double c;
  double s;
};

/// c = sqrt(B_R/(B+B_R)), s = sqrt(B/(B+B_R)).
Mixing mixing(double action, const ModelParams& params);

/// Every scalar function of the action the dynamics needs, evaluated at one B.
struct DressedFrame {
  double action;
  double c;
  double s;
  double eps;             // lambda sqrt(B + B_R)
  double eps_plus;        // omega B + eps
  double eps_minus;       // omega B - eps
  double rabi;            // Omega = 2 eps / hbar
  double rabi_prime;      // dOmega/dB
  double phase_freq_h;    // (eps(B + hbar) - eps(B)) / hbar
  double phase_freq;      // eps'(B)
  double theta_prime;     // d/dB arccos(c)
};

/// Throws SpectralError at B = 0 with B_R > 0, where theta' is undefined.
DressedFrame frequencies(double action, const ModelParams& params);

/// eps(B), usable at B = 0 (the vacuum sector).
double dressed_energy(double action, const ModelParams& params);

/// (eps(B + hbar) - eps(B)) / hbar in a cancellation-free form.
double phase_frequency_h(double action, const ModelParams& params);

namespace pauli {
PolarizationMatrix identity();
PolarizationMatrix tau1();
PolarizationMatrix tau2();
PolarizationMatrix tau3();
}  // namespace pauli

enum class Dressed { plus, minus };

/// P(+/-) = (1 +/- (s tau1 + c tau3)) / 2.
PolarizationMatrix dressed_projection(double action, Dressed sign,
                                      const ModelParams& params);

}  // namespace rabiflow
