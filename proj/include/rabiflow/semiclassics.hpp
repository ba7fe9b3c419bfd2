#pragma once

// Semiclassical predictions for wave-packet Rabi dynamics: closed-form
// expectation trajectories and a matrix-valued phase-space expectation engine
// driven by the leading-order (classical substitution) quasi-flow symbols.
//
// Phase space is parameterized by the polariton amplitude beta = sqrt(hbar)
// alpha. The action symbol is |beta|^2 + hbar/2 and the initial Wigner
// operator is 2 w exp(-2 |beta - beta0|^2 / hbar).

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rabiflow/prep.hpp"
#include "rabiflow/spectral.hpp"

namespace rabiflow {

// ---------------------------------------------------------------------------
// Closed forms

/// Collapse of the polarization for an excited atom:
///   c^2 + s^2 cos(Omega t) exp(-hbar A0 (Omega' t)^2 / 2), all at A0.
double sigma3_collapse(double t, const WavePacketPrep& prep, const ModelParams& params);

/// Polarization for an atom prepared in P+(A0):
///   c - hbar Omega' t s (A0 theta' + s/2) sin(Omega t) exp(-hbar A0 (Omega' t)^2 / 2).
double sigma3_dressed(double t, const WavePacketPrep& prep, const ModelParams& params);

struct FieldAmplitude {
  cplx total;      // <a_t> e^{i omega t}
  cplx adiabatic;  // (cos(w~ t) - i c sin(w~ t)) alpha0
};

/// Field amplitude in the frame rotating at omega, for an excited atom. The
/// Rabi term is (hbar / 4 A0) s^2 (1 - e^{-i Omega t} envelope) alpha0 added
/// to the adiabatic part.
FieldAmplitude field_amplitude_rotating(double t, const WavePacketPrep& prep,
                                        const ModelParams& params);

/// Gaussian collapse envelope exp(-hbar A0 (Omega'(A0) t)^2 / 2).
double collapse_envelope(double t, const WavePacketPrep& prep, const ModelParams& params);

struct ValidityWindow {
  double t_collapse;    // 1 / (sqrt(hbar A0) Omega'(A0))
  double t_heisenberg;  // 1 / (hbar Omega'(A0))
  double rabi_period;   // 2 pi / Omega(A0)

  double collapse_in_periods() const { return t_collapse / rabi_period; }
  double heisenberg_in_periods() const { return t_heisenberg / rabi_period; }
};

ValidityWindow validity_window(const ModelParams& params, const WavePacketPrep& prep);

// ---------------------------------------------------------------------------
// Quasi-flow symbols

/// Weyl symbol of B = b b^+.
double action_symbol(cplx beta, double hbar);

/// Leading-order symbol of tau3(t):
///   c (s tau1 + c tau3) - (s c tau1 - s^2 tau3) cos(Omega t) + s tau2 sin(Omega t)
PolarizationMatrix quasiflow_sigma3(cplx beta, double t, const ModelParams& params);

/// Leading-order symbol of b(t), including the e^{-i omega t} factor and the
/// trailing beta.
PolarizationMatrix quasiflow_b(cplx beta, double t, const ModelParams& params);

using QuasiFlowSymbol = std::function<PolarizationMatrix(cplx beta, double t)>;

QuasiFlowSymbol sigma3_symbol(const ModelParams& params);
QuasiFlowSymbol b_symbol(const ModelParams& params);
QuasiFlowSymbol constant_symbol(const PolarizationMatrix& m);

// ---------------------------------------------------------------------------
// Phase-space integration

enum class QuadratureKind { gauss_hermite, monte_carlo };

struct PhaseSpaceQuadrature {
  QuadratureKind kind = QuadratureKind::gauss_hermite;
  int order = 40;                        // per axis, Gauss-Hermite
  std::size_t samples = 1'000'000;       // Monte-Carlo
  std::optional<std::uint64_t> seed;     // required for Monte-Carlo
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expectation values  integral tr[L(beta, t) W(beta)] dmu(beta)  with the
/// measure normalized so that the identity symbol integrates to one. The
/// constructor runs the normalization self-check and throws QuadratureError
/// when it fails.
class WignerEngine {
 public:
  WignerEngine(const PhaseSpaceQuadrature& quadrature, const WavePacketPrep& prep,
               const ModelParams& params);

  cplx expectation(const QuasiFlowSymbol& symbol, double t) const;

  /// Integral of the scalar function f(beta) against the Gaussian weight.
  double integrate(const std::function<double(cplx)>& f) const;

  double normalization() const { return normalization_; }
  std::size_t size() const { return points_.size(); }
  cplx center() const { return center_; }

 private:
  std::vector<cplx> points_;
  std::vector<double> weights_;
  PolarizationMatrix density_;
  cplx center_;
  double normalization_;
};

/// One-shot helper around WignerEngine.
cplx wigner_expectation(const QuasiFlowSymbol& symbol, const WavePacketPrep& prep, double t,
                        const PhaseSpaceQuadrature& quadrature, const ModelParams& params);

}  // namespace rabiflow
