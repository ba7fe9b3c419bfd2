#pragma once

#include <string_view>

#include <Eigen/Core>

#include "rabiflow/spectral.hpp"

namespace rabiflow {

enum class AtomicPrep { excited, plus_dressed };

std::string_view to_string(AtomicPrep prep);
AtomicPrep atomic_prep_from_string(std::string_view name);

/// Separable initial state: coherent field amplitude alpha0 times an atomic
/// pure state.
struct WavePacketPrep {
  cplx alpha0{0.0, 0.0};
  AtomicPrep atomic = AtomicPrep::excited;

  /// A0 = hbar (|alpha0|^2 + 1/2), the mean action of the coherent field.
  double action(double hbar) const { return hbar * (std::norm(alpha0) + 0.5); }
};

/// Atomic state vector in the (up, down) basis. The plus-dressed preparation
/// is the +1 eigenvector of s(A0) tau1 + c(A0) tau3.
Eigen::Vector2cd atomic_vector(const WavePacketPrep& prep, const ModelParams& params);

/// Projector w onto atomic_vector().
PolarizationMatrix atomic_density(const WavePacketPrep& prep, const ModelParams& params);

}  // namespace rabiflow
