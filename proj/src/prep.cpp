#include "rabiflow/prep.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabiflow {

std::string_view to_string(AtomicPrep prep) {
  switch (prep) {
    case AtomicPrep::excited:
      return "excited";
    case AtomicPrep::plus_dressed:
      return "plus-dressed";
  }
  return "unknown";
}

AtomicPrep atomic_prep_from_string(std::string_view name) {
  if (name == "excited") return AtomicPrep::excited;
  if (name == "plus-dressed") return AtomicPrep::plus_dressed;
  throw std::invalid_argument("unknown atomic preparation '" + std::string(name) +
                              "' (expected excited | plus-dressed)");
}

Eigen::Vector2cd atomic_vector(const WavePacketPrep& prep, const ModelParams& params) {
  if (prep.atomic == AtomicPrep::excited) return {1.0, 0.0};
  const Mixing m = mixing(prep.action(params.hbar), params);
  // half-angle of the mixing angle; sin(theta/2) = s / (2 cos(theta/2))
  const double cos_half = std::sqrt(0.5 * (1.0 + m.c));
  return {cos_half, m.s / (2.0 * cos_half)};
}

PolarizationMatrix atomic_density(const WavePacketPrep& prep, const ModelParams& params) {
  const Eigen::Vector2cd v = atomic_vector(prep, params);
  return v * v.adjoint();
}

}  // namespace rabiflow
