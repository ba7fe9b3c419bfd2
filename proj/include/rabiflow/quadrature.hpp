#pragma once

#include <vector>

namespace rabiflow {

/// Gauss-Hermite rule for weight exp(-x^2) on the real line.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes by Newton iteration on the orthonormal Hermite recurrence, sorted
/// ascending. Valid for 1 <= order <= 300.
GaussHermiteRule gauss_hermite(int order);

}  // namespace rabiflow
