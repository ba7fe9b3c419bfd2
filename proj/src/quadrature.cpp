#include "rabiflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rabiflow {

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 300) {
    throw std::invalid_argument("gauss_hermite: order must be in [1, 300]");
  }
  const int n = order;
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  GaussHermiteRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);

  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Asymptotic initial guesses for the largest roots, then refine from the
    // previously found ones.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];
    }

    double pp = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("gauss_hermite: Newton iteration did not converge");

    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / (pp * pp);
  }

  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

}  // namespace rabiflow
