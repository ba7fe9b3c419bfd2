#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "rabiflow/series.hpp"

namespace rabiflow {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CollapseFit {
  double t_collapse;  // envelope A exp(-(t/t_c)^2 / 2)
  double width;       // Gaussian damping rate 1/t_c
  double amplitude;
  double residual;    // rms of the model fit
  std::size_t extrema;
};

/// Fits baseline + A exp(-(t/t_c)^2 / 2) cos(W t + phi). The local extrema of
/// |y - baseline| above 5% of the initial deviation (at least five) seed the
/// envelope by a log-linear fit; a Levenberg-Marquardt pass over the samples
/// up to the last such extremum then refines all four parameters. When no
/// baseline is given, the mean over the last 20% of the series is used.
CollapseFit fit_collapse(std::span<const double> t, std::span<const double> y,
                         std::optional<double> baseline = std::nullopt);
CollapseFit fit_collapse(const TimeSeries& series, std::optional<double> baseline = std::nullopt);

struct PowerLawFit {
  double exponent;
  double exponent_stderr;
  double prefactor;
};

/// Least-squares fit of log y = log A + p log x.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace rabiflow
