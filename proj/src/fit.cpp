#include "rabiflow/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace rabiflow {

namespace {

struct Line {
  double slope;
  double intercept;
  double slope_stderr;
  double rms;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("least squares: abscissae are all equal");
  Line line{};
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    ssr += r * r;
  }
  line.rms = std::sqrt(ssr / n);
  line.slope_stderr = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  return line;
}

}  // namespace

CollapseFit fit_collapse(std::span<const double> t, std::span<const double> y,
                         std::optional<double> baseline) {
  if (t.size() != y.size()) throw FitError("fit_collapse: time and value arrays differ in length");
  if (y.size() < 3) throw FitError("fit_collapse: series too short");

  double base = 0.0;
  if (baseline) {
    base = *baseline;
  } else {
    const std::size_t start = y.size() - std::max<std::size_t>(1, y.size() / 5);
    base = std::accumulate(y.begin() + static_cast<std::ptrdiff_t>(start), y.end(), 0.0) /
           double(y.size() - start);
  }

  std::vector<double> dev(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dev[i] = std::abs(y[i] - base);
  const double threshold = 0.05 * dev.front();

  std::vector<double> t2;
  std::vector<double> log_peak;
  std::vector<std::size_t> at;
  // t = 0 is an extremum of a cosine-like series
  if (dev[0] > dev[1]) {
    t2.push_back(t[0] * t[0]);
    log_peak.push_back(std::log(dev[0]));
    at.push_back(0);
  }
  for (std::size_t i = 1; i + 1 < dev.size(); ++i) {
    if (dev[i] >= dev[i - 1] && dev[i] > dev[i + 1] && dev[i] > threshold) {
      t2.push_back(t[i] * t[i]);
      log_peak.push_back(std::log(dev[i]));
      at.push_back(i);
    }
  }
  if (t2.size() < 5) {
    throw FitError("fit_collapse: need at least 5 extrema above 5% of the initial amplitude, found " +
                   std::to_string(t2.size()));
  }

  const Line line = least_squares(t2, log_peak);
  if (!(line.slope < 0.0)) throw FitError("fit_collapse: envelope is not decaying");

  // refine base + A exp(-w t^2/2) cos(W t + phi) on the samples up to the last extremum
  std::vector<double> gaps;
  for (std::size_t k = 1; k < at.size(); ++k) gaps.push_back(t[at[k]] - t[at[k - 1]]);
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double spacing = gaps[gaps.size() / 2];
  Eigen::Vector4d p(std::exp(line.intercept), -2.0 * line.slope, std::numbers::pi / spacing, 0.0);
  p(3) = -p(2) * t[at.front()] + (y[at.front()] < base ? std::numbers::pi : 0.0);
  const std::size_t n = at.back() + 1;

  auto residuals = [&](const Eigen::Vector4d& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(static_cast<Eigen::Index>(n));
    if (jac) jac->resize(static_cast<Eigen::Index>(n), 4);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double e = std::exp(-0.5 * q(1) * t[i] * t[i]);
      const double c = std::cos(q(2) * t[i] + q(3));
      const double s = std::sin(q(2) * t[i] + q(3));
      r(k) = y[i] - base - q(0) * e * c;
      if (jac) {
        (*jac)(k, 0) = e * c;
        (*jac)(k, 1) = -0.5 * q(0) * e * c * t[i] * t[i];
        (*jac)(k, 2) = -q(0) * e * s * t[i];
        (*jac)(k, 3) = -q(0) * e * s;
      }
    }
  };

  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(p, r, &jac);
  double cost = r.squaredNorm();
  double damping = 1e-3;
  for (int iter = 0; iter < 200 && damping < 1e12; ++iter) {
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d jtr = jac.transpose() * r;
    Eigen::Matrix4d lhs = jtj;
    lhs.diagonal() += damping * jtj.diagonal().cwiseMax(1e-300);
    const Eigen::Vector4d step = lhs.ldlt().solve(jtr);
    const Eigen::Vector4d trial = p + step;
    Eigen::VectorXd r_trial;
    residuals(trial, r_trial, nullptr);
    const double trial_cost = r_trial.squaredNorm();
    if (std::isfinite(trial_cost) && trial_cost < cost && trial(1) > 0.0) {
      const bool converged = cost - trial_cost <= 1e-15 * cost ||
                             step.cwiseAbs().maxCoeff() <= 1e-14 * p.cwiseAbs().maxCoeff();
      p = trial;
      cost = trial_cost;
      residuals(p, r, &jac);
      damping = std::max(damping / 10.0, 1e-12);
      if (converged) break;
    } else {
      damping *= 10.0;
    }
  }

  CollapseFit fit{};
  fit.t_collapse = 1.0 / std::sqrt(p(1));
  fit.width = std::sqrt(p(1));
  fit.amplitude = std::abs(p(0));
  fit.residual = std::sqrt(cost / double(n));
  fit.extrema = at.size();
  return fit;
}

CollapseFit fit_collapse(const TimeSeries& series, std::optional<double> baseline) {
  const std::vector<double> re = series.real();
  return fit_collapse(series.t, re, baseline);
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError("fit_power_law: size mismatch");
  if (x.size() < 3) throw FitError("fit_power_law: need at least 3 points");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw FitError("fit_power_law: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const Line line = least_squares(lx, ly);
  return {line.slope, line.slope_stderr, std::exp(line.intercept)};
}

}  // namespace rabiflow
