#include "accelkit/drivers.hpp"

#include <cmath>
#include <limits>

namespace accel {
namespace {

// Relative slack for comparing objective values that are equal in exact
// arithmetic.
double value_slack(double a, double b) {
  return 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b));
}

}  // namespace

void AccelConfig::validate() const {
  if (window < 1) throw ValidationError("accel: window must be >= 1");
  if (beta == 0.0 || !std::isfinite(beta)) throw ValidationError("accel: beta must be finite and != 0");
  if (!(reg.value >= 0.0)) {
    throw ValidationError(reg.kind == Regularization::Kind::lambda ? "accel: lambda must be >= 0"
                                                                   : "accel: tau must be >= 0");
  }
}

Coefficients coefficients_for(const AccelWindow& window, const Regularization& reg) {
  return reg.kind == Regularization::Kind::lambda ? rna_coefficients(window, reg.value)
                                                  : cna_coefficients(window, reg.value);
}

Coefficients window_coefficients(const AccelWindow& window, const AccelConfig& config,
                                 bool* fallback_uniform) {
  if (fallback_uniform) *fallback_uniform = false;
  try {
    return coefficients_for(window, config.schedule ? config.schedule(window) : config.reg);
  } catch (const DegenerateNormalizationError&) {
    if (fallback_uniform) *fallback_uniform = true;
    return rna_coefficients(window, std::numeric_limits<double>::infinity());
  }
}

OnlineStep online_step(AccelWindow& window, const StepMap& g, const Vector& y_last,
                       const AccelConfig& config) {
  OnlineStep out;
  out.x = g(y_last);
  window.push(out.x, y_last);
  out.coeffs = window_coefficients(window, config, &out.fallback_uniform);
  out.converged = out.coeffs.exact_combination;
  out.y_next = extrapolate(window, out.coeffs, config.beta);
  return out;
}

OfflineCycle offline_cycle(AccelWindow& window, const StepMap& g, const Vector& start,
                           const AccelConfig& config) {
  window.clear();
  Vector y = start;
  for (int k = 0; k < config.window; ++k) {
    Vector x = g(y);
    window.push(x, y);
    y = std::move(x);
  }
  OfflineCycle out;
  out.coeffs = window_coefficients(window, config, &out.fallback_uniform);
  out.y_extr = extrapolate(window, out.coeffs, config.beta);
  return out;
}

Vector offline_restart(const Vector& x0, const StepMap& g, const AccelConfig& config, int cycles) {
  config.validate();
  if (cycles < 1) throw ValidationError("offline_restart: cycles must be >= 1");
  AccelWindow window(x0.size(), config.window);
  Vector y = x0;
  for (int c = 0; c < cycles; ++c) y = offline_cycle(window, g, y, config).y_extr;
  return y;
}

MomentumSchedule::MomentumSchedule(double L, double mu) {
  if (!(L > 0.0)) throw ValidationError("MomentumSchedule: L must be > 0");
  if (!(mu >= 0.0 && mu <= L)) throw ValidationError("MomentumSchedule: need 0 <= mu <= L");
  constant_ = mu > 0.0;
  if (constant_) {
    const double s = std::sqrt(mu / L);
    beta_ = (1.0 - s) / (1.0 + s);
  }
}

double MomentumSchedule::next() {
  if (constant_) return beta_;
  const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta_ * theta_));
  const double beta = (theta_ - 1.0) / theta_next;
  theta_ = theta_next;
  return beta;
}

AdaptiveStep adaptive_step(AdaptiveState& state, const Objective& f, double L,
                           AccelWindow& window, const AccelConfig& config) {
  if (!(L > 0.0)) throw ValidationError("adaptive_step: L must be > 0");
  AdaptiveStep out;
  const double beta = state.momentum.next();
  out.beta_nesterov = beta;

  const double f_y = f.value(state.y);
  const Vector grad_y = f.gradient(state.y);
  Vector x_next = state.y - grad_y / L;
  const double decrease = f_y - grad_y.squaredNorm() / (2.0 * L);

  window.push(x_next, state.y);
  out.coeffs = window_coefficients(window, config, &out.fallback_uniform);
  Vector y_extr = extrapolate(window, out.coeffs, config.beta);

  const Vector z = (y_extr + beta * state.x) / (1.0 + beta);
  const double threshold =
      config.adaptive_rule == AdaptiveRule::descent
          ? decrease
          : f.value(state.x) - f.gradient(state.x).squaredNorm() / (2.0 * L);
  const double f_z = f.value(z);
  double f_accepted;
  if (std::isfinite(f_z) && f_z <= threshold) {
    out.rna_branch = true;
    state.y = std::move(y_extr);
    state.x = z;
    f_accepted = f_z;
  } else {
    f_accepted = f.value(x_next);
    state.y = (1.0 + beta) * x_next - beta * state.x;
    state.x = std::move(x_next);
  }
  out.descent_ok = f_accepted <= decrease + value_slack(f_y, f_accepted);
  return out;
}

}  // namespace accel
