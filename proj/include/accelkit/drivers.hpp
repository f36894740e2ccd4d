#pragma once

#include <functional>

#include "accelkit/coefficients.hpp"
#include "accelkit/schedule.hpp"

namespace accel {

enum class AccelMode { offline_restart, online, adaptive };

/// Either a Tikhonov weight λ (RNA) or a norm slack τ (CNA).
struct Regularization {
  enum class Kind { lambda, tau };
  Kind kind = Kind::lambda;
  double value = 0.0;

  static Regularization lambda(double v) { return {Kind::lambda, v}; }
  static Regularization tau(double v) { return {Kind::tau, v}; }
};

/// Acceptance test of the adaptive scheme for the candidate z.
enum class AdaptiveRule {
  /// f(z) ≤ f(x_i) - ‖∇f(x_i)‖²/(2L). The default.
  iterate,
  /// f(z) ≤ f(y_i) - ‖∇f(y_i)‖²/(2L), the sufficient-decrease condition of
  /// the generic Nesterov step, so every accepted z keeps it.
  descent,
};

struct AccelConfig {
  int window = 10;
  double beta = 1.0;
  Regularization reg = Regularization::lambda(1e-8);
  AccelMode mode = AccelMode::online;
  /// When set, replaces `reg` with a rule evaluated on the window after each
  /// push (e.g. τ or λ as a power of an iterate-distance estimate).
  std::function<Regularization(const AccelWindow&)> schedule;
  AdaptiveRule adaptive_rule = AdaptiveRule::iterate;

  /// Throws ValidationError unless window >= 1, beta != 0 and the
  /// regularization value is >= 0.
  void validate() const;
};

/// RNA or CNA coefficients over the window, depending on reg.kind.
Coefficients coefficients_for(const AccelWindow& window, const Regularization& reg);

/// Coefficients for the window under `config`. If normalization degenerates
/// the weights fall back to uniform and `*fallback_uniform` is set.
Coefficients window_coefficients(const AccelWindow& window, const AccelConfig& config,
                                 bool* fallback_uniform = nullptr);

struct OnlineStep {
  Vector x;       ///< g(y_last)
  Vector y_next;  ///< extrapolated iterate fed to the next step
  Coefficients coeffs;
  /// The solve found R c ≈ 0 (rank-deficient residuals with λ = 0).
  bool converged = false;
  /// 1ᵀz vanished and uniform weights were used instead.
  bool fallback_uniform = false;
};

/// x = g(y_last), push (x, y_last), extrapolate. The oldest pair is evicted
/// when the window is full.
OnlineStep online_step(AccelWindow& window, const StepMap& g, const Vector& y_last,
                       const AccelConfig& config);

/// Runs config.window plain steps of g from `start` into a cleared window and
/// extrapolates once.
struct OfflineCycle {
  Vector y_extr;
  Coefficients coeffs;
  bool fallback_uniform = false;
};
OfflineCycle offline_cycle(AccelWindow& window, const StepMap& g, const Vector& start,
                           const AccelConfig& config);

/// `cycles` restarts of offline_cycle, each from the previous extrapolate.
Vector offline_restart(const Vector& x0, const StepMap& g, const AccelConfig& config, int cycles);

/// Nesterov momentum sequence. With μ > 0 the constant (1-√κ)/(1+√κ);
/// with μ = 0 the smooth-convex schedule θ_{k+1} = (1 + √(1 + 4θ_k²))/2,
/// β_k = (θ_k - 1)/θ_{k+1}, θ_0 = 1.
class MomentumSchedule {
 public:
  MomentumSchedule(double L, double mu);
  /// β for the current step, then advances.
  double next();
  bool constant() const { return constant_; }

 private:
  bool constant_;
  double beta_ = 0.0;
  double theta_ = 1.0;
};

struct Objective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

struct AdaptiveState {
  Vector x;  ///< x_i, last accepted point
  Vector y;  ///< y_i, point where the next gradient is taken
  MomentumSchedule momentum;

  AdaptiveState(const Vector& x0, double L, double mu) : x(x0), y(x0), momentum(L, mu) {}
};

struct AdaptiveStep {
  bool rna_branch = false;
  /// f(x_{i+1}) ≤ f(y_i) - ‖∇f(y_i)‖²/(2L) for the accepted x_{i+1} (z on the
  /// RNA branch). The gradient step always meets it; z need not.
  bool descent_ok = true;
  double beta_nesterov = 0.0;
  Coefficients coeffs;
  bool fallback_uniform = false;
};

/// One step of the adaptive RNA + Nesterov scheme.
///
///   x_{i+1} = y_i - ∇f(y_i)/L,  push (x_{i+1}, y_i), y^extr = RNA(window)
///   z = (y^extr + β x_i)/(1 + β)
///   f(z) ≤ f(x_i) - ‖∇f(x_i)‖²/(2L)  →  y_{i+1} = y^extr, x_i ← z
///     (with AdaptiveRule::descent: f(z) ≤ f(y_i) - ‖∇f(y_i)‖²/(2L))
///   otherwise                        →  y_{i+1} = (1+β) x_{i+1} - β x_i, x_i ← x_{i+1}
///
/// On the RNA branch z takes the place of the gradient step, so that
/// (1+β) z - β x_i = y^extr stays a Nesterov combination.
AdaptiveStep adaptive_step(AdaptiveState& state, const Objective& f, double L,
                           AccelWindow& window, const AccelConfig& config);

}  // namespace accel
