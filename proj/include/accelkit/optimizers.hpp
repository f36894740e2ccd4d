#pragma once

#include <cstdint>

#include "accelkit/drivers.hpp"
#include "accelkit/problems.hpp"
#include "accelkit/rng.hpp"
#include "accelkit/schedule.hpp"

namespace accel {

enum class Method { gradient, nesterov, sgd, saga };

/// 1/L for deterministic methods, 1/(3 L_max) for SGD and SAGA.
double default_step(Method method, const Problem& p);

/// x = y - h ∇f(y).
Vector gradient_step(const Problem& p, const Vector& y, double h);

/// β = (1 - √κ) / (1 + √κ).
double nesterov_momentum(double kappa);

struct NesterovStep {
  Vector x_next;
  Vector y;
};

/// Momentum first, then the gradient step: y = (1+β) x_curr - β x_prev and
/// x_next = y - h ∇f(y). The pair (x_next, y) can be pushed into an
/// acceleration window as is.
NesterovStep nesterov_step(const Problem& p, const Vector& x_prev, const Vector& x_curr,
                           double h, double kappa);

/// x = y - h · mean of `batch` sample gradients, indices drawn with
/// replacement from rng.
Vector sgd_step(const Problem& p, const Vector& y, double h, CounterRng& rng, int batch = 1);

/// Per-sample gradient table for SAGA.
class SagaState {
 public:
  SagaState(const Problem& p, const Vector& x0);

  const Matrix& stored() const { return stored_; }
  const Vector& average() const { return average_; }
  /// Replaces the stored gradient of sample j and updates the average.
  void replace(Eigen::Index j, const Vector& grad);
  /// ‖average - mean(stored)‖ / max(‖mean(stored)‖, tiny).
  double drift() const;
  /// Recomputes the average from the table.
  void refresh();

 private:
  Matrix stored_;  ///< d×n, column j is the last gradient seen for sample j
  Vector average_;
  std::int64_t updates_ = 0;
};

/// x = y - h (∇f_j(y) - stored_j + average) for a uniformly drawn j; the table
/// is updated in place and its average re-derived exactly every n updates.
Vector saga_step(const Problem& p, const Vector& y, double h, SagaState& state, CounterRng& rng);

/// Unbiased SAGA gradient estimate for sample j, without updating the table.
Vector saga_estimate(const Problem& p, const Vector& y, const SagaState& state, Eigen::Index j);

/// Weights placing the method in the multistep class. Gradient descent uses
/// α^{(i)} = e_i, Nesterov α^{(i)} = (1+β) e_i - β e_{i-1} with α^{(1)} = [1].
/// Stochastic methods have no fixed schedule (UnsupportedError).
CombinationSchedule schedule_of(Method method, int steps, double kappa = 1.0);

/// Step maps for the drivers. Stochastic maps own their RNG stream, so a map
/// built twice from the same seed replays the same trajectory. The maps refer
/// to `p`, which must outlive them.
StepMap make_step_map(Method method, const Problem& p, double h, std::uint64_t seed = 0,
                      int batch = 1);

/// Value and gradient of `p` for the adaptive driver; refers to `p`.
Objective objective_of(const Problem& p);

/// Minimizer to gradient norm `tol` by Nesterov's method with a Newton polish
/// if the first-order run stalls. Quadratics return x* directly.
Vector reference_solution(const Problem& p, double tol = 1e-12, int max_iters = 100000);

}  // namespace accel
