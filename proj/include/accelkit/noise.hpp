#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "accelkit/schedule.hpp"

namespace accel {

/// Zero-mean isotropic Gaussian noise added to each step.
///
/// σ is the total standard deviation of one draw (E‖e‖² = σ²), so each of
/// the d coordinates has variance σ²/d. Draw k occupies positions
/// [2kd, 2(k+1)d) of the CounterRng stream `seed`, two uniforms per
/// coordinate, which makes every draw addressable on its own.
struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// The k-th noise vector (0-based) of the model in dimension d.
Vector noise_draw(const NoiseModel& noise, Eigen::Index d, std::uint64_t k);

/// Draws actually added, in call order.
struct NoiseLog {
  std::vector<Vector> draws;

  /// [e_1, …, e_n] as columns.
  Matrix as_matrix() const;
};

/// x̃ = g(y) + e_k, with e_k appended to `log` when given.
Vector perturbed_step(const StepMap& g, const NoiseModel& noise, const Vector& y,
                      std::uint64_t k, NoiseLog* log = nullptr);

/// Step map adding draw 0, 1, 2, … on successive calls. σ = 0 returns g
/// unchanged.
StepMap perturbed_step_map(StepMap g, const NoiseModel& noise,
                           std::shared_ptr<NoiseLog> log = nullptr);

}  // namespace accel
