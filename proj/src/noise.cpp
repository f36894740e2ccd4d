#include "accelkit/noise.hpp"

#include <cmath>

#include "accelkit/rng.hpp"

namespace accel {

Vector noise_draw(const NoiseModel& noise, Eigen::Index d, std::uint64_t k) {
  if (!(noise.sigma >= 0.0)) throw ValidationError("noise: sigma must be >= 0");
  Vector e(d);
  if (noise.sigma == 0.0) return e.setZero();
  CounterRng rng(noise.seed, 2 * k * static_cast<std::uint64_t>(d));
  const double scale = noise.sigma / std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < d; ++j) e(j) = scale * rng.normal();
  return e;
}

Matrix NoiseLog::as_matrix() const {
  if (draws.empty()) return Matrix();
  Matrix E(draws.front().size(), static_cast<Eigen::Index>(draws.size()));
  for (std::size_t k = 0; k < draws.size(); ++k) E.col(static_cast<Eigen::Index>(k)) = draws[k];
  return E;
}

Vector perturbed_step(const StepMap& g, const NoiseModel& noise, const Vector& y,
                      std::uint64_t k, NoiseLog* log) {
  Vector x = g(y);
  Vector e = noise_draw(noise, x.size(), k);
  x += e;
  if (log) log->draws.push_back(std::move(e));
  return x;
}

StepMap perturbed_step_map(StepMap g, const NoiseModel& noise, std::shared_ptr<NoiseLog> log) {
  if (!(noise.sigma >= 0.0)) throw ValidationError("noise: sigma must be >= 0");
  if (noise.sigma == 0.0 && !log) return g;
  auto counter = std::make_shared<std::uint64_t>(0);
  return [g = std::move(g), noise, log, counter](const Vector& y) {
    return perturbed_step(g, noise, y, (*counter)++, log.get());
  };
}

}  // namespace accel
