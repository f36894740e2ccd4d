#include "accelkit/optimizers.hpp"

#include <cmath>
#include <memory>
#include <optional>

namespace accel {

double default_step(Method method, const Problem& p) {
  switch (method) {
    case Method::gradient:
    case Method::nesterov:
      return 1.0 / smoothness(p);
    case Method::sgd:
    case Method::saga:
      return 1.0 / (3.0 * max_sample_smoothness(p));
  }
  return 1.0 / smoothness(p);
}

Vector gradient_step(const Problem& p, const Vector& y, double h) {
  if (!(h > 0.0)) throw ValidationError("gradient_step: step size must be > 0");
  return y - h * gradient(p, y);
}

double nesterov_momentum(double kappa) {
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw ValidationError("nesterov_momentum: kappa must lie in (0, 1]");
  }
  const double s = std::sqrt(kappa);
  return (1.0 - s) / (1.0 + s);
}

NesterovStep nesterov_step(const Problem& p, const Vector& x_prev, const Vector& x_curr,
                           double h, double kappa) {
  const double beta = nesterov_momentum(kappa);
  NesterovStep out;
  out.y = (1.0 + beta) * x_curr - beta * x_prev;
  out.x_next = gradient_step(p, out.y, h);
  return out;
}

Vector sgd_step(const Problem& p, const Vector& y, double h, CounterRng& rng, int batch) {
  if (!(h > 0.0)) throw ValidationError("sgd_step: step size must be > 0");
  if (batch < 1) throw ValidationError("sgd_step: batch must be >= 1");
  const auto n = static_cast<std::size_t>(sample_count(p));
  Vector g = Vector::Zero(y.size());
  for (int b = 0; b < batch; ++b) {
    g += sample_gradient(p, y, static_cast<Eigen::Index>(rng.index(n)));
  }
  return y - (h / batch) * g;
}

SagaState::SagaState(const Problem& p, const Vector& x0) {
  const Eigen::Index n = sample_count(p);
  stored_.resize(x0.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) stored_.col(j) = sample_gradient(p, x0, j);
  refresh();
}

void SagaState::replace(Eigen::Index j, const Vector& grad) {
  average_ += (grad - stored_.col(j)) / static_cast<double>(stored_.cols());
  stored_.col(j) = grad;
  if (++updates_ % stored_.cols() == 0) refresh();
}

double SagaState::drift() const {
  const Vector mean = stored_.rowwise().mean();
  return (average_ - mean).norm() / std::max(mean.norm(), 1e-300);
}

void SagaState::refresh() { average_ = stored_.rowwise().mean(); }

Vector saga_estimate(const Problem& p, const Vector& y, const SagaState& state, Eigen::Index j) {
  return sample_gradient(p, y, j) - state.stored().col(j) + state.average();
}

Vector saga_step(const Problem& p, const Vector& y, double h, SagaState& state, CounterRng& rng) {
  if (!(h > 0.0)) throw ValidationError("saga_step: step size must be > 0");
  const auto j = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(sample_count(p))));
  const Vector fresh = sample_gradient(p, y, j);
  const Vector x = y - h * (fresh - state.stored().col(j) + state.average());
  state.replace(j, fresh);
  return x;
}

CombinationSchedule schedule_of(Method method, int steps, double kappa) {
  if (steps < 0) throw ValidationError("schedule_of: steps must be >= 0");
  CombinationSchedule s;
  switch (method) {
    case Method::gradient:
      for (int i = 1; i <= steps; ++i) {
        Vector a = Vector::Zero(i);
        a(i - 1) = 1.0;
        s.append(std::move(a), Vector::Zero(i));
      }
      return s;
    case Method::nesterov: {
      const double beta = nesterov_momentum(kappa);
      for (int i = 1; i <= steps; ++i) {
        Vector a = Vector::Zero(i);
        if (i == 1) {
          a(0) = 1.0;
        } else {
          a(i - 1) = 1.0 + beta;
          a(i - 2) = -beta;
        }
        s.append(std::move(a), Vector::Zero(i));
      }
      return s;
    }
    case Method::sgd:
    case Method::saga:
      break;
  }
  throw UnsupportedError("schedule_of: stochastic methods have no fixed combination schedule");
}

StepMap make_step_map(Method method, const Problem& p, double h, std::uint64_t seed, int batch) {
  if (!(h > 0.0)) throw ValidationError("make_step_map: step size must be > 0");
  switch (method) {
    case Method::gradient:
    case Method::nesterov:
      return gradient_map(p, h);
    case Method::sgd: {
      auto rng = std::make_shared<CounterRng>(seed);
      return [&p, h, rng, batch](const Vector& y) { return sgd_step(p, y, h, *rng, batch); };
    }
    case Method::saga: {
      auto rng = std::make_shared<CounterRng>(seed);
      auto state = std::make_shared<std::optional<SagaState>>();
      return [&p, h, rng, state](const Vector& y) {
        if (!*state) state->emplace(p, y);
        return saga_step(p, y, h, **state, *rng);
      };
    }
  }
  throw ValidationError("make_step_map: unknown method");
}

Objective objective_of(const Problem& p) {
  return {[&p](const Vector& x) { return value(p, x); },
          [&p](const Vector& x) { return gradient(p, x); }};
}

Vector reference_solution(const Problem& p, double tol, int max_iters) {
  if (auto xs = known_minimizer(p); xs && std::holds_alternative<QuadraticProblem>(p)) return *xs;

  const double L = smoothness(p);
  const double mu = strong_convexity(p);
  const Eigen::Index d = dimension(p);
  Vector x = Vector::Zero(d);
  Vector x_prev = x;
  Vector y = x;
  double theta = 1.0;
  for (int k = 0; k < max_iters; ++k) {
    const Vector g = gradient(p, y);
    const Vector x_next = y - g / L;
    double beta;
    if (mu > 0.0) {
      beta = nesterov_momentum(mu / L);
    } else {
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      beta = (theta - 1.0) / theta_next;
      theta = theta_next;
    }
    x_prev = x;
    x = x_next;
    y = (1.0 + beta) * x - beta * x_prev;
    if (gradient(p, x).norm() <= tol) return x;
  }
  // Newton polish; the problems here are small enough for dense Hessians.
  for (int k = 0; k < 50; ++k) {
    const Vector g = gradient(p, x);
    if (g.norm() <= tol) break;
    x -= hessian(p, x).ldlt().solve(g);
  }
  return x;
}

}  // namespace accel
