#include "accelkit/schedule.hpp"

#include <cmath>
#include <string>

namespace accel {

void CombinationSchedule::append(Vector a, Vector b) {
  alpha.push_back(std::move(a));
  beta.push_back(std::move(b));
}

void CombinationSchedule::validate() const {
  if (alpha.size() != beta.size()) {
    throw ClassViolationError("schedule: alpha and beta step counts differ");
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k + 1);
    const std::string step = "schedule step " + std::to_string(i);
    if (alpha[k].size() != i || beta[k].size() != i) {
      throw ClassViolationError(step + ": weight vectors must have length " + std::to_string(i));
    }
    const double total = alpha[k].sum() + beta[k].sum();
    if (std::abs(total - 1.0) > 1e-10) {
      throw ClassViolationError(step + ": weights sum to " + std::to_string(total) + ", not 1");
    }
    if (alpha[k](i - 1) == 0.0) {
      throw ClassViolationError(step + ": leading weight alpha_i is zero");
    }
  }
}

Matrix build_L_matrix(const CombinationSchedule& schedule, int i) {
  if (i < 1) throw ValidationError("build_L_matrix: i must be >= 1");
  if (schedule.steps() < i - 1) {
    throw ValidationError("build_L_matrix: schedule has " + std::to_string(schedule.steps()) +
                          " steps, need " + std::to_string(i - 1));
  }
  Matrix L = Matrix::Ones(1, 1);
  for (int k = 1; k < i; ++k) {
    const Vector& a = schedule.alpha[k - 1];
    const Vector& b = schedule.beta[k - 1];
    if (a.size() != k || b.size() != k) {
      throw ClassViolationError("build_L_matrix: step " + std::to_string(k) +
                                " has wrong weight length");
    }
    if (a(k - 1) == 0.0) {
      throw ClassViolationError("build_L_matrix: alpha_" + std::to_string(k) +
                                " is zero at step " + std::to_string(k));
    }
    // y_k over [x_0, …, x_k]: the β-part routes through the columns of L_k
    // (y_{j-1} = [x_0..x_{k-1}] L_k e_j), the α-part hits x_1..x_k directly.
    Vector column = Vector::Zero(k + 1);
    column.head(k) = L * b;
    column.segment(1, k) += a;

    Matrix grown = Matrix::Zero(k + 1, k + 1);
    grown.topLeftCorner(k, k) = L;
    grown.col(k) = column;
    L = std::move(grown);
  }
  return L;
}

ScheduleRun run_schedule(const StepMap& g, const CombinationSchedule& schedule,
                         const Vector& x0, int steps) {
  if (steps < 1) throw ValidationError("run_schedule: steps must be >= 1");
  if (schedule.steps() < steps) {
    throw ValidationError("run_schedule: schedule shorter than requested run");
  }
  schedule.validate();
  const Eigen::Index d = x0.size();
  ScheduleRun run;
  run.X.resize(d, steps);
  run.Y.resize(d, steps);
  Vector y = x0;
  for (int i = 1; i <= steps; ++i) {
    run.Y.col(i - 1) = y;
    run.X.col(i - 1) = g(y);
    const Vector& a = schedule.alpha[i - 1];
    const Vector& b = schedule.beta[i - 1];
    y = run.X.leftCols(i) * a + run.Y.leftCols(i) * b;
  }
  run.y_last = y;
  return run;
}

}  // namespace accel
