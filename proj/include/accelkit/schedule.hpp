#pragma once

#include <functional>
#include <vector>

#include "accelkit/linalg.hpp"

namespace accel {

using StepMap = std::function<Vector(const Vector&)>;

/// Combination weights of a multistep method
///
///   x_i = g(y_{i-1}),   y_i = Σ_{j=1..i} α_j^{(i)} x_j + β_j^{(i)} y_{j-1},
///
/// stored 1-based: alpha[i-1] and beta[i-1] have length i. Consistency
/// requires 1ᵀ(α^{(i)} + β^{(i)}) = 1 and α_i^{(i)} ≠ 0.
struct CombinationSchedule {
  std::vector<Vector> alpha;
  std::vector<Vector> beta;

  int steps() const { return static_cast<int>(alpha.size()); }
  void append(Vector a, Vector b);
  /// Throws ClassViolationError on the first inconsistent step.
  void validate() const;
};

/// The i×i upper-triangular matrix with [y_0, …, y_{i-1}] = [x_0, …, x_{i-1}] L_i
/// (y_0 = x_0, so L_1 = [1]). Columns sum to one and the diagonal holds the
/// leading weights α_k^{(k)}. Requires i - 1 schedule steps.
Matrix build_L_matrix(const CombinationSchedule& schedule, int i);

/// Iterates of the schedule applied to g from x0.
struct ScheduleRun {
  Matrix X;  ///< [x_1, …, x_n]
  Matrix Y;  ///< [y_0, …, y_{n-1}]
  Vector y_last;  ///< y_n
};

ScheduleRun run_schedule(const StepMap& g, const CombinationSchedule& schedule,
                         const Vector& x0, int steps);

}  // namespace accel
