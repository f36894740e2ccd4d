#pragma once

#include <cstdint>
#include <vector>

#include "accelkit/noise.hpp"
#include "accelkit/problems.hpp"
#include "accelkit/schedule.hpp"

namespace accel {

/// ((1-√κ)/(1+√κ))^{N-1}, or 0 when N > d or κ = 1.
struct RateBound {
  double kappa = 1.0;
  int N = 1;
  double value = 0.0;
  /// Norm of the mixing operator; 1-κ for β = 1 on a gradient step.
  double prefactor = 1.0;

  double bound() const { return prefactor * value; }
};

RateBound theorem1_rate(double kappa, int N, Eigen::Index d);

/// max over g ∈ [0, 1-κ] of |1 - β + β g|, the norm of (1-β)I + βG.
double mixing_prefactor(double kappa, double beta);

/// Paired clean and perturbed runs of one schedule from the same x0.
struct PerturbationLedger {
  Matrix E;        ///< [e_1, …, e_n]
  Matrix R_clean;  ///< columns y_{j-1} - x_j of the clean run
  Matrix R_noisy;
  std::vector<Matrix> L;  ///< L_1 … L_n
};

/// Runs `schedule` on g with and without `noise` for `steps` steps.
PerturbationLedger record_perturbation(const StepMap& g, const CombinationSchedule& schedule,
                                       const Vector& x0, int steps, const NoiseModel& noise);

struct PerturbationReport {
  Vector lhs;  ///< ‖P_i‖₂, P_i the first i columns of R_noisy - R_clean
  Vector rhs;  ///< ‖E_i‖₂ (1 + Σ_{j≤i} (1-κ)^j L̄_j)
  int violations = 0;
};

/// Throws StructuralError when the ledger's blocks do not pair up.
PerturbationReport perturbation_bound(const PerturbationLedger& ledger, double kappa);

/// The two terms of the accuracy bound for one window of plain gradient
/// steps with β = 1.
struct StabilitySplit {
  double acceleration = 0.0;  ///< (1-κ) C ‖∇f(x0)‖
  double stability = 0.0;     ///< (1+τ)/√N · Lσ/κ
};

/// `chebyshev_value` is C^{τ,κ}_{N-1}, or theorem1_rate for λ = 0.
StabilitySplit stability_split(double grad0_norm, double kappa, double tau, double sigma, double L,
                               int N, double chebyshev_value);

/// Noise plateau (1+τ) Lσ / (κ√N).
double noise_plateau(double kappa, double tau, double sigma, double L, int N);

/// Constants of the nonlinear perturbation ‖e‖ ≤ γ√N D^α.
struct PerturbationModel {
  double D = 1.0;
  double gamma = 0.0;
  double alpha = 2.0;
  double s = 0.0;  ///< τ(D) = D^{-s}
  double r = 0.0;  ///< λ(D) = D^{r}
};

struct ExponentSchedule {
  double s = 0.0;
  double r = 0.0;
  double tau(double D) const;
  double lambda(double D) const;
};

/// Requires α > 1, 0 < s < α-1 and 0 < r < 2(α-1); an exponent left at 0 is
/// treated as disabled and not checked.
ExponentSchedule schedule_exponents(const PerturbationModel& model);

/// Smallest γ with ‖e_k‖ ≤ γ D_k^α for all logged pairs.
double fit_gamma(const std::vector<double>& radii, const std::vector<double>& error_norms,
                 double alpha);

/// max ‖∇²f(y) - ∇²f(x)‖₂ / ‖y - x‖ over `pairs` random pairs with
/// ‖y - x‖ ≤ radius around `center`.
double sampled_hessian_lipschitz(const Problem& p, const Vector& center, double radius, int pairs,
                                 std::uint64_t seed);

}  // namespace accel
