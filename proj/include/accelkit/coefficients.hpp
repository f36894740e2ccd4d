#pragma once

#include <limits>

#include "accelkit/window.hpp"

namespace accel {

/// Combination weights over the current window, oldest first.
struct Coefficients {
  Vector c;
  /// ‖R c‖₂, evaluated through the Gram matrix.
  double residual_norm = 0.0;
  /// ‖c‖₂.
  double norm = 0.0;
  /// True when the unregularized solve found a sum-one direction in the
  /// numerical null space of RᵀR, i.e. R c ≈ 0. Online drivers report this as
  /// convergence.
  bool exact_combination = false;

  Eigen::Index size() const { return c.size(); }
};

/// Eigenvalues of RᵀR at or below this fraction of the largest are treated
/// as zero in the unregularized solve.
inline constexpr double kGramRankCutoff = 1e-12;
/// Singular values of R at or below this fraction of the largest are treated
/// as zero when the window (not just its Gram) is available.
inline constexpr double kResidualRankCutoff = 1e-13;

/// Regularized coefficients c = z / 1ᵀz with (RᵀR + λ‖R‖₂² I) z = 1.
///
/// λ = 0 is Anderson mixing. A singular Gram is resolved by the λ → 0⁺ limit:
/// if some null direction v of RᵀR has 1ᵀv ≠ 0 the result is the minimum-norm
/// sum-one vector of the null space (R c = 0); otherwise the pseudo-inverse
/// solution restricted to the range. λ = +inf returns uniform weights. The
/// window overload resolves λ = 0 from the SVD of R, which keeps directions
/// the Gram cannot resolve.
Coefficients rna_coefficients(const Matrix& gram, double lambda);
Coefficients rna_coefficients(const AccelWindow& window, double lambda);

/// (1 + τ) / √N, the coefficient-norm radius of the constrained problem.
double cna_norm_bound(Eigen::Index n, double tau);

/// λ ≥ 0 such that ‖c^λ‖₂ = (1 + τ)/√N, by doubling then bisection.
/// Returns 0 when the unregularized solution already satisfies the bound and
/// +inf when τ = 0 (only uniform weights are feasible).
double lambda_from_tau(const Matrix& gram, double tau);
double lambda_from_tau(const AccelWindow& window, double tau);

/// Minimizer of ‖R c‖ over {1ᵀc = 1, ‖c‖₂ ≤ (1 + τ)/√N}.
Coefficients cna_coefficients(const Matrix& gram, double tau);
Coefficients cna_coefficients(const AccelWindow& window, double tau);

/// τ such that (1 + τ)/√N = ‖c‖₂, floored at 0.
double tau_from_lambda(const Coefficients& coeffs);

/// (Y - βR) c with R = Y - X, i.e. ((1 - β) Y + β X) c.
Vector extrapolate(const AccelWindow& window, const Coefficients& coeffs, double beta);

}  // namespace accel
