#pragma once

#include <string>

#include "accelkit/linalg.hpp"

namespace accel {

/// Near-optimal polynomial for
///
///   min_p max_{x ∈ [0, upper]} |p(x)|   s.t.  p(1) = 1,  ‖p‖₂ ≤ (1+τ)/√(N+1)
///
/// with ‖p‖₂ the ℓ2 norm of the monomial coefficients.
struct ChebyshevCertificate {
  int degree = 0;
  double upper = 0.0;  ///< right end of the interval
  double tau = 0.0;
  Vector coefficients;  ///< monomial basis, constant term first
  /// max |p| over the solve grid and a 10× refinement of it. p is feasible,
  /// so this bounds the exact constrained optimum from above.
  double value = 1.0;
  /// Duality gap bound of the discretized problem.
  double gap = 0.0;
  int grid_size = 0;
  bool converged = true;
};

/// Solves the discretized problem on `grid_size` equispaced points of
/// [0, upper] with a log-barrier interior-point method. τ = +inf drops the
/// norm constraint; τ = 0 leaves only the uniform polynomial.
ChebyshevCertificate constrained_chebyshev(int degree, double upper, double tau,
                                           int grid_size = 2000);

/// Value of the monomial-basis polynomial at x (Horner).
double poly_eval(const Vector& coefficients, double x);

/// Unconstrained optimum on [0, upper], 1 / T_N(1 + 2(1 - upper)/upper) with
/// T_N the Chebyshev polynomial of the first kind.
double chebyshev_optimum(int degree, double upper);

/// CSV with header `degree,upper,tau,value,gap`.
std::string certificate_csv_header();
std::string certificate_csv_row(const ChebyshevCertificate& cert);

}  // namespace accel
