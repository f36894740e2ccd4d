#include "accelkit/coefficients.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace accel {
namespace {

Coefficients finish(const Matrix& gram, Vector c, bool exact) {
  Coefficients out;
  out.residual_norm = std::sqrt(std::max(0.0, c.dot(gram * c)));
  out.norm = c.norm();
  out.exact_combination = exact;
  out.c = std::move(c);
  return out;
}

Coefficients uniform(const Matrix& gram, bool exact) {
  const Eigen::Index n = gram.rows();
  return finish(gram, Vector::Constant(n, 1.0 / static_cast<double>(n)), exact);
}

Coefficients normalize(const Matrix& gram, const Vector& z) {
  const double s = z.sum();
  if (!(std::abs(s) > 1e-300) || !std::isfinite(s) ||
      std::abs(s) <= 1e-14 * z.cwiseAbs().sum()) {
    throw DegenerateNormalizationError("rna_coefficients: 1ᵀz vanished during normalization");
  }
  return finish(gram, z / s, false);
}

// λ = 0 on the eigenpairs (w, V) of RᵀR; eigenvalues at or below `cutoff`
// count as null.
Coefficients unregularized(const Matrix& gram, const Vector& w, const Matrix& V, double cutoff) {
  const Eigen::Index n = gram.rows();
  const Vector o = V.transpose() * Vector::Ones(n);

  double null_weight = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i) <= cutoff) null_weight += o(i) * o(i);
  }
  Vector a = Vector::Zero(n);
  if (null_weight > 1e-10 * static_cast<double>(n)) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w(i) <= cutoff) a(i) = o(i) / null_weight;
    }
    return finish(gram, V * a, true);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i) > cutoff) a(i) = o(i) / w(i);
  }
  return normalize(gram, V * a);
}

Coefficients unregularized(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const double wmax = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  if (wmax == 0.0) return uniform(gram, true);
  return unregularized(gram, eig.eigenvalues(), eig.eigenvectors(), kGramRankCutoff * wmax);
}

// Same limit from the SVD of R. Forming RᵀR squares the condition number, and
// Krylov-like windows reach 1e16 within a few restarts, so the Gram route
// loses the small directions the minimizer lives on.
Coefficients unregularized(const AccelWindow& window) {
  const Matrix& gram = window.gram();
  // Full V: with fewer rows than columns the null directions are the ones a
  // thin factor drops.
  Eigen::JacobiSVD<Matrix> svd(window.residuals(), Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return uniform(gram, true);
  Vector w = Vector::Zero(window.size());
  w.head(s.size()) = s.cwiseAbs2();
  const double cut = kResidualRankCutoff * smax;
  return unregularized(gram, w, svd.matrixV(), cut * cut);
}

template <class NormAt>
double lambda_search(Eigen::Index n, double tau, const NormAt& norm_at) {
  if (!(tau >= 0.0)) throw ValidationError("lambda_from_tau: tau must be >= 0");
  if (std::isinf(tau) || n == 1) return 0.0;
  if (tau == 0.0) return std::numeric_limits<double>::infinity();

  const double bound = cna_norm_bound(n, tau);
  if (norm_at(0.0) <= bound) return 0.0;

  // ‖c^λ‖ decreases towards 1/√N < bound, so doubling terminates.
  double lo = 0.0;
  double hi = 1.0;
  double hi_norm = norm_at(hi);
  int doublings = 0;
  while (hi_norm > bound) {
    if (++doublings > 1000) {
      throw ConvergenceError("lambda_from_tau: could not bracket the constraint",
                             (hi_norm - bound) / bound);
    }
    lo = hi;
    hi *= 2.0;
    hi_norm = norm_at(hi);
  }

  // Invariant: ‖c(lo)‖ > bound >= ‖c(hi)‖. Returning hi keeps c feasible.
  const double tol = 1e-9 * bound;
  for (int step = 0; step < 200; ++step) {
    if (bound - hi_norm <= tol) return hi;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double mid_norm = norm_at(mid);
    if (mid_norm > bound) {
      lo = mid;
    } else {
      hi = mid;
      hi_norm = mid_norm;
    }
  }
  if (bound - hi_norm <= 1e-8 * bound) return hi;
  throw ConvergenceError("lambda_from_tau: bisection did not reach the norm bound",
                         (bound - hi_norm) / bound);
}

}  // namespace

Coefficients rna_coefficients(const Matrix& gram, double lambda) {
  const Eigen::Index n = gram.rows();
  if (n == 0 || gram.cols() != n) {
    throw StructuralError("rna_coefficients: empty or non-square Gram matrix");
  }
  if (!(lambda >= 0.0)) {
    throw ValidationError("rna_coefficients: lambda must be >= 0");
  }
  if (n == 1) return finish(gram, Vector::Ones(1), gram(0, 0) == 0.0);
  if (std::isinf(lambda)) return uniform(gram, false);
  if (lambda == 0.0) return unregularized(gram);

  const double scale = spectral_norm_sq(gram);
  if (scale == 0.0) return uniform(gram, true);
  Matrix A = gram;
  A.diagonal().array() += lambda * scale;
  try {
    return normalize(gram, solve_spd(A, Vector::Ones(n)));
  } catch (const SingularMatrixError&) {
    // Round-off made the shifted Gram indefinite; use the eigenbasis.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const Vector o = eig.eigenvectors().transpose() * Vector::Ones(n);
    const Vector shifted = (eig.eigenvalues().array().max(0.0) + lambda * scale).matrix();
    return normalize(gram, eig.eigenvectors() * o.cwiseQuotient(shifted));
  }
}

Coefficients rna_coefficients(const AccelWindow& window, double lambda) {
  if (window.empty()) throw StructuralError("rna_coefficients: empty window");
  if (lambda == 0.0 && window.size() > 1) return unregularized(window);
  return rna_coefficients(window.gram(), lambda);
}

double cna_norm_bound(Eigen::Index n, double tau) {
  return (1.0 + tau) / std::sqrt(static_cast<double>(n));
}

double lambda_from_tau(const Matrix& gram, double tau) {
  if (gram.rows() == 0) throw StructuralError("lambda_from_tau: empty Gram matrix");
  return lambda_search(gram.rows(), tau, [&](double lambda) { return rna_coefficients(gram, lambda).norm; });
}

double lambda_from_tau(const AccelWindow& window, double tau) {
  if (window.empty()) throw StructuralError("lambda_from_tau: empty window");
  return lambda_search(window.size(), tau,
                       [&](double lambda) { return rna_coefficients(window, lambda).norm; });
}

Coefficients cna_coefficients(const Matrix& gram, double tau) {
  return rna_coefficients(gram, lambda_from_tau(gram, tau));
}

Coefficients cna_coefficients(const AccelWindow& window, double tau) {
  if (window.empty()) throw StructuralError("cna_coefficients: empty window");
  return rna_coefficients(window, lambda_from_tau(window, tau));
}

double tau_from_lambda(const Coefficients& coeffs) {
  const double n = static_cast<double>(coeffs.c.size());
  return std::max(0.0, coeffs.c.norm() * std::sqrt(n) - 1.0);
}

Vector extrapolate(const AccelWindow& window, const Coefficients& coeffs, double beta) {
  if (coeffs.c.size() != window.size()) {
    throw StructuralError("extrapolate: " + std::to_string(coeffs.c.size()) +
                          " coefficients for a window of " + std::to_string(window.size()));
  }
  if (beta == 1.0) return window.combine_x(coeffs.c);
  if (beta == 0.0) return window.combine_y(coeffs.c);
  return (1.0 - beta) * window.combine_y(coeffs.c) + beta * window.combine_x(coeffs.c);
}

}  // namespace accel
