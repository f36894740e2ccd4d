#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "accelkit/linalg.hpp"
#include "accelkit/schedule.hpp"

namespace accel {

struct ValueGrad {
  double value = 0.0;
  Vector grad;
};

/// f(x) = ½ (x - x*)ᵀ A (x - x*) with A = Q diag(eigenvalues) Qᵀ.
///
/// Stored through its eigendecomposition so that the gradient-step operator
/// G = I - A/L and its powers are exact and cheap.
struct QuadraticProblem {
  Matrix basis;        ///< Q, orthogonal
  Vector eigenvalues;  ///< ascending, all >= 0
  Vector x_star;

  Eigen::Index dim() const { return x_star.size(); }
  double L() const { return eigenvalues.maxCoeff(); }
  double mu() const { return eigenvalues.minCoeff(); }
  double kappa() const { return mu() / L(); }
  Matrix hessian() const;
  /// G = I - A/L.
  Matrix iteration_matrix() const;
};

/// Quadratic with the given symmetric PSD Hessian and minimizer.
QuadraticProblem make_quadratic(const Matrix& A, const Vector& x_star);

/// f(x) = (1/n) Σ log(1 + exp(-b_i a_iᵀ x)) + (ρ/2)‖x‖².
///
/// Sample i carries the full ℓ2 term, so the full gradient is the mean of the
/// sample gradients.
struct LogisticProblem {
  Matrix data;    ///< n×d, row i is a_i
  Vector labels;  ///< ±1
  double rho = 0.0;
  double data_smoothness = 0.0;  ///< σ_max(data)² / (4n)
  double hessian_lipschitz = 0.0;
  std::optional<Vector> x_star;

  Eigen::Index dim() const { return data.cols(); }
  Eigen::Index samples() const { return data.rows(); }
  double L() const { return data_smoothness + rho; }
  double mu() const { return rho; }
  double kappa() const { return mu() / L(); }
};

/// Builds a logistic problem and its smoothness constants. Labels in {0, -1}
/// map to -1, everything positive to +1.
LogisticProblem make_logistic(Matrix data, Vector labels, double rho);

/// Sets ρ so that μ/L equals kappa (0 < kappa < 1).
void set_condition(LogisticProblem& p, double kappa);

/// Scales every nonzero column of the data to unit Euclidean norm.
void normalize_columns(Matrix& data);

using Problem = std::variant<QuadraticProblem, LogisticProblem>;

ValueGrad quadratic_value_grad(const QuadraticProblem& p, const Vector& x);
ValueGrad logistic_value_grad(const LogisticProblem& p, const Vector& x);
Vector logistic_sample_grad(const LogisticProblem& p, const Vector& x, Eigen::Index i);
Matrix logistic_hessian(const LogisticProblem& p, const Vector& x);

ValueGrad value_grad(const Problem& p, const Vector& x);
double value(const Problem& p, const Vector& x);
Vector gradient(const Problem& p, const Vector& x);
/// Gradient of sample i; a quadratic is a single-sample problem.
Vector sample_gradient(const Problem& p, const Vector& x, Eigen::Index i);
Eigen::Index sample_count(const Problem& p);
Eigen::Index dimension(const Problem& p);
double smoothness(const Problem& p);
double strong_convexity(const Problem& p);
/// Largest per-sample smoothness constant.
double max_sample_smoothness(const Problem& p);
Matrix hessian(const Problem& p, const Vector& x);
/// Analytic bound M on ‖∇²f(y) - ∇²f(x)‖ / ‖y - x‖ (0 for quadratics).
double hessian_lipschitz(const Problem& p);
std::optional<Vector> known_minimizer(const Problem& p);

/// g(x) = x - h ∇f(x). The map refers to `p`, which must outlive it.
StepMap gradient_map(const Problem& p, double h);

/// Linearization error of the gradient step around x*:
/// e = (1/L)(∇f(y) - ∇²f(x*)(y - x*)). Identically zero for quadratics.
/// Throws UnsupportedError when x* is unknown.
Vector nonlinear_error(const Problem& p, const Vector& y);

/// Eigenvalues log-spaced in [kappa, 1] (L = 1, μ = kappa) in a random
/// orthogonal basis; x* is standard normal. d = 1 gives A = [1].
QuadraticProblem synth_quadratic(Eigen::Index d, double kappa, std::uint64_t seed);

/// Gaussian features, labels from a planted Gaussian separator with each label
/// flipped with probability 0.1. ρ is left at 0.
LogisticProblem synth_logistic(Eigen::Index n, Eigen::Index d, std::uint64_t seed);

}  // namespace accel
