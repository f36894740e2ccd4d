#include "accelkit/problems.hpp"

#include <cmath>
#include <string>

#include "accelkit/rng.hpp"

namespace accel {
namespace {

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) {
  return std::log1p(std::exp(-std::abs(t))) + std::max(-t, 0.0);
}

// 1 / (1 + exp(t)).
double sigmoid_neg(double t) {
  if (t >= 0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

// Largest |d³/dt³ log(1 + exp(-t))|, attained where σ(t) = 1/2 ± 1/(2√3).
constexpr double kLogisticThirdDerivative = 0.09622504486493763;  // 1/(6√3)

void check_dim(Eigen::Index expected, Eigen::Index got, const char* where) {
  if (expected != got) {
    throw StructuralError(std::string(where) + ": expected dimension " + std::to_string(expected) +
                          ", got " + std::to_string(got));
  }
}

}  // namespace

Matrix QuadraticProblem::hessian() const {
  return basis * eigenvalues.asDiagonal() * basis.transpose();
}

Matrix QuadraticProblem::iteration_matrix() const {
  const Vector g = (1.0 - eigenvalues.array() / L()).matrix();
  return basis * g.asDiagonal() * basis.transpose();
}

QuadraticProblem make_quadratic(const Matrix& A, const Vector& x_star) {
  if (A.rows() != A.cols() || A.rows() != x_star.size()) {
    throw StructuralError("make_quadratic: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (A + A.transpose()));
  if (eig.eigenvalues().minCoeff() < 0.0) {
    throw ValidationError("make_quadratic: Hessian is not positive semidefinite");
  }
  return {eig.eigenvectors(), eig.eigenvalues(), x_star};
}

LogisticProblem make_logistic(Matrix data, Vector labels, double rho) {
  if (data.rows() != labels.size()) {
    throw StructuralError("make_logistic: " + std::to_string(data.rows()) + " samples but " +
                          std::to_string(labels.size()) + " labels");
  }
  if (data.rows() == 0 || data.cols() == 0) {
    throw StructuralError("make_logistic: empty data matrix");
  }
  if (!(rho >= 0.0)) throw ValidationError("make_logistic: rho must be >= 0");
  for (Eigen::Index i = 0; i < labels.size(); ++i) labels(i) = labels(i) > 0 ? 1.0 : -1.0;

  LogisticProblem p;
  const double n = static_cast<double>(data.rows());
  const double sigma_sq = spectral_norm_sq(data.transpose() * data);
  p.data_smoothness = sigma_sq / (4.0 * n);
  const Vector row_norms = data.rowwise().norm();
  const double mean_cubed = row_norms.array().cube().mean();
  p.hessian_lipschitz =
      kLogisticThirdDerivative * std::min(mean_cubed, row_norms.maxCoeff() * sigma_sq / n);
  p.data = std::move(data);
  p.labels = std::move(labels);
  p.rho = rho;
  return p;
}

void set_condition(LogisticProblem& p, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw ValidationError("set_condition: kappa must lie in (0, 1)");
  }
  p.rho = kappa * p.data_smoothness / (1.0 - kappa);
  p.x_star.reset();
}

void normalize_columns(Matrix& data) {
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double n = data.col(j).norm();
    if (n > 0.0) data.col(j) /= n;
  }
}

ValueGrad quadratic_value_grad(const QuadraticProblem& p, const Vector& x) {
  check_dim(p.dim(), x.size(), "quadratic_value_grad");
  const Vector coords = p.basis.transpose() * (x - p.x_star);
  const Vector scaled = p.eigenvalues.cwiseProduct(coords);
  return {0.5 * coords.dot(scaled), p.basis * scaled};
}

ValueGrad logistic_value_grad(const LogisticProblem& p, const Vector& x) {
  check_dim(p.dim(), x.size(), "logistic_value_grad");
  const double n = static_cast<double>(p.samples());
  const Vector margins = p.labels.cwiseProduct(p.data * x);
  Vector weights(margins.size());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    loss += softplus_neg(margins(i));
    weights(i) = -p.labels(i) * sigmoid_neg(margins(i));
  }
  ValueGrad out;
  out.value = loss / n + 0.5 * p.rho * x.squaredNorm();
  out.grad = p.data.transpose() * weights / n + p.rho * x;
  return out;
}

Vector logistic_sample_grad(const LogisticProblem& p, const Vector& x, Eigen::Index i) {
  check_dim(p.dim(), x.size(), "logistic_sample_grad");
  if (i < 0 || i >= p.samples()) throw StructuralError("logistic_sample_grad: sample out of range");
  const double margin = p.labels(i) * p.data.row(i).dot(x);
  return -p.labels(i) * sigmoid_neg(margin) * p.data.row(i).transpose() + p.rho * x;
}

Matrix logistic_hessian(const LogisticProblem& p, const Vector& x) {
  check_dim(p.dim(), x.size(), "logistic_hessian");
  const double n = static_cast<double>(p.samples());
  const Vector margins = p.labels.cwiseProduct(p.data * x);
  Vector curv(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    curv(i) = sigmoid_neg(margins(i)) * sigmoid_neg(-margins(i));
  }
  Matrix H = p.data.transpose() * curv.asDiagonal() * p.data / n;
  H.diagonal().array() += p.rho;
  return H;
}

namespace {
template <typename... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
overloaded(Fs...) -> overloaded<Fs...>;
}  // namespace

ValueGrad value_grad(const Problem& p, const Vector& x) {
  return std::visit(overloaded{[&](const QuadraticProblem& q) { return quadratic_value_grad(q, x); },
                               [&](const LogisticProblem& l) { return logistic_value_grad(l, x); }},
                    p);
}

double value(const Problem& p, const Vector& x) { return value_grad(p, x).value; }

Vector gradient(const Problem& p, const Vector& x) { return value_grad(p, x).grad; }

Vector sample_gradient(const Problem& p, const Vector& x, Eigen::Index i) {
  return std::visit(
      overloaded{[&](const QuadraticProblem& q) -> Vector {
                   if (i != 0) throw StructuralError("sample_gradient: quadratic has one sample");
                   return quadratic_value_grad(q, x).grad;
                 },
                 [&](const LogisticProblem& l) -> Vector { return logistic_sample_grad(l, x, i); }},
      p);
}

Eigen::Index sample_count(const Problem& p) {
  return std::visit(overloaded{[](const QuadraticProblem&) -> Eigen::Index { return 1; },
                               [](const LogisticProblem& l) { return l.samples(); }},
                    p);
}

Eigen::Index dimension(const Problem& p) {
  return std::visit([](const auto& q) { return q.dim(); }, p);
}

double smoothness(const Problem& p) {
  return std::visit([](const auto& q) { return q.L(); }, p);
}

double strong_convexity(const Problem& p) {
  return std::visit([](const auto& q) { return q.mu(); }, p);
}

double max_sample_smoothness(const Problem& p) {
  return std::visit(overloaded{[](const QuadraticProblem& q) { return q.L(); },
                               [](const LogisticProblem& l) {
                                 return 0.25 * l.data.rowwise().squaredNorm().maxCoeff() + l.rho;
                               }},
                    p);
}

Matrix hessian(const Problem& p, const Vector& x) {
  return std::visit(overloaded{[](const QuadraticProblem& q) { return q.hessian(); },
                               [&](const LogisticProblem& l) { return logistic_hessian(l, x); }},
                    p);
}

double hessian_lipschitz(const Problem& p) {
  return std::visit(overloaded{[](const QuadraticProblem&) { return 0.0; },
                               [](const LogisticProblem& l) { return l.hessian_lipschitz; }},
                    p);
}

std::optional<Vector> known_minimizer(const Problem& p) {
  return std::visit(
      overloaded{[](const QuadraticProblem& q) -> std::optional<Vector> { return q.x_star; },
                 [](const LogisticProblem& l) { return l.x_star; }},
      p);
}

StepMap gradient_map(const Problem& p, double h) {
  if (!(h > 0.0)) throw ValidationError("gradient_map: step size must be > 0");
  return [&p, h](const Vector& y) -> Vector { return y - h * gradient(p, y); };
}

Vector nonlinear_error(const Problem& p, const Vector& y) {
  if (std::holds_alternative<QuadraticProblem>(p)) {
    check_dim(dimension(p), y.size(), "nonlinear_error");
    return Vector::Zero(y.size());
  }
  const auto& l = std::get<LogisticProblem>(p);
  if (!l.x_star) {
    throw UnsupportedError("nonlinear_error: minimizer not available, solve a reference first");
  }
  const Vector& xs = *l.x_star;
  const Vector diff = y - xs;
  return (logistic_value_grad(l, y).grad - logistic_hessian(l, xs) * diff) / l.L();
}

QuadraticProblem synth_quadratic(Eigen::Index d, double kappa, std::uint64_t seed) {
  if (d < 1) throw ValidationError("synth_quadratic: d must be >= 1");
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw ValidationError("synth_quadratic: kappa must lie in (0, 1]");
  }
  CounterRng rng(seed);
  Vector eig(d);
  if (d == 1) {
    eig(0) = 1.0;
  } else {
    const double lo = std::log(kappa);
    for (Eigen::Index i = 0; i < d; ++i) {
      eig(i) = std::exp(lo * (1.0 - static_cast<double>(i) / static_cast<double>(d - 1)));
    }
    eig(0) = kappa;
    eig(d - 1) = 1.0;
  }
  Matrix gauss(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) gauss(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  }
  Vector x_star(d);
  for (Eigen::Index i = 0; i < d; ++i) x_star(i) = rng.normal();
  return {std::move(Q), std::move(eig), std::move(x_star)};
}

LogisticProblem synth_logistic(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ValidationError("synth_logistic: n and d must be >= 1");
  CounterRng rng(seed);
  Matrix data(n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < n; ++i) data(i, j) = rng.normal();
  Vector separator(d);
  for (Eigen::Index j = 0; j < d; ++j) separator(j) = rng.normal();
  Vector labels(n);
  const Vector scores = data * separator;
  for (Eigen::Index i = 0; i < n; ++i) {
    double b = scores(i) >= 0 ? 1.0 : -1.0;
    if (rng.uniform() < 0.1) b = -b;
    labels(i) = b;
  }
  return make_logistic(std::move(data), std::move(labels), 0.0);
}

}  // namespace accel
