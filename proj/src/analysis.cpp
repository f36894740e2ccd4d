#include "accelkit/analysis.hpp"

#include <cmath>
#include <string>

#include "accelkit/rng.hpp"

namespace accel {
namespace {

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  // The smaller Gram side keeps the eigensolve at most n×n.
  return std::sqrt(M.rows() < M.cols() ? spectral_norm_sq(M * M.transpose())
                                       : spectral_norm_sq(M.transpose() * M));
}

}  // namespace

RateBound theorem1_rate(double kappa, int N, Eigen::Index d) {
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw ValidationError("theorem1_rate: kappa must lie in (0, 1]");
  }
  if (N < 1) throw ValidationError("theorem1_rate: N must be >= 1");
  RateBound out;
  out.kappa = kappa;
  out.N = N;
  out.prefactor = 1.0 - kappa;
  if (N > d || kappa == 1.0) {
    out.value = 0.0;
    return out;
  }
  const double s = std::sqrt(kappa);
  out.value = std::pow((1.0 - s) / (1.0 + s), N - 1);
  return out;
}

double mixing_prefactor(double kappa, double beta) {
  return std::max(std::abs(1.0 - beta), std::abs(1.0 - beta * kappa));
}

PerturbationLedger record_perturbation(const StepMap& g, const CombinationSchedule& schedule,
                                       const Vector& x0, int steps, const NoiseModel& noise) {
  auto log = std::make_shared<NoiseLog>();
  const ScheduleRun clean = run_schedule(g, schedule, x0, steps);
  const ScheduleRun noisy = run_schedule(perturbed_step_map(g, noise, log), schedule, x0, steps);

  PerturbationLedger ledger;
  ledger.E = log->as_matrix();
  ledger.R_clean = clean.Y - clean.X;
  ledger.R_noisy = noisy.Y - noisy.X;
  for (int i = 1; i <= steps; ++i) ledger.L.push_back(build_L_matrix(schedule, i));
  return ledger;
}

PerturbationReport perturbation_bound(const PerturbationLedger& ledger, double kappa) {
  const Eigen::Index n = ledger.E.cols();
  if (ledger.R_clean.rows() != ledger.R_noisy.rows() ||
      ledger.R_clean.cols() != ledger.R_noisy.cols() || ledger.R_clean.cols() != n ||
      ledger.E.rows() != ledger.R_clean.rows() || static_cast<Eigen::Index>(ledger.L.size()) < n) {
    throw StructuralError("perturbation_bound: clean run, noisy run and noise log do not pair up");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw ValidationError("perturbation_bound: kappa must lie in (0, 1]");
  }
  const Matrix P = ledger.R_noisy - ledger.R_clean;
  PerturbationReport out;
  out.lhs.resize(n);
  out.rhs.resize(n);
  double lbar = 1.0;
  double sum = 0.0;
  double decay = 1.0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    lbar *= spectral_norm(ledger.L[static_cast<std::size_t>(i - 1)]);
    decay *= 1.0 - kappa;
    sum += decay * lbar;
    out.lhs(i - 1) = spectral_norm(P.leftCols(i));
    out.rhs(i - 1) = spectral_norm(ledger.E.leftCols(i)) * (1.0 + sum);
    // Rounding in P is relative to the iterates, not to the noise.
    const double slack = 1e-12 * (ledger.R_clean.leftCols(i).norm() + out.rhs(i - 1));
    if (out.lhs(i - 1) > out.rhs(i - 1) + slack) ++out.violations;
  }
  return out;
}

double noise_plateau(double kappa, double tau, double sigma, double L, int N) {
  if (!(kappa > 0.0) || N < 1) throw ValidationError("noise_plateau: need kappa > 0 and N >= 1");
  return (1.0 + tau) * L * sigma / (kappa * std::sqrt(static_cast<double>(N)));
}

StabilitySplit stability_split(double grad0_norm, double kappa, double tau, double sigma, double L,
                               int N, double chebyshev_value) {
  StabilitySplit out;
  out.acceleration = (1.0 - kappa) * chebyshev_value * grad0_norm;
  out.stability = noise_plateau(kappa, tau, sigma, L, N);
  return out;
}

double ExponentSchedule::tau(double D) const { return s > 0.0 ? std::pow(D, -s) : 0.0; }

double ExponentSchedule::lambda(double D) const { return r > 0.0 ? std::pow(D, r) : 0.0; }

ExponentSchedule schedule_exponents(const PerturbationModel& model) {
  if (!(model.alpha > 1.0)) throw ValidationError("schedule_exponents: alpha must be > 1");
  const double s_max = model.alpha - 1.0;
  const double r_max = 2.0 * (model.alpha - 1.0);
  if (model.s != 0.0 && !(model.s > 0.0 && model.s < s_max)) {
    throw ValidationError("schedule_exponents: s must lie in (0, " + std::to_string(s_max) + ")");
  }
  if (model.r != 0.0 && !(model.r > 0.0 && model.r < r_max)) {
    throw ValidationError("schedule_exponents: r must lie in (0, " + std::to_string(r_max) + ")");
  }
  return {model.s, model.r};
}

double fit_gamma(const std::vector<double>& radii, const std::vector<double>& error_norms,
                 double alpha) {
  if (radii.size() != error_norms.size()) {
    throw StructuralError("fit_gamma: radii and error norms differ in length");
  }
  double gamma = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] > 0.0) gamma = std::max(gamma, error_norms[k] / std::pow(radii[k], alpha));
  }
  return gamma;
}

double sampled_hessian_lipschitz(const Problem& p, const Vector& center, double radius, int pairs,
                                 std::uint64_t seed) {
  CounterRng rng(seed);
  const Eigen::Index d = center.size();
  const auto draw = [&] {
    Vector v(d);
    for (Eigen::Index j = 0; j < d; ++j) v(j) = rng.normal();
    return Vector(center + radius * rng.uniform() * v.normalized());
  };
  double best = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Vector x = draw();
    const Vector y = draw();
    const double dist = (y - x).norm();
    if (dist == 0.0) continue;
    best = std::max(best, spectral_norm(hessian(p, y) - hessian(p, x)) / dist);
  }
  return best;
}

}  // namespace accel
