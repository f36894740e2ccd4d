#pragma once

#include <optional>
#include <string>
#include <vector>

#include "accelkit/config.hpp"
#include "accelkit/trace.hpp"

namespace accel {

/// Problem described by the spec; logistic problems get ρ from spec.kappa.
Problem build_problem(const ProblemSpec& spec);

/// Runs the configured pipeline on `problem` from x0 = 0.
///
/// Rows: one per evaluation of the step map, row 0 being x0. Row k holds the
/// point the method reports after k evaluations: x_k for plain and Nesterov
/// runs, the extrapolate y_k online, the accepted x_k in adaptive mode. In
/// offline mode the last row of each cycle holds the extrapolate instead of
/// the last plain iterate.
RunTrace run_on(const Problem& problem, const ExperimentConfig& config);

/// build_problem + run_on, writing the CSV to config.output when set.
RunTrace run_experiment(const ExperimentConfig& config);

struct Comparison {
  std::vector<RunTrace> traces;
  /// iter column plus one grad_norm column per run; blank where a run has
  /// no row.
  std::string wide_csv;
  /// Iterations to reach grad_norm <= tol, per run.
  std::vector<std::optional<std::int64_t>> iters_to_tol;
  std::string summary;
};

/// Runs every config (in parallel, up to max_threads or ACCELKIT_THREADS)
/// after checking they share a problem.
Comparison compare(const std::vector<ExperimentConfig>& configs, double tol, int max_threads = 0);

/// ACCELKIT_THREADS when set to a positive integer, else the hardware
/// concurrency (at least 1).
int thread_cap();

/// First iteration whose grad_norm is at or below tol.
std::optional<std::int64_t> iterations_to(const RunTrace& trace, double tol);

struct Violation {
  std::int64_t iter = 0;
  double measured = 0.0;
  double bound = 0.0;
};

struct CertificationReport {
  std::string envelope;  ///< which bound was applied
  int checked = 0;
  std::vector<Violation> violations;
  /// Predicted noise plateau when the run was noisy.
  std::optional<double> plateau;

  std::string format() const;
};

/// Overlays the theoretical envelope on trace.resid_norm. Supported on
/// quadratics with step 1/L: plain gradient descent, offline restarts
/// (λ = 0 or τ) and the first N online steps with λ = 0.
CertificationReport certify(const RunTrace& trace, const ExperimentConfig& config);

}  // namespace accel
