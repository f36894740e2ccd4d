#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "accelkit/drivers.hpp"
#include "accelkit/optimizers.hpp"

namespace accel {

struct ProblemSpec {
  std::string kind = "quadratic";  ///< quadratic | logistic | libsvm
  Eigen::Index d = 20;
  Eigen::Index n = 500;
  /// Target μ/L. Quadratics use it for the spectrum, logistic problems for ρ.
  double kappa = 1e-3;
  std::uint64_t seed = 0;
  std::string file;
  bool normalize = true;

  /// Canonical text used to check that compared runs share a problem.
  std::string key() const;
};

struct OptimizerSpec {
  Method kind = Method::gradient;
  double h = 0.0;  ///< 0 selects default_step
  int batch = 1;
};

enum class RunMode { none, offline, online, adaptive };

struct AccelSpec {
  RunMode mode = RunMode::none;
  int N = 10;
  double beta = 1.0;
  std::optional<double> lambda;
  std::optional<double> tau;
  /// Exponents of τ(D) = D^{-s}, λ(D) = D^{r}; 0 disables.
  double alpha = 2.0;
  double s = 0.0;
  double r = 0.0;
  AdaptiveRule adaptive_rule = AdaptiveRule::iterate;
};

struct ExperimentConfig {
  ProblemSpec problem;
  OptimizerSpec optimizer;
  AccelSpec accel;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  std::int64_t max_iters = 1000;
  std::uint64_t seed = 0;
  double tol = 0.0;  ///< stop once the gradient norm is at or below tol
  std::string output;
  std::string label;
  bool wall_clock = false;

  /// Throws ValidationError on inconsistent settings.
  void validate() const;
  /// AccelConfig for the driver; requires mode != none.
  AccelConfig accel_config() const;
};

/// Flat `key = value` text, `#` starts a comment. Unknown keys, repeated keys
/// and bad values raise ParseError with the line number. The result is
/// validated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

std::string to_string(Method m);
std::string to_string(RunMode m);

}  // namespace accel
