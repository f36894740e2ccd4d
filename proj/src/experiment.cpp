#include "accelkit/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "accelkit/analysis.hpp"
#include "accelkit/chebyshev.hpp"
#include "accelkit/libsvm.hpp"
#include "accelkit/noise.hpp"

namespace accel {
namespace {

class Recorder {
 public:
  Recorder(const Problem& p, double h, const ExperimentConfig& cfg, RunTrace& trace)
      : p_(p), h_(h), cfg_(cfg), trace_(trace), start_(std::chrono::steady_clock::now()) {}

  // False when the run must stop: non-finite objective or tolerance reached.
  bool add(std::int64_t iter, const Vector& point, double coeff_norm, Branch branch) {
    const ValueGrad vg = value_grad(p_, point);
    if (!std::isfinite(vg.value) || !vg.grad.allFinite()) {
      trace_.aborted = true;
      return false;
    }
    TraceRow row;
    row.iter = iter;
    row.f_val = vg.value;
    row.grad_norm = vg.grad.norm();
    row.resid_norm = h_ * row.grad_norm;
    row.coeff_norm = coeff_norm;
    row.branch = static_cast<int>(branch);
    if (cfg_.wall_clock) {
      row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
    }
    trace_.rows.push_back(row);
    return !(cfg_.tol > 0.0 && row.grad_norm <= cfg_.tol);
  }

 private:
  const Problem& p_;
  double h_;
  const ExperimentConfig& cfg_;
  RunTrace& trace_;
  std::chrono::steady_clock::time_point start_;
};

Branch branch_of(const Coefficients& c) {
  return c.exact_combination ? Branch::converged : Branch::extrapolated;
}

// τ(D) or λ(D) with D = max_j ‖r_j‖/(hμ), which bounds ‖y_j - x*‖ for a
// gradient step on a μ-strongly convex function.
std::function<Regularization(const AccelWindow&)> exponent_rule(const ExperimentConfig& cfg,
                                                                double h, double mu) {
  const ExponentSchedule sched = schedule_exponents({1.0, 0.0, cfg.accel.alpha, cfg.accel.s, cfg.accel.r});
  const bool tau = cfg.accel.s != 0.0;
  return [sched, tau, h, mu](const AccelWindow& w) {
    double D = 0.0;
    for (int j = 0; j < w.size(); ++j) D = std::max(D, w.r(j).norm());
    D /= h * mu;
    return tau ? Regularization::tau(sched.tau(D)) : Regularization::lambda(sched.lambda(D));
  };
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace

Problem build_problem(const ProblemSpec& spec) {
  if (spec.kind == "quadratic") return synth_quadratic(spec.d, spec.kappa, spec.seed);

  LogisticProblem lp;
  if (spec.kind == "logistic") {
    lp = synth_logistic(spec.n, spec.d, spec.seed);
  } else if (spec.kind == "libsvm") {
    LibsvmData data = read_libsvm_file(spec.file);
    lp = make_logistic(std::move(data.features), std::move(data.labels), 0.0);
  } else {
    throw ValidationError("unknown problem kind '" + spec.kind + "'");
  }
  if (spec.normalize) {
    normalize_columns(lp.data);
    lp = make_logistic(std::move(lp.data), std::move(lp.labels), 0.0);
  }
  set_condition(lp, spec.kappa);
  return lp;
}

RunTrace run_on(const Problem& p, const ExperimentConfig& cfg) {
  cfg.validate();
  const Method kind = cfg.optimizer.kind;
  const double h = cfg.optimizer.h > 0.0 ? cfg.optimizer.h : default_step(kind, p);
  const double mu = strong_convexity(p);

  RunTrace trace;
  trace.label = cfg.label.empty() ? to_string(kind) + "+" + to_string(cfg.accel.mode) : cfg.label;
  Recorder rec(p, h, cfg, trace);

  const Eigen::Index d = dimension(p);
  const Vector x0 = Vector::Zero(d);
  if (!rec.add(0, x0, 0.0, Branch::plain)) return trace;

  StepMap g = make_step_map(kind, p, h, cfg.seed, cfg.optimizer.batch);
  if (cfg.noise_sigma > 0.0) g = perturbed_step_map(std::move(g), {cfg.noise_sigma, cfg.noise_seed});

  AccelConfig acfg;
  if (cfg.accel.mode != RunMode::none) {
    acfg = cfg.accel_config();
    if (cfg.accel.s != 0.0 || cfg.accel.r != 0.0) acfg.schedule = exponent_rule(cfg, h, mu);
  }
  const std::int64_t K = cfg.max_iters;
  const bool momentum = kind == Method::nesterov;

  switch (cfg.accel.mode) {
    case RunMode::none: {
      MomentumSchedule mom(smoothness(p), mu);
      Vector x_prev = x0;
      Vector x = x0;
      for (std::int64_t k = 1; k <= K; ++k) {
        Vector y = x;
        if (momentum) {
          const double beta = mom.next();
          y = (1.0 + beta) * x - beta * x_prev;
        }
        x_prev = std::move(x);
        x = g(y);
        if (!rec.add(k, x, 0.0, Branch::plain)) break;
      }
      break;
    }
    case RunMode::offline: {
      AccelWindow window(d, acfg.window);
      Vector start = x0;
      std::int64_t k = 0;
      bool stop = false;
      while (!stop && k + acfg.window <= K) {
        window.clear();
        MomentumSchedule mom(smoothness(p), mu);
        Vector x_prev = start;
        Vector x = start;
        for (int j = 1; j <= acfg.window; ++j) {
          Vector y = x;
          if (momentum) {
            const double beta = mom.next();
            y = (1.0 + beta) * x - beta * x_prev;
          }
          Vector x_next = g(y);
          window.push(x_next, y);
          x_prev = std::move(x);
          x = std::move(x_next);
          ++k;
          if (j < acfg.window && !rec.add(k, x, 0.0, Branch::plain)) {
            stop = true;
            break;
          }
        }
        if (stop) break;
        const Coefficients c = window_coefficients(window, acfg);
        start = extrapolate(window, c, acfg.beta);
        stop = !rec.add(k, start, c.norm, branch_of(c));
      }
      break;
    }
    case RunMode::online: {
      AccelWindow window(d, acfg.window);
      Vector y = x0;
      for (std::int64_t k = 1; k <= K; ++k) {
        OnlineStep st = online_step(window, g, y, acfg);
        y = std::move(st.y_next);
        if (!rec.add(k, y, st.coeffs.norm, branch_of(st.coeffs))) break;
      }
      break;
    }
    case RunMode::adaptive: {
      const double L = 1.0 / h;
      AdaptiveState state(x0, L, std::min(mu, L));
      const Objective f = objective_of(p);
      AccelWindow window(d, acfg.window);
      for (std::int64_t k = 1; k <= K; ++k) {
        const AdaptiveStep st = adaptive_step(state, f, L, window, acfg);
        if (!st.descent_ok) ++trace.descent_failures;
        if (!rec.add(k, state.x, st.coeffs.norm, st.rna_branch ? Branch::extrapolated : Branch::plain)) {
          break;
        }
      }
      break;
    }
  }
  return trace;
}

RunTrace run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Problem p = build_problem(config.problem);
  RunTrace trace = run_on(p, config);
  if (!config.output.empty()) write_trace(trace, config.output);
  return trace;
}

int thread_cap() {
  if (const char* env = std::getenv("ACCELKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*env != '\0' && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<std::int64_t> iterations_to(const RunTrace& trace, double tol) {
  for (const TraceRow& r : trace.rows) {
    if (r.grad_norm <= tol) return r.iter;
  }
  return std::nullopt;
}

Comparison compare(const std::vector<ExperimentConfig>& configs, double tol, int max_threads) {
  if (configs.size() < 2) throw ValidationError("compare: need at least two configs");
  const std::string key = configs.front().problem.key();
  for (const ExperimentConfig& c : configs) {
    c.validate();
    if (c.problem.key() != key) {
      throw ValidationError("compare: problem specs differ ('" + key + "' vs '" + c.problem.key() +
                            "')");
    }
  }

  const std::size_t n = configs.size();
  Comparison out;
  out.traces.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out.traces[i] = run_experiment(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int cap = max_threads > 0 ? max_threads : thread_cap();
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<std::string> labels;
  std::map<std::string, int> seen;
  for (const RunTrace& t : out.traces) {
    std::string label = sanitize(t.label);
    if (const int count = seen[label]++; count > 0) label += "#" + std::to_string(count + 1);
    labels.push_back(label);
  }

  std::set<std::int64_t> iters;
  std::vector<std::map<std::int64_t, double>> columns(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const TraceRow& r : out.traces[i].rows) {
      iters.insert(r.iter);
      columns[i][r.iter] = r.grad_norm;
    }
  }
  std::string csv = "iter";
  for (const std::string& l : labels) csv += "," + l;
  csv += '\n';
  for (const std::int64_t it : iters) {
    csv += std::to_string(it);
    for (std::size_t i = 0; i < n; ++i) {
      csv += ',';
      if (const auto f = columns[i].find(it); f != columns[i].end()) csv += format_double(f->second);
    }
    csv += '\n';
  }
  out.wide_csv = std::move(csv);

  std::ostringstream summary;
  summary << "iterations to grad_norm <= " << format_double(tol) << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out.iters_to_tol.push_back(iterations_to(out.traces[i], tol));
    summary << "  " << labels[i] << ": ";
    if (out.iters_to_tol.back()) {
      summary << *out.iters_to_tol.back() << "\n";
    } else {
      const std::int64_t last = out.traces[i].rows.empty() ? 0 : out.traces[i].rows.back().iter;
      summary << "not reached in " << last << "\n";
    }
  }
  out.summary = summary.str();
  return out;
}

std::string CertificationReport::format() const {
  std::ostringstream out;
  out << "envelope: " << envelope << "\n";
  out << "checked: " << checked << "\n";
  out << "violations: " << violations.size() << "\n";
  for (const Violation& v : violations) {
    out << "  iter " << v.iter << ": measured " << format_double(v.measured) << " > bound "
        << format_double(v.bound) << "\n";
  }
  if (plateau) out << "noise plateau: " << format_double(*plateau) << "\n";
  return out.str();
}

namespace {

// min over p(1) = 1, deg p <= n of max |p| on [0, 1-kappa]. The closed-form
// rate ((1-√κ)/(1+√κ))^n undercuts it by up to a factor 2, so the envelope
// uses the exact value.
double minimax_value(int n, double kappa) {
  if (kappa >= 1.0) return 0.0;
  return chebyshev_optimum(n, 1.0 - kappa);
}

}  // namespace

CertificationReport certify(const RunTrace& trace, const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.problem.kind != "quadratic") {
    throw UnsupportedError("certify: bounds are available for quadratic problems only");
  }
  if (trace.rows.empty()) throw ValidationError("certify: empty trace");
  if (cfg.optimizer.kind != Method::gradient) {
    throw UnsupportedError("certify: only plain gradient steps have a certified envelope");
  }
  const QuadraticProblem q = synth_quadratic(cfg.problem.d, cfg.problem.kappa, cfg.problem.seed);
  const double L = q.L();
  const double kappa = q.kappa();
  const double h = cfg.optimizer.h > 0.0 ? cfg.optimizer.h : 1.0 / L;
  if (std::abs(h * L - 1.0) > 1e-12) {
    throw UnsupportedError("certify: the envelopes assume the step size 1/L");
  }

  CertificationReport rep;
  // Relative floor for rounding in the measured residuals.
  const double floor_rel = 1e-10;
  const auto check = [&](const TraceRow& row, double bound, double scale) {
    ++rep.checked;
    if (row.resid_norm > bound * (1.0 + 1e-6) + floor_rel * scale) {
      rep.violations.push_back({row.iter, row.resid_norm, bound});
    }
  };
  const double r0 = trace.rows.front().resid_norm;
  const AccelSpec& a = cfg.accel;
  const double tau = a.tau.value_or(std::numeric_limits<double>::infinity());

  switch (a.mode) {
    case RunMode::none: {
      rep.envelope = "gradient descent, (1-kappa)^k";
      for (const TraceRow& row : trace.rows) {
        check(row, std::pow(1.0 - kappa, static_cast<double>(row.iter)) * r0, r0);
      }
      break;
    }
    case RunMode::offline: {
      if (a.s != 0.0 || a.r != 0.0) throw UnsupportedError("certify: scheduled regularization");
      double C;
      if (a.tau) {
        C = constrained_chebyshev(a.N - 1, 1.0 - kappa, *a.tau, std::max(2000, 10 * a.N)).value;
        rep.envelope = "constrained Chebyshev C(tau, kappa) per window";
      } else if (a.lambda.value_or(1e-8) == 0.0) {
        C = minimax_value(a.N - 1, kappa);
        rep.envelope = "Chebyshev minimax 1/T_(N-1)((1+kappa)/(1-kappa)) per window";
      } else {
        throw UnsupportedError("certify: RNA with lambda > 0 has no closed-form envelope; use "
                               "accel.lambda = 0 or accel.tau");
      }
      const double factor = mixing_prefactor(kappa, a.beta) * C;
      double start = r0;
      for (const TraceRow& row : trace.rows) {
        if (row.branch == static_cast<int>(Branch::plain)) continue;
        check(row, factor * start, r0);
        start = row.resid_norm;
      }
      break;
    }
    case RunMode::online: {
      if (a.tau || a.s != 0.0 || a.r != 0.0 || a.lambda.value_or(1e-8) != 0.0) {
        throw UnsupportedError("certify: online runs are certified for lambda = 0 only");
      }
      rep.envelope = "Chebyshev minimax over the first window, k <= N";
      const double pre = mixing_prefactor(kappa, a.beta);
      for (const TraceRow& row : trace.rows) {
        if (row.iter < 1 || row.iter > a.N) continue;
        check(row, pre * minimax_value(static_cast<int>(row.iter) - 1, kappa) * r0, r0);
      }
      break;
    }
    case RunMode::adaptive:
      throw UnsupportedError("certify: adaptive runs have no closed-form envelope");
  }

  if (cfg.noise_sigma > 0.0) {
    rep.plateau = noise_plateau(kappa, std::isfinite(tau) ? tau : 0.0, cfg.noise_sigma, L,
                               a.mode == RunMode::none ? 1 : a.N);
  }
  return rep;
}

}  // namespace accel
