// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "accelkit/analysis.hpp"
#include "accelkit/chebyshev.hpp"
#include "accelkit/experiment.hpp"
#include "support.hpp"

using namespace accel;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // runtime limit, 0 for none
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

AccelConfig rna(int N, double lambda) {
  AccelConfig c;
  c.window = N;
  c.reg = Regularization::lambda(lambda);
  return c;
}

AccelConfig cna(int N, double tau) {
  AccelConfig c;
  c.window = N;
  c.reg = Regularization::tau(tau);
  return c;
}

double resid(const StepMap& g, const Vector& y) { return (y - g(y)).norm(); }

// Random window: half Gaussian blocks, half windows of gradient-descent
// iterates on an ill-conditioned quadratic (nearly collinear residuals).
AccelWindow random_window(int trial) {
  const int N = 2 + trial % 9;
  const int d = 10 + (trial * 7) % 41;
  if (trial % 2 == 0) {
    const Matrix X = support::gaussian(d, N, 10000 + trial);
    return AccelWindow::from_blocks(X, X + support::gaussian(d, N, 20000 + trial));
  }
  const auto q = synth_quadratic(d, std::pow(10.0, -1 - trial % 4), 30000 + trial);
  const Problem p = q;
  const auto g = gradient_map(p, 1.0);
  AccelWindow w(d, N);
  Vector y = support::gaussian(d, 40000 + trial);
  for (int k = 0; k < N; ++k) {
    Vector x = g(y);
    w.push(x, y);
    y = x;
  }
  return w;
}

// ── 1 ──
Outcome exact_termination() {
  const auto q = synth_quadratic(20, 1e-3, 1);
  const Problem p = q;
  const auto g = gradient_map(p, 1.0);
  const Vector x0 = Vector::Zero(20);
  const Vector y = offline_restart(x0, g, rna(21, 0.0), 1);
  const double ratio = resid(g, y) / resid(g, x0);

  // For reference: the same window driven online.
  AccelWindow w(20, 21);
  Vector yo = x0;
  int steps = 0;
  double best = 1.0;
  for (; steps < 200 && best > 1e-8; ++steps) {
    yo = online_step(w, g, yo, rna(21, 0.0)).y_next;
    best = std::min(best, resid(g, yo) / resid(g, x0));
  }
  Outcome o;
  o.pass = ratio <= 1e-8;
  o.detail = fmt("offline ratio %.3g (target 1e-8); online reaches %.3g after %g steps", ratio, best,
                 steps);
  return o;
}

// ── 2 ──
Outcome optimal_rate() {
  int cases = 0, violations = 0;
  double worst = 0.0;
  for (double kappa : {1e-1, 1e-2, 1e-3}) {
    for (int N = 3; N <= 10; ++N) {
      for (int seed = 0; seed < 20; ++seed) {
        const auto q = synth_quadratic(50, kappa, 1000 * N + seed);
        const Problem p = q;
        const auto g = gradient_map(p, 1.0);
        const Vector x0 = support::gaussian(50, 777 + seed);
        const Vector y = offline_restart(x0, g, rna(N, 0.0), 1);
        const double bound = theorem1_rate(kappa, N, 50).value * (1 - kappa) * resid(g, x0);
        const double measured = resid(g, y);
        worst = std::max(worst, measured / bound);
        violations += measured > bound * (1 + 1e-6);
        ++cases;
      }
    }
  }
  return {violations == 0, fmt("%g cases, %g violations, max measured/bound %.4f", cases, violations, worst)};
}

// ── 3 ──
Outcome coefficient_norm_bound() {
  int checks = 0, violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const AccelWindow w = random_window(trial);
    const double n = w.size();
    for (int e = -8; e <= 2; ++e) {
      const double lambda = std::pow(10.0, e);
      const double bound = std::sqrt(1.0 + 1.0 / lambda) / std::sqrt(n);
      const double norm = rna_coefficients(w, lambda).c.norm();
      worst = std::max(worst, norm / bound);
      violations += norm > bound;
      ++checks;
    }
  }
  return {violations == 0, fmt("%g checks, %g violations, max norm/bound %.4f", checks, violations, worst)};
}

// ── 4 ──
Outcome duality() {
  double worst = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const AccelWindow w = random_window(trial);
    for (int k = 0; k < 10; ++k) {
      const double tau = std::pow(10.0, -3.0 + 5.0 * k / 9.0);
      const Vector a = cna_coefficients(w, tau).c;
      const Vector b = rna_coefficients(w, lambda_from_tau(w, tau)).c;
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
      ++checks;
    }
  }
  return {worst <= 1e-6, fmt("%g pairs, max |c_cna - c_rna| = %.3g", checks, worst)};
}

// ── 5 ──
Outcome perturbation() {
  int runs = 0, violations = 0;
  double worst = 0.0;
  for (double kappa : {1e-1, 1e-2, 1e-3}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto q = synth_quadratic(20, kappa, 500 + seed);
      const Problem p = q;
      const auto ledger = record_perturbation(gradient_map(p, 1.0), schedule_of(Method::gradient, 30),
                                              support::gaussian(20, 600 + seed), 30, {1e-3, 700 + seed});
      const auto rep = perturbation_bound(ledger, kappa);
      violations += rep.violations;
      worst = std::max(worst, (rep.lhs.array() / rep.rhs.array()).maxCoeff());
      ++runs;
    }
  }
  return {violations == 0, fmt("%g runs x 30 steps, %g violations, max lhs/rhs %.4f", runs, violations, worst)};
}

// ── 6 ──
Outcome noise_plateau_check() {
  const int d = 20, N = 10, steps = 1500;
  const double kappa = 0.1, sigma = 1e-2;
  std::vector<double> tail;
  double worst_seed = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto q = synth_quadratic(d, kappa, 900 + seed);
    const Problem p = q;
    const auto clean = gradient_map(p, 1.0);
    const auto noisy = perturbed_step_map(clean, {sigma, 950 + seed});
    AccelWindow w(d, N);
    Vector y = support::gaussian(d, 990 + seed);
    std::vector<double> mine;
    for (int k = 0; k < steps; ++k) {
      y = online_step(w, noisy, y, cna(N, 0.0)).y_next;
      if (k >= steps - 100) mine.push_back(gradient(p, y).norm());
    }
    std::sort(mine.begin(), mine.end());
    worst_seed = std::max(worst_seed, mine[mine.size() / 2]);
    tail.insert(tail.end(), mine.begin(), mine.end());
  }
  std::sort(tail.begin(), tail.end());
  const double median = tail[tail.size() / 2];
  const double bound = 3.0 * noise_plateau(kappa, 0.0, sigma, 1.0, N);
  return {median <= bound,
          fmt("median grad norm %.3g, worst per-seed median %.3g, bound 3 L sigma/(kappa sqrt N) = %.3g",
              median, worst_seed, bound)};
}

// ── 7 ──
Outcome class_membership() {
  int steps = 0, small = 0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int run = 0; run < 100; ++run) {
    const int d = 30;
    const auto q = synth_quadratic(d, std::pow(10.0, -1 - run % 3), 2000 + run);
    const Problem p = q;
    const auto g = gradient_map(p, 1.0);
    AccelWindow w(d, 5);
    Vector y = support::gaussian(d, 3000 + run);
    for (int k = 0; k < 25; ++k) {
      const auto st = online_step(w, g, y, rna(5, 0.0));
      if (st.converged) break;
      const double cN = std::abs(st.coeffs.c(st.coeffs.size() - 1));
      // A one-column window always has c = [1].
      if (st.coeffs.size() > 1) smallest = std::min(smallest, cN);
      small += cN <= 1e-12;
      ++steps;
      y = st.y_next;
    }
  }
  // Rank-deficient: three residuals in R².
  Matrix A(2, 2);
  A << 1.0, 0.2, 0.2, 0.5;
  Vector xs(2);
  xs << 1.0, -3.0;
  const Problem p2 = make_quadratic(A, xs);
  const auto g2 = gradient_map(p2, 1.0 / smoothness(p2));
  AccelWindow w2(2, 4);
  Vector y = Vector::Zero(2);
  bool flagged = false;
  double err = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4 && !flagged; ++k) {
    const auto st = online_step(w2, g2, y, rna(4, 0.0));
    y = st.y_next;
    if (st.converged) {
      flagged = true;
      err = (y - xs).norm();
    }
  }
  Outcome o;
  o.pass = small == 0 && flagged && err <= 1e-8;
  o.detail = fmt("%g full-rank steps, min |c_N| over windows of 2+ columns %.3g; ", steps, smallest) +
             fmt("rank-deficient case: converged flag %g, |y - x*| %.3g", flagged, err);
  return o;
}

// ── 8 and 9 share the logistic runs ──
std::string logistic_base() {
  return "problem.kind = logistic\nproblem.n = 500\nproblem.d = 50\nproblem.kappa = 1e-6\n"
         "seed = 7\ntol = 1e-8\n";
}

ExperimentConfig parse(const std::string& text, const std::string& label) {
  std::istringstream in(text + "label = " + label + "\n");
  return parse_config(in);
}

std::vector<std::pair<RunTrace, RunTrace>> adaptive_pairs;  // (adaptive, Nesterov), for criterion 9

Outcome logistic_acceleration() {
  const std::string base = logistic_base();
  const auto gd = run_experiment(parse(base + "max_iters = 200000\n", "gd"));
  const auto on = run_experiment(parse(base + "max_iters = 200000\naccel.mode = online\n", "rna"));
  const auto nest = run_experiment(parse(base + "optimizer.kind = nesterov\nmax_iters = 20000\n", "nesterov"));
  const auto adap = run_experiment(
      parse(base + "optimizer.kind = nesterov\naccel.mode = adaptive\nmax_iters = 20000\n", "adaptive"));
  adaptive_pairs.emplace_back(adap, nest);

  const auto it_gd = iterations_to(gd, 1e-8);
  const auto it_rna = iterations_to(on, 1e-8);
  // A GD run that never reaches the tolerance took at least its full budget.
  const double gd_iters = it_gd ? double(*it_gd) : double(gd.rows.back().iter);
  const double rna_iters = it_rna ? double(*it_rna) : std::numeric_limits<double>::infinity();
  const bool stable = !adap.aborted && adap.rows.back().f_val <= adap.rows.front().f_val &&
                      adap.rows.back().grad_norm < adap.rows.front().grad_norm;
  Outcome o;
  o.pass = it_rna && rna_iters <= 0.5 * gd_iters && stable;
  o.detail = fmt("iterations to 1e-8: GD %g, online RNA %g (ratio %.3f); ", gd_iters, rna_iters,
                 rna_iters / gd_iters) +
             (it_gd ? "" : "GD hit its cap; ") +
             fmt("adaptive final grad norm %.3g, aborted %g", adap.rows.back().grad_norm, adap.aborted);
  return o;
}

struct GuardStats {
  std::size_t runs = 0;
  std::int64_t steps = 0, failures = 0;
  int slower = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();
};

GuardStats guard_stats(const std::vector<std::pair<RunTrace, RunTrace>>& pairs) {
  GuardStats g;
  g.runs = pairs.size();
  for (const auto& [adap, nest] : pairs) {
    g.failures += adap.descent_failures;
    g.steps += adap.rows.back().iter;
    const auto a = iterations_to(adap, 1e-8), b = iterations_to(nest, 1e-8);
    if (!a) {
      ++g.slower;
      continue;
    }
    const double excess = double(*a) - double(b ? *b : nest.rows.back().iter);
    g.worst_excess = std::max(g.worst_excess, excess);
    g.slower += excess > 10;
  }
  return g;
}

// Quadratic and logistic adaptive runs in addition to the one above. `rule`
// is appended to every adaptive config.
void guard_runs(const std::string& rule, std::vector<std::pair<RunTrace, RunTrace>>& pairs) {
  for (int seed = 0; seed < 5; ++seed) {
    const std::string quad = "problem.d = 100\nproblem.kappa = 1e-4\nseed = " + std::to_string(seed) +
                             "\noptimizer.kind = nesterov\nmax_iters = 5000\ntol = 1e-8\n";
    const auto nest = run_experiment(parse(quad, "nesterov"));
    const auto adap = run_experiment(parse(quad + "accel.mode = adaptive\n" + rule, "adaptive"));
    pairs.emplace_back(adap, nest);
  }
  for (int seed = 0; seed < 3; ++seed) {
    const std::string lg = "problem.kind = logistic\nproblem.n = 300\nproblem.d = 30\nproblem.kappa = 1e-3\n"
                           "seed = " + std::to_string(seed) +
                           "\noptimizer.kind = nesterov\nmax_iters = 20000\ntol = 1e-8\n";
    const auto nest = run_experiment(parse(lg, "nesterov"));
    const auto adap = run_experiment(parse(lg + "accel.mode = adaptive\n" + rule, "adaptive"));
    pairs.emplace_back(adap, nest);
  }
}

std::string describe(const GuardStats& g) {
  return fmt("%g runs, %g steps, %g descent failures, ", g.runs, g.steps, g.failures) +
         fmt("max (adaptive - Nesterov) iterations to 1e-8 %g, slower by > N %g", g.worst_excess, g.slower);
}

Outcome adaptive_guard() {
  const std::optional<RunTrace> c8_nesterov =
      adaptive_pairs.empty() ? std::nullopt : std::optional<RunTrace>(adaptive_pairs.front().second);
  guard_runs("", adaptive_pairs);
  const GuardStats iterate = guard_stats(adaptive_pairs);

  // Informational: the same runs with z tested against f(y_i) - ‖∇f(y_i)‖²/(2L).
  std::vector<std::pair<RunTrace, RunTrace>> alt;
  guard_runs("accel.adaptive_rule = descent\n", alt);
  if (c8_nesterov) {
    const std::string lg = logistic_base() + "optimizer.kind = nesterov\nmax_iters = 20000\n";
    alt.emplace_back(
        run_experiment(parse(lg + "accel.mode = adaptive\naccel.adaptive_rule = descent\n", "adaptive")),
        *c8_nesterov);
  }
  const GuardStats descent = guard_stats(alt);

  Outcome o;
  o.pass = iterate.failures == 0 && iterate.slower == 0;
  o.detail = describe(iterate) + "; INFO rule 'descent': " + describe(descent);
  return o;
}

// ── 10 ──
Outcome chebyshev_soundness() {
  const auto deg1 = constrained_chebyshev(1, 0.25, std::numeric_limits<double>::infinity());
  const bool analytic = std::abs(deg1.value - 1.0 / 7.0) <= 1e-3;
  int points = 0, violations = 0;
  double worst = 0.0;
  for (int N : {3, 5, 8}) {
    for (double tau : {0.1, 1.0, 10.0}) {
      for (double kappa : {1e-1, 1e-2, 1e-3}) {
        const auto cert = constrained_chebyshev(N - 1, 1.0 - kappa, tau);
        ++points;
        for (int seed = 0; seed < 5; ++seed) {
          const auto q = synth_quadratic(40, kappa, 5000 + 100 * N + seed);
          const Problem p = q;
          const auto g = gradient_map(p, 1.0);
          const Vector x0 = support::gaussian(40, 6000 + seed);
          const Vector y = offline_restart(x0, g, cna(N, tau), 1);
          const double envelope = (1 - kappa) * cert.value * resid(g, x0);
          const double ratio = resid(g, y) / envelope;
          worst = std::max(worst, ratio);
          violations += ratio > 1 + 1e-3;
        }
      }
    }
  }
  Outcome o;
  o.pass = analytic && violations == 0;
  o.detail = fmt("degree-1 value %.9f (1/7 = %.9f); ", deg1.value, 1.0 / 7.0) +
             fmt("%g grid points x 5 seeds, %g violations, max residual/envelope %.4f", points, violations,
                 worst);
  return o;
}

// ── 11 ──
Outcome gradient_correctness() {
  double worst = 0.0;
  int checks = 0;
  auto check = [&](const Problem& p, std::uint64_t seed, double scale) {
    const auto f = [&p](const Vector& x) { return value(p, x); };
    for (int k = 0; k < 20; ++k) {
      const Vector x = scale * support::gaussian(dimension(p), seed + k);
      const Vector g = gradient(p, x);
      const Vector fd = support::fd_gradient(f, x);
      worst = std::max(worst, (g - fd).norm() / g.norm());
      ++checks;
    }
  };
  check(synth_quadratic(30, 1e-3, 1), 100, 1.0);
  auto lp = synth_logistic(200, 20, 2);
  set_condition(lp, 1e-3);
  check(lp, 200, 0.5);
  auto lp2 = synth_logistic(500, 50, 3);
  normalize_columns(lp2.data);
  lp2 = make_logistic(lp2.data, lp2.labels, 0.0);
  set_condition(lp2, 1e-6);
  check(lp2, 300, 3.0);
  return {worst <= 1e-6, fmt("%g points over 3 problems, max relative error %.3g", checks, worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact termination, offline N=21 > d=20", 1.0, exact_termination},
      {2, "optimal rate certification", 30.0, optimal_rate},
      {3, "coefficient norm bound", 10.0, coefficient_norm_bound},
      {4, "RNA/CNA duality", 20.0, duality},
      {5, "perturbation bound", 30.0, perturbation},
      {6, "noise plateau", 60.0, noise_plateau_check},
      {7, "online class membership", 0.0, class_membership},
      {8, "acceleration on logistic regression", 60.0, logistic_acceleration},
      {9, "adaptive optimality guard", 0.0, adaptive_guard},
      {10, "Chebyshev certificate soundness", 120.0, chebyshev_soundness},
      {11, "gradient correctness", 0.0, gradient_correctness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %2d %s: %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
