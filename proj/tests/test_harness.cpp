#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "accelkit/experiment.hpp"
#include "support.hpp"

using accel::ExperimentConfig;
using accel::Matrix;
using accel::Vector;

namespace {

ExperimentConfig cfg(const std::string& text) {
  std::istringstream in(text);
  return accel::parse_config(in);
}

int parse_error_line(const std::string& text) {
  try {
    cfg(text);
  } catch (const accel::ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("accelkit_test_" + name)).string();
}

const std::string kQuad = R"(
problem.kind = quadratic
problem.d = 30
problem.kappa = 1e-2
seed = 4
optimizer.kind = gradient
)";
const std::string kQuadGd = kQuad + "max_iters = 60\n";

}  // namespace

// ── Config ──

TEST(Config, ParsesAllSections) {
  const auto c = cfg(R"(# header comment
problem.kind = logistic   # trailing comment
problem.n = 100
problem.d = 7
problem.kappa = 1e-4
optimizer.kind = nesterov
accel.mode = adaptive
accel.N = 5
accel.lambda = 1e-6
max_iters = 20
seed = 3
tol = 1e-9
label = demo
)");
  EXPECT_EQ(c.problem.kind, "logistic");
  EXPECT_EQ(c.problem.n, 100);
  EXPECT_EQ(c.problem.seed, 3u);
  EXPECT_EQ(c.optimizer.kind, accel::Method::nesterov);
  EXPECT_EQ(c.accel.mode, accel::RunMode::adaptive);
  EXPECT_EQ(c.accel.N, 5);
  EXPECT_EQ(*c.accel.lambda, 1e-6);
  EXPECT_EQ(c.accel_config().reg.value, 1e-6);
  EXPECT_EQ(c.label, "demo");
}

TEST(Config, DefaultsMatchDocumentedSettings) {
  const auto c = cfg("accel.mode = online\n");
  const auto a = c.accel_config();
  EXPECT_EQ(a.window, 10);
  EXPECT_EQ(a.beta, 1.0);
  EXPECT_EQ(a.reg.kind, accel::Regularization::Kind::lambda);
  EXPECT_EQ(a.reg.value, 1e-8);
}

TEST(Config, UnknownAndRepeatedKeysReportLine) {
  EXPECT_EQ(parse_error_line("seed = 1\naccel.window = 3\n"), 2);
  EXPECT_EQ(parse_error_line("seed = 1\n\nseed = 2\n"), 3);
  EXPECT_EQ(parse_error_line("max_iters = ten\n"), 1);
  EXPECT_EQ(parse_error_line("just words\n"), 1);
  EXPECT_EQ(parse_error_line("accel.mode = sideways\n"), 1);
}

TEST(Config, ValidationRejectsInconsistentSettings) {
  EXPECT_THROW(cfg("accel.mode = online\naccel.lambda = 1\naccel.tau = 1\n"), accel::ValidationError);
  EXPECT_THROW(cfg("accel.mode = adaptive\n"), accel::ValidationError);
  EXPECT_THROW(cfg("accel.mode = online\noptimizer.kind = nesterov\n"), accel::ValidationError);
  EXPECT_THROW(cfg("accel.mode = adaptive\noptimizer.kind = nesterov\nnoise.sigma = 0.1\n"),
               accel::ValidationError);
  EXPECT_THROW(cfg("accel.mode = online\naccel.beta = 0\n"), accel::ValidationError);
  EXPECT_THROW(cfg("accel.mode = online\naccel.s = 0.5\naccel.alpha = 1.2\n"), accel::ValidationError);
  EXPECT_THROW(cfg("problem.kind = libsvm\n"), accel::ValidationError);
  EXPECT_THROW(cfg("problem.kappa = 0\n"), accel::ValidationError);
}

TEST(Config, LoadSetsLabelFromPath) {
  const std::string path = temp_path("label.cfg");
  std::ofstream(path) << "seed = 2\n";
  EXPECT_EQ(accel::load_config(path).label, path);
  std::remove(path.c_str());
  EXPECT_THROW(accel::load_config(path), accel::ValidationError);
}

// ── Trace CSV ──

TEST(Trace, RoundTripIsExact) {
  accel::RunTrace t;
  t.rows.push_back({0, 0.1, 1.0 / 3.0, 1e-300, 0.0, 0, 0});
  t.rows.push_back({1, -2.5e-17, std::nextafter(1.0, 2.0), 4.9e-324, 12.75, 1, 123456789});
  t.rows.push_back({7, 3.0, 0.5, 0.25, 1.0, 2, 0});
  std::istringstream in(accel::format_trace(t));
  EXPECT_EQ(accel::parse_trace(in).rows, t.rows);
}

TEST(Trace, HeaderIsFixed) {
  accel::RunTrace t;
  const std::string text = accel::format_trace(t);
  EXPECT_EQ(text, std::string(accel::kTraceHeader) + "\n");
}

TEST(Trace, MalformedInputRejected) {
  std::istringstream bad_header("iter,f\n0,1\n");
  EXPECT_THROW(accel::parse_trace(bad_header), accel::ParseError);
  std::istringstream short_row(std::string(accel::kTraceHeader) + "\n0,1,2\n");
  EXPECT_THROW(accel::parse_trace(short_row), accel::ParseError);
  std::istringstream order(std::string(accel::kTraceHeader) + "\n1,1,1,1,1,0,0\n1,1,1,1,1,0,0\n");
  EXPECT_THROW(accel::parse_trace(order), accel::ParseError);
}

TEST(Trace, FileRoundTrip) {
  auto c = cfg(kQuadGd);
  c.output = temp_path("trace.csv");
  const auto t = accel::run_experiment(c);
  EXPECT_EQ(accel::read_trace(c.output).rows, t.rows);
  std::remove(c.output.c_str());
}

// ── Runs ──

TEST(Run, GradientDescentMatchesEigenbasisClosedForm) {
  const auto c = cfg(kQuadGd);
  const auto t = accel::run_experiment(c);
  const auto q = accel::synth_quadratic(30, 1e-2, 4);
  // x0 = 0, so x_k - x* = -Q diag((1 - λ)^k) Qᵀ x*, ∇f = Q diag(λ (1 - λ)^k) Qᵀ (-x*).
  const Vector w = q.basis.transpose() * (-q.x_star);
  ASSERT_EQ(t.rows.size(), 61u);
  for (const auto& row : t.rows) {
    const Vector decay = (1.0 - q.eigenvalues.array()).pow(static_cast<double>(row.iter));
    const Vector gk = q.eigenvalues.cwiseProduct(decay).cwiseProduct(w);
    const double f = 0.5 * (q.eigenvalues.cwiseProduct(decay.cwiseProduct(decay))).dot(w.cwiseAbs2());
    ASSERT_NEAR(row.grad_norm, gk.norm(), 1e-8 * gk.norm()) << row.iter;
    ASSERT_NEAR(row.f_val, f, 1e-8 * f) << row.iter;
    ASSERT_NEAR(row.resid_norm, row.grad_norm, 1e-15 * row.grad_norm);
    ASSERT_EQ(row.branch, 0);
  }
}

TEST(Run, DeterministicBytes) {
  for (const char* extra : {"accel.mode = online\n", "accel.mode = offline\naccel.tau = 0.5\n",
                            "accel.mode = online\nnoise.sigma = 1e-3\n"}) {
    const auto c = cfg(std::string(kQuadGd) + extra);
    EXPECT_EQ(accel::format_trace(accel::run_experiment(c)),
              accel::format_trace(accel::run_experiment(c)));
  }
  const auto s = cfg("problem.kind = logistic\nproblem.n = 50\nproblem.d = 5\noptimizer.kind = saga\n"
                     "accel.mode = online\nmax_iters = 50\nseed = 9\n");
  EXPECT_EQ(accel::format_trace(accel::run_experiment(s)), accel::format_trace(accel::run_experiment(s)));
}

TEST(Run, RowsIncreaseAndOfflineMarksExtrapolates) {
  const auto c = cfg(std::string(kQuadGd) + "accel.mode = offline\naccel.N = 5\naccel.lambda = 0\n");
  const auto t = accel::run_experiment(c);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    ASSERT_GT(t.rows[k].iter, t.rows[k - 1].iter);
    ASSERT_EQ(t.rows[k].branch != 0, t.rows[k].iter % 5 == 0) << t.rows[k].iter;
  }
}

TEST(Run, ToleranceStopsEarly) {
  auto c = cfg(kQuad + "accel.mode = online\ntol = 1e-6\nmax_iters = 200\n");
  const auto t = accel::run_experiment(c);
  EXPECT_LE(t.rows.back().grad_norm, 1e-6);
  EXPECT_LT(t.rows.back().iter, 200);
}

TEST(Run, DivergenceAborts) {
  const auto c = cfg(kQuad + "optimizer.h = 3\nmax_iters = 5000\n");
  const auto t = accel::run_experiment(c);
  EXPECT_TRUE(t.aborted);
  EXPECT_TRUE(std::isfinite(t.rows.back().f_val));
}

TEST(Run, OnlineRnaBeatsGradientOnLogistic) {
  const std::string base =
      "problem.kind = logistic\nproblem.n = 200\nproblem.d = 20\nproblem.kappa = 1e-3\n"
      "max_iters = 20000\ntol = 1e-8\n";
  const auto gd = accel::run_experiment(cfg(base));
  const auto rna = accel::run_experiment(cfg(base + "accel.mode = online\n"));
  const auto a = accel::iterations_to(gd, 1e-8), b = accel::iterations_to(rna, 1e-8);
  ASSERT_TRUE(a && b);
  EXPECT_LT(*b, *a);
}

// ── Compare ──

TEST(Compare, OnlineRnaReachesToleranceFirst) {
  const std::string base = "problem.d = 30\nproblem.kappa = 1e-3\nseed = 4\nmax_iters = 3000\n";
  const auto cmp = accel::compare({cfg(base + "label = gd\n"),
                                   cfg(base + "accel.mode = online\nlabel = rna\n")},
                                  1e-8, 2);
  ASSERT_EQ(cmp.traces.size(), 2u);
  ASSERT_TRUE(cmp.iters_to_tol[1].has_value());
  EXPECT_TRUE(!cmp.iters_to_tol[0] || *cmp.iters_to_tol[1] < *cmp.iters_to_tol[0]);
  EXPECT_EQ(cmp.wide_csv.substr(0, cmp.wide_csv.find('\n')), "iter,gd,rna");
}

TEST(Compare, IdenticalConfigsGiveIdenticalColumns) {
  const auto c = cfg(std::string(kQuadGd) + "accel.mode = online\nlabel = same\n");
  const auto cmp = accel::compare({c, c}, 1e-8);
  EXPECT_EQ(cmp.traces[0].rows, cmp.traces[1].rows);
  std::istringstream in(cmp.wide_csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,same,same#2");
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.rfind(',');
    ASSERT_EQ(line.substr(a + 1, b - a - 1), line.substr(b + 1));
  }
}

TEST(Compare, MismatchedProblemsRejected) {
  EXPECT_THROW(accel::compare({cfg(kQuadGd), cfg("problem.d = 10\n")}, 1e-8), accel::ValidationError);
  EXPECT_THROW(accel::compare({cfg(kQuadGd)}, 1e-8), accel::ValidationError);
}

TEST(Compare, AdaptiveNotWorseThanNesterovWhenRnaFires) {
  const std::string base =
      "problem.d = 50\nproblem.kappa = 1e-4\nseed = 2\noptimizer.kind = nesterov\nmax_iters = 400\n";
  const auto cmp = accel::compare({cfg(base + "label = nesterov\n"),
                                   cfg(base + "accel.mode = adaptive\nlabel = adaptive\n")},
                                  1e-8);
  const auto& nest = cmp.traces[0].rows;
  const auto& adap = cmp.traces[1].rows;
  ASSERT_EQ(nest.size(), adap.size());
  // Inside the first window the accepted point on the RNA branch is z, which
  // can trail the plain gradient step; from one full window on it must not.
  bool fired = false;
  int worse = 0;
  for (std::size_t k = 0; k < adap.size(); ++k) {
    fired |= adap[k].branch != 0;
    if (fired && k >= 10 && adap[k].f_val > nest[k].f_val) ++worse;
  }
  EXPECT_TRUE(fired);
  EXPECT_EQ(worse, 0);
}

// ── Certify ──

TEST(Certify, NoiselessOfflineRunHasNoViolations) {
  for (const char* reg : {"accel.lambda = 0\n", "accel.tau = 0.5\n"}) {
    const auto c = cfg(std::string(kQuadGd) + "accel.mode = offline\naccel.N = 6\n" + reg);
    const auto rep = accel::certify(accel::run_experiment(c), c);
    EXPECT_GT(rep.checked, 0);
    EXPECT_TRUE(rep.violations.empty()) << rep.format();
    EXPECT_FALSE(rep.plateau.has_value());
  }
}

TEST(Certify, GradientDescentEnvelope) {
  const auto c = cfg(kQuadGd);
  const auto rep = accel::certify(accel::run_experiment(c), c);
  EXPECT_EQ(rep.checked, 61);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(Certify, PerfectConditioningIsExactAfterFirstWindow) {
  const auto c = cfg("problem.d = 8\nproblem.kappa = 1\naccel.mode = offline\naccel.N = 3\n"
                     "accel.lambda = 0\nmax_iters = 9\n");
  const auto t = accel::run_experiment(c);
  const auto rep = accel::certify(t, c);
  EXPECT_TRUE(rep.violations.empty());
  for (const auto& row : t.rows) {
    if (row.iter >= 3) EXPECT_LE(row.resid_norm, 1e-14);
  }
}

TEST(Certify, LargeNoiseIsReportedWithPlateau) {
  const auto c = cfg(std::string(kQuadGd) +
                     "accel.mode = offline\naccel.N = 6\naccel.lambda = 0\nnoise.sigma = 1\n");
  const auto rep = accel::certify(accel::run_experiment(c), c);
  EXPECT_FALSE(rep.violations.empty());
  ASSERT_TRUE(rep.plateau.has_value());
  EXPECT_NE(rep.format().find("noise plateau"), std::string::npos);
}

TEST(Certify, UnsupportedSettings) {
  const auto lc = cfg("problem.kind = logistic\nproblem.n = 20\nproblem.d = 3\n");
  EXPECT_THROW(accel::certify(accel::run_experiment(lc), lc), accel::UnsupportedError);
  const auto rc = cfg(std::string(kQuadGd) + "accel.mode = offline\naccel.lambda = 1e-3\n");
  EXPECT_THROW(accel::certify(accel::run_experiment(rc), rc), accel::UnsupportedError);
}
