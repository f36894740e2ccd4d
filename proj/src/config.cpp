#include "accelkit/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "accelkit/analysis.hpp"
#include "accelkit/trace.hpp"

namespace accel {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Field {
  const std::string& value;
  int line;
  const std::string& key;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line) + ": " + key + ": " + what, line);
  }

  double real() const {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0' || std::isnan(v)) fail("expected a number, got '" + value + "'");
    return v;
  }

  std::int64_t integer() const {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || *end != '\0') fail("expected an integer, got '" + value + "'");
    return v;
  }

  std::uint64_t unsigned_integer() const {
    const std::int64_t v = integer();
    if (v < 0) fail("expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }

  bool boolean() const {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    fail("expected true or false, got '" + value + "'");
  }
};

using Setter = std::function<void(ExperimentConfig&, const Field&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"problem.kind",
       [](ExperimentConfig& c, const Field& f) {
         if (f.value != "quadratic" && f.value != "logistic" && f.value != "libsvm") {
           f.fail("expected quadratic, logistic or libsvm");
         }
         c.problem.kind = f.value;
       }},
      {"problem.d", [](ExperimentConfig& c, const Field& f) { c.problem.d = f.integer(); }},
      {"problem.n", [](ExperimentConfig& c, const Field& f) { c.problem.n = f.integer(); }},
      {"problem.kappa", [](ExperimentConfig& c, const Field& f) { c.problem.kappa = f.real(); }},
      {"problem.seed",
       [](ExperimentConfig& c, const Field& f) { c.problem.seed = f.unsigned_integer(); }},
      {"problem.file", [](ExperimentConfig& c, const Field& f) { c.problem.file = f.value; }},
      {"problem.normalize",
       [](ExperimentConfig& c, const Field& f) { c.problem.normalize = f.boolean(); }},
      {"optimizer.kind",
       [](ExperimentConfig& c, const Field& f) {
         static const std::map<std::string, Method> names = {{"gradient", Method::gradient},
                                                             {"nesterov", Method::nesterov},
                                                             {"sgd", Method::sgd},
                                                             {"saga", Method::saga}};
         const auto it = names.find(f.value);
         if (it == names.end()) f.fail("expected gradient, nesterov, sgd or saga");
         c.optimizer.kind = it->second;
       }},
      {"optimizer.h", [](ExperimentConfig& c, const Field& f) { c.optimizer.h = f.real(); }},
      {"optimizer.batch",
       [](ExperimentConfig& c, const Field& f) { c.optimizer.batch = static_cast<int>(f.integer()); }},
      {"accel.mode",
       [](ExperimentConfig& c, const Field& f) {
         static const std::map<std::string, RunMode> names = {{"none", RunMode::none},
                                                              {"offline", RunMode::offline},
                                                              {"online", RunMode::online},
                                                              {"adaptive", RunMode::adaptive}};
         const auto it = names.find(f.value);
         if (it == names.end()) f.fail("expected none, offline, online or adaptive");
         c.accel.mode = it->second;
       }},
      {"accel.N", [](ExperimentConfig& c, const Field& f) { c.accel.N = static_cast<int>(f.integer()); }},
      {"accel.beta", [](ExperimentConfig& c, const Field& f) { c.accel.beta = f.real(); }},
      {"accel.lambda", [](ExperimentConfig& c, const Field& f) { c.accel.lambda = f.real(); }},
      {"accel.tau", [](ExperimentConfig& c, const Field& f) { c.accel.tau = f.real(); }},
      {"accel.alpha", [](ExperimentConfig& c, const Field& f) { c.accel.alpha = f.real(); }},
      {"accel.s", [](ExperimentConfig& c, const Field& f) { c.accel.s = f.real(); }},
      {"accel.r", [](ExperimentConfig& c, const Field& f) { c.accel.r = f.real(); }},
      {"accel.adaptive_rule",
       [](ExperimentConfig& c, const Field& f) {
         if (f.value == "iterate") {
           c.accel.adaptive_rule = AdaptiveRule::iterate;
         } else if (f.value == "descent") {
           c.accel.adaptive_rule = AdaptiveRule::descent;
         } else {
           f.fail("expected iterate or descent");
         }
       }},
      {"noise.sigma", [](ExperimentConfig& c, const Field& f) { c.noise_sigma = f.real(); }},
      {"noise.seed", [](ExperimentConfig& c, const Field& f) { c.noise_seed = f.unsigned_integer(); }},
      {"max_iters", [](ExperimentConfig& c, const Field& f) { c.max_iters = f.integer(); }},
      {"seed", [](ExperimentConfig& c, const Field& f) { c.seed = f.unsigned_integer(); }},
      {"tol", [](ExperimentConfig& c, const Field& f) { c.tol = f.real(); }},
      {"output", [](ExperimentConfig& c, const Field& f) { c.output = f.value; }},
      {"label", [](ExperimentConfig& c, const Field& f) { c.label = f.value; }},
      {"trace.wall_clock", [](ExperimentConfig& c, const Field& f) { c.wall_clock = f.boolean(); }},
  };
  return table;
}

}  // namespace

std::string ProblemSpec::key() const {
  if (kind == "quadratic") {
    return "quadratic d=" + std::to_string(d) + " kappa=" + format_double(kappa) +
           " seed=" + std::to_string(seed);
  }
  const std::string source = kind == "libsvm" ? "file=" + file
                                              : "n=" + std::to_string(n) + " d=" + std::to_string(d) +
                                                    " seed=" + std::to_string(seed);
  return kind + " " + source + " kappa=" + format_double(kappa) +
         " normalize=" + (normalize ? "1" : "0");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::gradient: return "gradient";
    case Method::nesterov: return "nesterov";
    case Method::sgd: return "sgd";
    case Method::saga: return "saga";
  }
  return "?";
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::none: return "none";
    case RunMode::offline: return "offline";
    case RunMode::online: return "online";
    case RunMode::adaptive: return "adaptive";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  const auto bad = [](const std::string& what) { throw ValidationError("config: " + what); };
  if (problem.kind == "quadratic" || problem.kind == "logistic") {
    if (problem.d < 1) bad("problem.d must be >= 1");
  }
  if (problem.kind == "logistic" && problem.n < 1) bad("problem.n must be >= 1");
  if (problem.kind == "libsvm" && problem.file.empty()) bad("problem.file is required for libsvm");
  if (problem.kind == "quadratic" && !(problem.kappa > 0.0 && problem.kappa <= 1.0)) {
    bad("problem.kappa must lie in (0, 1] for quadratics");
  }
  if (problem.kind != "quadratic" && !(problem.kappa > 0.0 && problem.kappa < 1.0)) {
    bad("problem.kappa must lie in (0, 1) for logistic problems");
  }
  if (optimizer.h < 0.0) bad("optimizer.h must be > 0 (or 0 for the default)");
  if (optimizer.batch < 1) bad("optimizer.batch must be >= 1");
  if (max_iters < 0) bad("max_iters must be >= 0");
  if (!(tol >= 0.0)) bad("tol must be >= 0");
  if (!(noise_sigma >= 0.0)) bad("noise.sigma must be >= 0");

  if (accel.mode == RunMode::none) return;
  if (accel.lambda && accel.tau) bad("set only one of accel.lambda and accel.tau");
  if (accel.r != 0.0 && accel.tau) bad("accel.r schedules lambda; drop accel.tau");
  if (accel.s != 0.0 && accel.lambda) bad("accel.s schedules tau; drop accel.lambda");
  if (accel.r != 0.0 && accel.s != 0.0) bad("set only one of accel.r and accel.s");
  schedule_exponents({1.0, 0.0, accel.alpha, accel.s, accel.r});
  accel_config().validate();
  if (accel.mode == RunMode::online && optimizer.kind == Method::nesterov) {
    bad("online mode re-injects the extrapolate and discards momentum; use accel.mode = adaptive");
  }
  if (accel.mode == RunMode::adaptive && optimizer.kind != Method::nesterov) {
    bad("adaptive mode wraps Nesterov's method; set optimizer.kind = nesterov");
  }
  if (accel.mode == RunMode::adaptive && noise_sigma > 0.0) {
    bad("adaptive mode evaluates exact gradients; noise.sigma must be 0");
  }
}

AccelConfig ExperimentConfig::accel_config() const {
  AccelConfig c;
  c.window = accel.N;
  c.beta = accel.beta;
  c.adaptive_rule = accel.adaptive_rule;
  if (accel.tau || accel.s != 0.0) {
    c.reg = Regularization::tau(accel.tau.value_or(0.0));
  } else {
    c.reg = Regularization::lambda(accel.lambda.value_or(accel.r != 0.0 ? 0.0 : 1e-8));
  }
  switch (accel.mode) {
    case RunMode::offline: c.mode = AccelMode::offline_restart; break;
    case RunMode::adaptive: c.mode = AccelMode::adaptive; break;
    default: c.mode = AccelMode::online; break;
  }
  return c;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool problem_seed = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line) + ": expected 'key = value'", line);
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'", line);
    }
    if (!seen.insert(key).second) {
      throw ParseError("line " + std::to_string(line) + ": repeated key '" + key + "'", line);
    }
    it->second(cfg, Field{value, line, key});
    problem_seed |= key == "problem.seed";
  }
  if (!problem_seed) cfg.problem.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  ExperimentConfig cfg = parse_config(in);
  if (cfg.label.empty()) cfg.label = path;
  return cfg;
}

}  // namespace accel
