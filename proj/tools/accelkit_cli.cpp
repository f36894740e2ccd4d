// accelkit command-line harness: run, compare, certify, cheb.

#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "accelkit/chebyshev.hpp"
#include "accelkit/experiment.hpp"

namespace {

int cmd_run(const std::string& path) {
  const accel::ExperimentConfig cfg = accel::load_config(path);
  const accel::RunTrace trace = accel::run_experiment(cfg);
  if (cfg.output.empty()) std::cout << accel::format_trace(trace);
  if (!trace.rows.empty()) {
    const accel::TraceRow& last = trace.rows.back();
    std::cerr << trace.label << ": " << last.iter << " iterations, f = " << accel::format_double(last.f_val)
              << ", grad_norm = " << accel::format_double(last.grad_norm) << "\n";
  }
  if (trace.aborted) {
    std::cerr << "run aborted: non-finite objective after iteration "
              << (trace.rows.empty() ? 0 : trace.rows.back().iter) << "\n";
    return 3;
  }
  return 0;
}

int cmd_compare(const std::vector<std::string>& paths, double tol, const std::string& output) {
  std::vector<accel::ExperimentConfig> configs;
  for (const std::string& p : paths) configs.push_back(accel::load_config(p));
  const accel::Comparison cmp = accel::compare(configs, tol);
  if (output.empty()) {
    std::cout << cmp.wide_csv;
  } else {
    accel::write_file_atomic(output, cmp.wide_csv);
  }
  std::cerr << cmp.summary;
  return 0;
}

int cmd_certify(const std::string& trace_path, const std::string& config_path) {
  const accel::RunTrace trace = accel::read_trace(trace_path);
  const accel::ExperimentConfig cfg = accel::load_config(config_path);
  const accel::CertificationReport rep = accel::certify(trace, cfg);
  std::cout << rep.format();
  return rep.violations.empty() ? 0 : 1;
}

int cmd_cheb(int N, double kappa, double tau, double upper, int grid) {
  const double u = upper > 0.0 ? upper : kappa;
  const accel::ChebyshevCertificate cert = accel::constrained_chebyshev(N, u, tau, grid);
  std::cout << accel::certificate_csv_header() << "\n" << accel::certificate_csv_row(cert) << "\n";
  std::cerr << "coefficients:";
  for (Eigen::Index j = 0; j < cert.coefficients.size(); ++j) {
    std::cerr << " " << accel::format_double(cert.coefficients(j));
  }
  std::cerr << "\n";
  if (!cert.converged) std::cerr << "warning: barrier solver stopped before the gap target\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized and constrained nonlinear acceleration toolkit"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", run_config, "Config file")->required();

  std::vector<std::string> compare_configs;
  double compare_tol = 1e-8;
  std::string compare_output;
  auto* cmp = app.add_subcommand("compare", "Run several configs on one problem");
  cmp->add_option("configs", compare_configs, "Config files")->required()->expected(2, -1);
  cmp->add_option("--tol", compare_tol, "Gradient-norm tolerance for the summary");
  cmp->add_option("-o,--output", compare_output, "Wide CSV path (stdout if omitted)");

  std::string cert_trace, cert_config;
  auto* cert = app.add_subcommand("certify", "Check a trace against the rate envelopes");
  cert->add_option("trace", cert_trace, "Trace CSV")->required();
  cert->add_option("config", cert_config, "Config the trace was produced with")->required();

  int cheb_N = 1;
  double cheb_kappa = 0.25;
  double cheb_tau = std::numeric_limits<double>::infinity();
  double cheb_upper = 0.0;
  int cheb_grid = 2000;
  auto* cheb = app.add_subcommand("cheb", "Constrained Chebyshev value on [0, kappa]");
  cheb->add_option("--N", cheb_N, "Degree")->required();
  cheb->add_option("--kappa", cheb_kappa, "Right end of the interval")->required();
  cheb->add_option("--tau", cheb_tau, "Norm slack (default: unconstrained)");
  cheb->add_option("--upper", cheb_upper, "Override the interval end, e.g. 1-kappa");
  cheb->add_option("--grid", cheb_grid, "Grid points");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config);
    if (*cmp) return cmd_compare(compare_configs, compare_tol, compare_output);
    if (*cert) return cmd_certify(cert_trace, cert_config);
    if (*cheb) return cmd_cheb(cheb_N, cheb_kappa, cheb_tau, cheb_upper, cheb_grid);
  } catch (const accel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
