#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace accel {

/// Row flag in the `branch` column.
enum class Branch : int {
  plain = 0,         ///< optimizer step, or RNA rejected by the adaptive test
  extrapolated = 1,  ///< the point is an extrapolate
  converged = 2,     ///< extrapolate with R c ≈ 0
};

struct TraceRow {
  std::int64_t iter = 0;
  double f_val = 0.0;
  double grad_norm = 0.0;
  /// ‖y - g(y)‖ for the plain gradient map, i.e. h‖∇f(y)‖.
  double resid_norm = 0.0;
  /// ‖c‖₂ of the coefficients behind the point, 0 when none.
  double coeff_norm = 0.0;
  int branch = 0;
  std::int64_t wall_ns = 0;

  bool operator==(const TraceRow&) const = default;
};

struct RunTrace {
  std::string label;
  std::vector<TraceRow> rows;
  /// Set when a non-finite objective stopped the run; rows end at the last
  /// finite one.
  bool aborted = false;
  /// Adaptive runs: accepted iterates that missed the sufficient-decrease
  /// condition f(x_{i+1}) ≤ f(y_i) - ‖∇f(y_i)‖²/(2L). Not serialized.
  std::int64_t descent_failures = 0;
};

inline constexpr const char* kTraceHeader = "iter,f_val,grad_norm,resid_norm,coeff_norm,branch,wall_ns";

/// CSV text, header first, floats with 17 significant digits.
std::string format_trace(const RunTrace& trace);

/// Inverse of format_trace; throws ParseError on malformed input.
RunTrace parse_trace(std::istream& in);
RunTrace read_trace(const std::string& path);

/// Writes `contents` to a temporary sibling of `path` and renames it over.
void write_file_atomic(const std::string& path, const std::string& contents);

void write_trace(const RunTrace& trace, const std::string& path);

/// %.17g formatting.
std::string format_double(double v);

}  // namespace accel
