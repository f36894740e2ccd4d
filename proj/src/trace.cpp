#include "accelkit/trace.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "accelkit/errors.hpp"

namespace accel {
namespace {

double parse_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw ParseError("trace: bad number '" + s + "' on line " + std::to_string(line), line);
  }
  return v;
}

std::int64_t parse_int(const std::string& s, int line) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE) {
    throw ParseError("trace: bad integer '" + s + "' on line " + std::to_string(line), line);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_trace(const RunTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.iter) + ',' + format_double(r.f_val) + ',' + format_double(r.grad_norm) +
           ',' + format_double(r.resid_norm) + ',' + format_double(r.coeff_norm) + ',' +
           std::to_string(r.branch) + ',' + std::to_string(r.wall_ns) + '\n';
  }
  return out;
}

RunTrace parse_trace(std::istream& in) {
  RunTrace trace;
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line) || (++lineno, line != kTraceHeader)) {
    throw ParseError("trace: missing or unexpected header", 1);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 7) {
      throw ParseError("trace: expected 7 fields on line " + std::to_string(lineno), lineno);
    }
    TraceRow r;
    r.iter = parse_int(fields[0], lineno);
    r.f_val = parse_double(fields[1], lineno);
    r.grad_norm = parse_double(fields[2], lineno);
    r.resid_norm = parse_double(fields[3], lineno);
    r.coeff_norm = parse_double(fields[4], lineno);
    r.branch = static_cast<int>(parse_int(fields[5], lineno));
    r.wall_ns = parse_int(fields[6], lineno);
    if (!trace.rows.empty() && r.iter <= trace.rows.back().iter) {
      throw ParseError("trace: iterations not increasing on line " + std::to_string(lineno), lineno);
    }
    trace.rows.push_back(r);
  }
  return trace;
}

RunTrace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace '" + path + "'");
  return parse_trace(in);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw ValidationError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

void write_trace(const RunTrace& trace, const std::string& path) {
  write_file_atomic(path, format_trace(trace));
}

}  // namespace accel
