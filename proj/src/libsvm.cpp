#include "accelkit/libsvm.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "accelkit/errors.hpp"

namespace accel {
namespace {

double parse_double(const std::string& token, int line, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError("libsvm line " + std::to_string(line) + ": bad " + what + " '" + token + "'",
                     line);
  }
}

}  // namespace

LibsvmData read_libsvm(std::istream& in, Eigen::Index min_features) {
  std::vector<double> labels;
  std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
  Eigen::Index max_index = 0;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream tokens(raw);
    std::string token;
    if (!(tokens >> token)) continue;

    const double label = parse_double(token, line, "label");
    const auto row = static_cast<Eigen::Index>(labels.size());
    labels.push_back(label > 0 ? 1.0 : -1.0);

    std::set<long long> seen;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
        throw ParseError("libsvm line " + std::to_string(line) + ": expected index:value, got '" +
                             token + "'",
                         line);
      }
      long long index = 0;
      const char* first = token.data();
      const char* last = token.data() + colon;
      const auto [ptr, ec] = std::from_chars(first, last, index);
      if (ec != std::errc() || ptr != last || index < 1) {
        throw ParseError("libsvm line " + std::to_string(line) + ": bad feature index in '" +
                             token + "'",
                         line);
      }
      if (!seen.insert(index).second) {
        throw ParseError("libsvm line " + std::to_string(line) + ": duplicate feature index " +
                             std::to_string(index),
                         line);
      }
      const double v = parse_double(token.substr(colon + 1), line, "feature value");
      entries.emplace_back(row, static_cast<Eigen::Index>(index - 1), v);
      max_index = std::max<Eigen::Index>(max_index, index);
    }
  }
  if (labels.empty()) throw ParseError("libsvm: no samples", line);

  LibsvmData out;
  out.features = Matrix::Zero(static_cast<Eigen::Index>(labels.size()),
                              std::max(max_index, min_features));
  for (const auto& [r, c, v] : entries) out.features(r, c) = v;
  out.labels = Eigen::Map<const Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  return out;
}

LibsvmData read_libsvm_file(const std::string& path, Eigen::Index min_features) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open LIBSVM file '" + path + "'");
  return read_libsvm(in, min_features);
}

}  // namespace accel
