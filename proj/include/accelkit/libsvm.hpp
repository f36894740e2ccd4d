#pragma once

#include <istream>
#include <string>

#include "accelkit/linalg.hpp"

namespace accel {

/// Dense copy of a LIBSVM file: one sample per line,
/// `<label> <index>:<value> ...` with 1-based indices. Labels 0 and -1 map to
/// -1, any other value to its sign. Blank lines and `#` comments are skipped.
struct LibsvmData {
  Matrix features;  ///< n×d
  Vector labels;    ///< ±1
};

/// Throws ParseError carrying the 1-based line number of the first malformed
/// line. `min_features` pads the feature count (useful for test splits).
LibsvmData read_libsvm(std::istream& in, Eigen::Index min_features = 0);
LibsvmData read_libsvm_file(const std::string& path, Eigen::Index min_features = 0);

}  // namespace accel
