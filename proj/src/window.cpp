#include "accelkit/window.hpp"

#include <string>

namespace accel {

AccelWindow::AccelWindow(Eigen::Index dim, int capacity)
    : dim_(dim), capacity_(capacity) {
  if (capacity < 1) {
    throw ValidationError("AccelWindow: capacity must be >= 1, got " +
                          std::to_string(capacity));
  }
  if (dim < 1) {
    throw ValidationError("AccelWindow: dimension must be >= 1");
  }
  X_.resize(dim, capacity);
  Y_.resize(dim, capacity);
  R_.resize(dim, capacity);
  gram_.resize(0, 0);
}

AccelWindow AccelWindow::from_blocks(const Matrix& X, const Matrix& Y, int capacity) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw StructuralError("AccelWindow::from_blocks: X and Y shapes differ");
  }
  if (X.cols() == 0) {
    throw StructuralError("AccelWindow::from_blocks: empty blocks");
  }
  const int cap = capacity > 0 ? capacity : static_cast<int>(X.cols());
  AccelWindow w(X.rows(), cap);
  for (Eigen::Index j = 0; j < X.cols(); ++j) w.push(X.col(j), Y.col(j));
  return w;
}

void AccelWindow::clear() {
  head_ = 0;
  size_ = 0;
  gram_.resize(0, 0);
}

void AccelWindow::push(const Vector& x, const Vector& y) {
  if (x.size() != dim_ || y.size() != dim_) {
    throw StructuralError("AccelWindow::push: expected dimension " +
                          std::to_string(dim_) + ", got " + std::to_string(x.size()) +
                          " and " + std::to_string(y.size()));
  }
  if (full()) {
    const int k = size_ - 1;
    gram_ = gram_.bottomRightCorner(k, k).eval();
    head_ = (head_ + 1) % capacity_;
    --size_;
  }

  const Vector r = y - x;
  const int k = size_;

  // Cross products against the stored columns, taken in the (at most two)
  // contiguous runs of the ring buffer.
  Vector cross(k);
  const int first_run = std::min(k, capacity_ - head_);
  if (first_run > 0) {
    cross.head(first_run).noalias() = R_.middleCols(head_, first_run).transpose() * r;
  }
  if (k > first_run) {
    cross.tail(k - first_run).noalias() = R_.leftCols(k - first_run).transpose() * r;
  }

  Matrix grown(k + 1, k + 1);
  grown.topLeftCorner(k, k) = gram_;
  grown.col(k).head(k) = cross;
  grown.row(k).head(k) = cross.transpose();
  grown(k, k) = r.squaredNorm();
  gram_ = std::move(grown);

  const int s = (head_ + k) % capacity_;
  X_.col(s) = x;
  Y_.col(s) = y;
  R_.col(s) = r;
  ++size_;
}

Matrix AccelWindow::xs() const {
  Matrix out(dim_, size_);
  for (int j = 0; j < size_; ++j) out.col(j) = x(j);
  return out;
}

Matrix AccelWindow::ys() const {
  Matrix out(dim_, size_);
  for (int j = 0; j < size_; ++j) out.col(j) = y(j);
  return out;
}

Matrix AccelWindow::residuals() const {
  Matrix out(dim_, size_);
  for (int j = 0; j < size_; ++j) out.col(j) = r(j);
  return out;
}

Vector AccelWindow::combine(const Matrix& block, const Vector& c) const {
  if (c.size() != size_) {
    throw StructuralError("AccelWindow: coefficient length " + std::to_string(c.size()) +
                          " does not match window size " + std::to_string(size_));
  }
  Vector out = Vector::Zero(dim_);
  for (int j = 0; j < size_; ++j) out.noalias() += c(j) * block.col(slot(j));
  return out;
}

}  // namespace accel
