#pragma once

#include <Eigen/Dense>

#include "accelkit/linalg.hpp"

namespace accel {

/// Sliding window of iterate pairs (x_j, y_{j-1}) with x_j = g(y_{j-1}).
///
/// Residual convention: column j of R is y_{j-1} - x_j, i.e. r(y) = y - g(y).
/// Columns live in a ring buffer; the Gram matrix RᵀR is kept in
/// chronological order and updated with one matrix-vector product per push,
/// so a push costs O(N d). When the window is full the oldest pair is
/// dropped.
class AccelWindow {
 public:
  AccelWindow(Eigen::Index dim, int capacity);

  /// Window holding the columns of X and Y in the given (chronological) order.
  static AccelWindow from_blocks(const Matrix& X, const Matrix& Y, int capacity = -1);

  void push(const Vector& x, const Vector& y);
  void clear();

  int size() const { return size_; }
  int capacity() const { return capacity_; }
  Eigen::Index dim() const { return dim_; }
  bool empty() const { return size_ == 0; }
  bool full() const { return size_ == capacity_; }

  /// Chronological Gram RᵀR of order size().
  const Matrix& gram() const { return gram_; }

  // Column j in chronological order, 0 = oldest.
  auto x(int j) const { return X_.col(slot(j)); }
  auto y(int j) const { return Y_.col(slot(j)); }
  auto r(int j) const { return R_.col(slot(j)); }

  Matrix xs() const;
  Matrix ys() const;
  Matrix residuals() const;

  /// Σ c_j x_j, Σ c_j y_j and Σ c_j r_j with c in chronological order.
  Vector combine_x(const Vector& c) const { return combine(X_, c); }
  Vector combine_y(const Vector& c) const { return combine(Y_, c); }
  Vector combine_r(const Vector& c) const { return combine(R_, c); }

 private:
  int slot(int j) const { return (head_ + j) % capacity_; }
  Vector combine(const Matrix& block, const Vector& c) const;

  Eigen::Index dim_;
  int capacity_;
  int head_ = 0;
  int size_ = 0;
  Matrix X_, Y_, R_;
  Matrix gram_;
};

}  // namespace accel
