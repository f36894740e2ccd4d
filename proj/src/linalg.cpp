#include "accelkit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace accel {

double spectral_norm_sq(const Matrix& G) {
  if (G.size() == 0) return 0.0;
  if (G.rows() != G.cols()) {
    throw StructuralError("spectral_norm_sq: matrix is not square");
  }
  if (G.rows() == 1) return std::max(G(0, 0), 0.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  return std::max(eig.eigenvalues().maxCoeff(), 0.0);
}

Vector solve_spd(const Matrix& A, const Vector& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw StructuralError("solve_spd: dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("solve_spd: matrix is not positive definite");
  }
  const auto& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) > 0.0) || !std::isfinite(L(i, i))) {
      throw SingularMatrixError("solve_spd: non-positive pivot");
    }
  }
  Vector z = llt.solve(b);
  z += llt.solve(b - A * z);
  return z;
}

}  // namespace accel
