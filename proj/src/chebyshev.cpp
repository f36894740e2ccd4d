#include "accelkit/chebyshev.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace accel {
namespace {

Matrix monomials(const Vector& xs, int n) {
  Matrix M(xs.size(), n);
  for (Eigen::Index k = 0; k < xs.size(); ++k) {
    double v = 1.0;
    for (int j = 0; j < n; ++j) {
      M(k, j) = v;
      v *= xs(k);
    }
  }
  return M;
}

Vector grid(double upper, int size) {
  return Vector::LinSpaced(size, 0.0, upper);
}

double max_abs_on(const Vector& coeffs, double upper, int size) {
  double m = 0.0;
  const Vector xs = grid(upper, size);
  for (Eigen::Index k = 0; k < xs.size(); ++k) m = std::max(m, std::abs(poly_eval(coeffs, xs(k))));
  return m;
}

// Epigraph form in the variables v = (q, t) with p = p0 + Z q:
//   minimize t  s.t.  -t ≤ p(x_k) ≤ t,  ‖q‖² ≤ rho2 (when bounded).
class Barrier {
 public:
  Barrier(const Vector& c, const Matrix& A, double rho2, bool ball)
      : c_(c), A_(A), rho2_(rho2), ball_(ball), nq_(A.cols()) {}

  int constraints() const { return 2 * static_cast<int>(c_.size()) + (ball_ ? 1 : 0); }

  // +inf outside the domain.
  double phi(const Vector& v, double s) const {
    const Vector q = v.head(nq_);
    const double t = v(nq_);
    const Vector p = c_ + A_ * q;
    double out = s * t;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double u1 = t - p(k);
      const double u2 = t + p(k);
      if (!(u1 > 0.0 && u2 > 0.0)) return std::numeric_limits<double>::infinity();
      out -= std::log(u1) + std::log(u2);
    }
    if (ball_) {
      const double w = rho2_ - q.squaredNorm();
      if (!(w > 0.0)) return std::numeric_limits<double>::infinity();
      out -= std::log(w);
    }
    return out;
  }

  void derivatives(const Vector& v, double s, Vector& g, Matrix& H) const {
    const Vector q = v.head(nq_);
    const double t = v(nq_);
    const Vector p = c_ + A_ * q;
    const Eigen::Index K = p.size();
    Vector a(K), b(K), wsum(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const double i1 = 1.0 / (t - p(k));
      const double i2 = 1.0 / (t + p(k));
      a(k) = i1 - i2;
      b(k) = i2 * i2 - i1 * i1;
      wsum(k) = i1 * i1 + i2 * i2;
    }
    g.resize(nq_ + 1);
    H.resize(nq_ + 1, nq_ + 1);
    g.head(nq_) = A_.transpose() * a;
    g(nq_) = s;
    double tt = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      g(nq_) -= 1.0 / (t - p(k)) + 1.0 / (t + p(k));
      tt += wsum(k);
    }
    H.topLeftCorner(nq_, nq_) = A_.transpose() * wsum.asDiagonal() * A_;
    H.col(nq_).head(nq_) = A_.transpose() * b;
    H.row(nq_).head(nq_) = H.col(nq_).head(nq_).transpose();
    H(nq_, nq_) = tt;
    if (ball_) {
      const double w = rho2_ - q.squaredNorm();
      g.head(nq_) += 2.0 * q / w;
      H.topLeftCorner(nq_, nq_) += (2.0 / w) * Matrix::Identity(nq_, nq_) +
                                   (4.0 / (w * w)) * q * q.transpose();
    }
  }

  // Damped Newton on phi(., s). Returns false if it stalled far from the
  // central path.
  bool center(Vector& v, double s) const {
    double decrement = 0.0;
    for (int it = 0; it < 500; ++it) {
      Vector g;
      Matrix H;
      derivatives(v, s, g, H);
      Eigen::LDLT<Matrix> ldlt(H);
      if (ldlt.info() != Eigen::Success) return false;
      const Vector step = -ldlt.solve(g);
      decrement = -g.dot(step);
      if (!(decrement >= 0.0) || !std::isfinite(decrement)) return false;
      if (decrement < 1e-9) return true;
      // Damped step of a self-concordant barrier: 1/(1+λ) stays inside the
      // Dikin ellipsoid, so only rounding can push the trial out.
      const double lam = std::sqrt(decrement);
      double alpha = lam < 0.25 ? 1.0 : 1.0 / (1.0 + lam);
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const Vector trial = v + alpha * step;
        if (std::isfinite(phi(trial, s))) {
          v = trial;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) return decrement < 1e-6;
    }
    return decrement < 1e-6;
  }

 private:
  Vector c_;
  Matrix A_;
  double rho2_;
  bool ball_;
  Eigen::Index nq_;
};

}  // namespace

double poly_eval(const Vector& coefficients, double x) {
  double out = 0.0;
  for (Eigen::Index j = coefficients.size(); j-- > 0;) out = out * x + coefficients(j);
  return out;
}

double chebyshev_optimum(int degree, double upper) {
  if (degree < 0) throw ValidationError("chebyshev_optimum: degree must be >= 0");
  if (!(upper > 0.0 && upper < 1.0)) {
    throw ValidationError("chebyshev_optimum: upper must lie in (0, 1)");
  }
  const double z = 1.0 + 2.0 * (1.0 - upper) / upper;
  return 1.0 / std::cosh(degree * std::acosh(z));
}

ChebyshevCertificate constrained_chebyshev(int degree, double upper, double tau, int grid_size) {
  if (degree < 0) throw ValidationError("constrained_chebyshev: degree must be >= 0");
  if (!(upper > 0.0 && upper < 1.0)) {
    throw ValidationError("constrained_chebyshev: upper must lie in (0, 1)");
  }
  if (!(tau >= 0.0)) throw ValidationError("constrained_chebyshev: tau must be >= 0");
  if (grid_size < 10 * (degree + 1)) {
    throw ValidationError("constrained_chebyshev: grid_size must be >= 10(N+1)");
  }

  ChebyshevCertificate cert;
  cert.degree = degree;
  cert.upper = upper;
  cert.tau = tau;
  cert.grid_size = grid_size;

  const int n = degree + 1;
  const Vector p0 = Vector::Constant(n, 1.0 / n);
  const bool ball = std::isfinite(tau);
  const double rho2 = ball ? ((1.0 + tau) * (1.0 + tau) - 1.0) / n : 0.0;

  if (n == 1 || (ball && rho2 <= 0.0)) {
    cert.coefficients = p0;
    cert.value = std::max(max_abs_on(p0, upper, grid_size), max_abs_on(p0, upper, 10 * grid_size));
    return cert;
  }

  // Orthonormal basis of the hyperplane 1ᵀp = 0.
  Eigen::HouseholderQR<Matrix> qr(Matrix::Ones(n, 1));
  const Matrix Q = qr.householderQ();
  const Matrix Z = Q.rightCols(n - 1);

  const Matrix M = monomials(grid(upper, grid_size), n);
  const Vector c = M * p0;
  const Matrix A = M * Z;
  const Barrier barrier(c, A, rho2, ball);

  Vector v = Vector::Zero(n);
  v(n - 1) = c.cwiseAbs().maxCoeff() + 1.0;
  const double m = barrier.constraints();
  double s = m / v(n - 1);
  cert.converged = false;
  for (int outer = 0; outer < 80; ++outer) {
    if (!barrier.center(v, s)) break;
    const double t = v(n - 1);
    cert.gap = m / s;
    if (cert.gap <= 1e-7 * t) {
      cert.converged = true;
      break;
    }
    s *= 8.0;
  }
  cert.coefficients = p0 + Z * v.head(n - 1);
  cert.value = std::max(max_abs_on(cert.coefficients, upper, grid_size),
                        max_abs_on(cert.coefficients, upper, 10 * grid_size));
  return cert;
}

std::string certificate_csv_header() { return "degree,upper,tau,value,gap"; }

std::string certificate_csv_row(const ChebyshevCertificate& cert) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g", cert.degree, cert.upper, cert.tau,
                cert.value, cert.gap);
  return buf;
}

}  // namespace accel
