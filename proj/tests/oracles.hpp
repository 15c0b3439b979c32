#pragma once

// Reference computations that share no code with the library: dense-matrix
// moments, d(pi/2) from an eigendecomposition of Jy, and a direct quadrature
// of the continuous Fourier transform.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Standard spin matrices, basis |j, m> with m = j - k at index k.
inline void spin_matrices(int two_j, Mat& jx, Mat& jy, Mat& jz) {
  const int n = two_j + 1;
  const double j = 0.5 * two_j;
  Mat jp = Mat::Zero(n, n);
  jz = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Mat jm = jp.adjoint();
  jx = (jp + jm) * 0.5;
  jy = (jp - jm) * cd(0.0, -0.5);
}

// exp(-i pi/2 Jy) through the spectral decomposition of Jy.
inline Eigen::MatrixXd rotation_pi_2(int two_j) {
  Mat jx, jy, jz;
  spin_matrices(two_j, jx, jy, jz);
  Eigen::SelfAdjointEigenSolver<Mat> es(jy);
  Vec phase(jy.rows());
  for (Eigen::Index k = 0; k < phase.size(); ++k) {
    phase(k) = std::exp(cd(0.0, -std::numbers::pi / 2 * es.eigenvalues()(k)));
  }
  const Mat u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return u.real();
}

inline double expect(const Mat& rho, const Mat& a) { return (rho * a).trace().real(); }

inline double var(const Mat& rho, const Mat& a) {
  const double m = expect(rho, a);
  return expect(rho, a * a) - m * m;
}

inline double cov(const Mat& rho, const Mat& a, const Mat& b) {
  return 0.5 * expect(rho, a * b + b * a) - expect(rho, a) * expect(rho, b);
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// (2 pi)^{-1/2} int exp(-i P Q) f(Q) dQ by the trapezoid rule on [lo, hi].
template <class F>
cd fourier(F f, double p, double lo, double hi, int steps) {
  const double h = (hi - lo) / steps;
  cd acc = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double q = lo + s * h;
    const double w = (s == 0 || s == steps) ? 0.5 : 1.0;
    acc += w * std::exp(cd(0.0, -p * q)) * f(q);
  }
  return acc * h / std::sqrt(2.0 * std::numbers::pi);
}

// Minimum of f(cos t, sin t) over t in [0, pi): dense grid, then golden
// section on the bracket around the best grid point.
struct AngularMin {
  double theta;
  double value;
};

template <class F>
AngularMin angular_min(F margin, int grid = 4000) {
  auto f = [&](double t) { return margin(std::cos(t), std::sin(t)); };
  const double h = std::numbers::pi / grid;
  int best = 0;
  double best_v = f(0.0);
  for (int i = 1; i < grid; ++i) {
    const double v = f(i * h);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  double lo = (best - 1) * h, hi = (best + 1) * h;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, f(t)};
}

// var(u) + var(v) - a^2 |<[A1,B1]>| - b^2 |<[A2,B2]>| with embedded operators.
inline double witness_margin(const Mat& rho, const Mat& a1, const Mat& b1, const Mat& a2, const Mat& b2,
                             double a, double b) {
  const Mat u = a * a1 + b * a2;
  const Mat v = a * b1 - b * b2;
  const double c1 = std::abs((rho * (a1 * b1 - b1 * a1)).trace());
  const double c2 = std::abs((rho * (a2 * b2 - b2 * a2)).trace());
  return var(rho, u) + var(rho, v) - a * a * c1 - b * b * c2;
}

}  // namespace oracle
