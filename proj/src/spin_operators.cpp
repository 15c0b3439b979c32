#include <cmath>
#include <string>

#include "sepwitness/spin.hpp"

namespace sepwitness {

Irrep::Irrep(int two_j) : two_j_(two_j) {
  if (two_j < 0) throw DimensionError("2j must be nonnegative, got " + std::to_string(two_j));
}

bool Irrep::contains(int two_m) const {
  return std::abs(two_m) <= two_j_ && ((two_j_ - two_m) % 2 == 0);
}

int Irrep::index_of(int two_m) const {
  if (!contains(two_m)) {
    throw DimensionError("2m = " + std::to_string(two_m) + " not in irrep 2j = " +
                         std::to_string(two_j_));
  }
  return (two_j_ - two_m) / 2;
}

double ladder_coefficient(int two_j, int two_m) {
  const double j = 0.5 * two_j;
  const double m = 0.5 * two_m;
  return std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + 1.0)));
}

namespace {

// Sx, Sy, Sz of the standard frame.
struct Standard {
  Matrix sx, sy, sz;
};

Standard standard(Irrep irrep) {
  const int n = irrep.dim();
  Matrix raise = Matrix::Zero(n, n);
  Matrix sz = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    sz(k, k) = irrep.m_at(k);
    // J+ |m> = c |m+1>, and index k-1 holds m+1.
    if (k > 0) raise(k - 1, k) = ladder_coefficient(irrep.two_j(), irrep.two_m_at(k));
  }
  Matrix lower = raise.adjoint();
  const Complex i(0.0, 1.0);
  return {(raise + lower) / 2.0, (raise - lower) / (2.0 * i), sz};
}

}  // namespace

SpinOperatorSet spin_operators(Irrep irrep) {
  auto s = standard(irrep);
  return {irrep, s.sx, s.sy, s.sz};
}

SpinOperatorSet frame_operators(Irrep irrep, SpinBasis basis) {
  auto s = standard(irrep);
  if (basis == SpinBasis::Y) {
    // quantization axis y; (Jz, Jx, Jy) play the role of (Sx, Sy, Sz)
    return {irrep, s.sy, s.sz, s.sx};
  }
  return {irrep, s.sy, Matrix(-s.sx), s.sz};
}

PureState spin_coherent_state(Irrep irrep, double theta, double phi) {
  const int n = irrep.dim();
  const double j = irrep.j();
  Vector v(n);
  // <j,m|theta,phi> = sqrt(C(2j, j+m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2) e^{-i m phi}
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  for (int k = 0; k < n; ++k) {
    const double m = irrep.m_at(k);
    const int up = static_cast<int>(std::lround(j + m));
    const int down = irrep.two_j() - up;
    const double log_binom =
        std::lgamma(irrep.two_j() + 1.0) - std::lgamma(up + 1.0) - std::lgamma(down + 1.0);
    const double mag = std::exp(0.5 * log_binom) * std::pow(c, up) * std::pow(s, down);
    v(k) = mag * std::polar(1.0, -m * phi);
  }
  v.normalize();
  return PureState(HilbertDims::single(n), std::move(v));
}

}  // namespace sepwitness
