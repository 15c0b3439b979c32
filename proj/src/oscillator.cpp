#include <cmath>
#include <string>

#include "sepwitness/states.hpp"

namespace sepwitness {

namespace {

constexpr double kMaxTail = 1e-9;

void check_cutoff(int cutoff) {
  if (cutoff < 2) throw DimensionError("oscillator cutoff must be at least 2");
}

}  // namespace

double tmsv_tail_weight(const OscillatorParams& p) {
  check_cutoff(p.cutoff);
  // sum_{n >= N} (1 - t^2) t^{2n} = t^{2N}
  const double t = std::tanh(std::abs(p.r));
  return std::pow(t, 2.0 * p.cutoff);
}

PureState tmsv_state(const OscillatorParams& p) {
  if (!std::isfinite(p.r)) throw ValidationError("squeezing must be finite");
  const double tail = tmsv_tail_weight(p);
  if (tail > kMaxTail) {
    throw ValidationError("cutoff " + std::to_string(p.cutoff) + " leaves tail weight " +
                          std::to_string(tail) + " for r = " + std::to_string(p.r));
  }
  const int n_max = p.cutoff;
  const double t = -std::tanh(p.r);
  Vector psi = Vector::Zero(n_max * n_max);
  double amp = 1.0 / std::cosh(p.r);
  for (int n = 0; n < n_max; ++n) {
    psi(n * n_max + n) = amp;
    amp *= t;
  }
  psi.normalize();
  return PureState(HilbertDims::bipartite(n_max, n_max), psi);
}

Quadratures quadrature_ops(int cutoff) {
  check_cutoff(cutoff);
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  const Matrix ad = a.adjoint();
  const double s = 1.0 / std::sqrt(2.0);
  return {(a + ad) * s, (a - ad) * Complex(0.0, -s)};
}

PureState fock_state(int n, int cutoff) {
  check_cutoff(cutoff);
  if (n < 0 || n >= cutoff) throw DimensionError("Fock level outside the cutoff");
  Vector psi = Vector::Zero(cutoff);
  psi(n) = 1.0;
  return PureState(HilbertDims::single(cutoff), psi);
}

}  // namespace sepwitness
