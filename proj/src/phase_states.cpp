#include <cmath>
#include <numbers>

#include "sepwitness/spin.hpp"

namespace sepwitness {

Complex phase_state_kernel(Irrep irrep, double theta, int two_m) {
  if (!irrep.contains(two_m)) throw DimensionError("phase_state_kernel: |m| > j");
  return std::polar(1.0 / std::sqrt(double(irrep.dim())), 0.5 * two_m * theta);
}

PhaseStateBasis phase_state_basis(Irrep irrep, PhaseSpacing spacing) {
  const int n = irrep.dim();
  const double step =
      (spacing == PhaseSpacing::FullCircle ? 2.0 : 1.0) * std::numbers::pi / double(n);
  std::vector<double> thetas(n);
  for (int k = 0; k < n; ++k) thetas[k] = k * step;
  return {irrep, spacing, std::move(thetas)};
}

Matrix PhaseStateBasis::states() const {
  const int n = irrep.dim();
  Matrix rows(n, n);
  // |theta> = sum_m conj(<theta|m>) |m>
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      rows(k, i) = std::conj(phase_state_kernel(irrep, thetas[k], irrep.two_m_at(i)));
  return rows;
}

Matrix PhaseStateBasis::overlaps() const {
  Matrix s = states();
  return s.conjugate() * s.transpose();
}

}  // namespace sepwitness
