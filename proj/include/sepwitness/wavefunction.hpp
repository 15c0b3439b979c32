#pragma once

// Multi-j spin wavefunctions C(j, m) stored per irrep block, in either the Jy
// or the Jz eigenbasis, and the exact block rotation between the two.

#include <map>
#include <optional>
#include <vector>

#include "sepwitness/kernels.hpp"
#include "sepwitness/spin.hpp"
#include "sepwitness/wigner.hpp"

namespace sepwitness {

/// Amplitudes of one 2j block. amps[k] belongs to 2m = two_m_top - 2k.
/// Physical blocks span two_m_top = 2j down to -2j; provisional blocks may
/// extend past |m| = j.
struct SpinBlock {
  int two_j = 0;
  int two_m_top = 0;
  Vector amps;

  int two_m_at(int k) const { return two_m_top - 2 * k; }
  bool is_full() const { return two_m_top == two_j && amps.size() == two_j + 1; }
};

struct TruncationInfo {
  int two_j_min = 0;
  int two_j_max = 0;
  double window = 0.0;
  double discarded_weight = 0.0;
  /// |psi|^2 on the grid before renormalization.
  double raw_norm = 1.0;
  /// Largest d-matrix error estimate used to produce this wavefunction.
  double rotation_error = 0.0;
};

class SpinWaveFunction {
 public:
  SpinWaveFunction(SpinBasis basis, std::map<int, SpinBlock> blocks, TruncationInfo trunc,
                   bool provisional = false);

  SpinBasis basis() const { return basis_; }
  bool provisional() const { return provisional_; }
  const std::map<int, SpinBlock>& blocks() const { return blocks_; }
  const TruncationInfo& truncation() const { return trunc_; }

  double norm_squared() const;
  /// Weight on (j, m) pairs with |m| > j.
  double weight_outside_irrep() const;
  /// Amplitude at (2j, 2m); zero off the stored grid.
  Complex amplitude(int two_j, int two_m) const;

  void normalize();

 private:
  SpinBasis basis_;
  std::map<int, SpinBlock> blocks_;
  TruncationInfo trunc_;
  bool provisional_;
};

struct MomentReport {
  double norm = 0.0;
  double mean_j = 0.0;
  double mean_casimir = 0.0;  ///< <J^2>
  double mean_m = 0.0;        ///< along the wavefunction's own basis axis
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
  bool off_axis_valid = true;  ///< false for provisional wavefunctions
};

/// Throws ValidationError on an empty wavefunction.
MomentReport wavefunction_moments(const SpinWaveFunction& psi);

/// C_z(j, m_z) = sum_{m_y} d^j_{m_y m_z}(pi/2) C_y(j, m_y), block by block.
SpinWaveFunction basis_change_y_to_z(const SpinWaveFunction& psi, const WignerConfig& cfg = {},
                                     Execution exec = Execution::Parallel);
/// Inverse rotation.
SpinWaveFunction basis_change_z_to_y(const SpinWaveFunction& psi, const WignerConfig& cfg = {},
                                     Execution exec = Execution::Parallel);

/// Rotates several wavefunctions together; blocks with equal 2j share one
/// d-matrix evaluation.
std::vector<SpinWaveFunction> basis_change_y_to_z(const std::vector<SpinWaveFunction>& batch,
                                                  const WignerConfig& cfg = {},
                                                  Execution exec = Execution::Parallel);

/// <a|b> over the common grid; both must share a basis.
Complex overlap(const SpinWaveFunction& a, const SpinWaveFunction& b);
/// |<a|b>|^2 / (|a|^2 |b|^2).
double fidelity(const SpinWaveFunction& a, const SpinWaveFunction& b);

}  // namespace sepwitness
