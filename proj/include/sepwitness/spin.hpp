#pragma once

#include <vector>

#include "sepwitness/hilbert.hpp"

namespace sepwitness {

/// Irreducible representation labelled by 2j. Basis index k holds m = j - k.
class Irrep {
 public:
  explicit Irrep(int two_j);

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  int dim() const { return two_j_ + 1; }

  double m_at(int index) const { return j() - index; }
  int two_m_at(int index) const { return two_j_ - 2 * index; }
  /// Throws DimensionError for |m| > j or wrong parity.
  int index_of(int two_m) const;
  bool contains(int two_m) const;

  bool operator==(const Irrep&) const = default;

 private:
  int two_j_;
};

struct SpinOperatorSet {
  Irrep irrep;
  Matrix jx;
  Matrix jy;
  Matrix jz;

  Observable x() const { return Observable(HilbertDims::single(irrep.dim()), jx); }
  Observable y() const { return Observable(HilbertDims::single(irrep.dim()), jy); }
  Observable z() const { return Observable(HilbertDims::single(irrep.dim()), jz); }
};

/// Standard Condon-Shortley matrices in the Jz eigenbasis.
SpinOperatorSet spin_operators(Irrep irrep);

/// Coefficient bases a spin wavefunction may be expanded in.
enum class SpinBasis { Y, Z };

/// Operators in the frame used by spin wavefunctions. The Y and Z coefficient
/// bases are tied together by the real kernel d(pi/2); in the Y basis
/// Jy = diag(m), Jz = (L+ + L-)/2, Jx = (L+ - L-)/2i, and in the Z basis
/// Jz = diag(m), Jx = (K+ - K-)/2i, Jy = -(K+ + K-)/2.
SpinOperatorSet frame_operators(Irrep irrep, SpinBasis basis);

/// sqrt(j(j+1) - m(m+1)); the raising coefficient <m+1|J+|m>.
double ladder_coefficient(int two_j, int two_m);

/// |j, +j> along the Bloch direction (theta, phi) in the standard frame.
PureState spin_coherent_state(Irrep irrep, double theta, double phi);

// ---------------------------------------------------------------------------
// phase states

enum class PhaseSpacing {
  /// theta_k = k pi / (2j+1); the spacing printed with the phase-state
  /// construction. Not orthonormal.
  HalfCircle,
  /// theta_k = 2 pi k / (2j+1); orthonormal.
  FullCircle,
};

struct PhaseStateBasis {
  Irrep irrep;
  PhaseSpacing spacing;
  std::vector<double> thetas;

  /// Row k is the phase state |theta_k> in the |j,m> basis (index order of Irrep).
  Matrix states() const;
  /// Gram matrix <theta_k|theta_l>.
  Matrix overlaps() const;
};

PhaseStateBasis phase_state_basis(Irrep irrep, PhaseSpacing spacing);

/// <j,theta|j,m> = e^{i m theta} / sqrt(2j+1).
Complex phase_state_kernel(Irrep irrep, double theta, int two_m);

}  // namespace sepwitness
