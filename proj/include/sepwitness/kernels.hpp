#pragma once

// Data-parallel inner loops. Every kernel has a serial reference that the
// tests hold the OpenMP version to, bit for bit.

#include <span>

#include "sepwitness/hilbert.hpp"
#include "sepwitness/wigner.hpp"

namespace sepwitness {

enum class Execution { Serial, Parallel };

namespace kernels {

/// d^j(pi/2) by per-row recursion.
void fill_wigner_rows(int two_j, RealMatrix& out, Execution exec);

struct BlockRotation {
  int two_j;
  const Vector* in;
  Vector* out;
};

/// out = D in (or D^T in) for every block, D = d^j(pi/2) from wigner_d_stable.
/// Tasks sharing a 2j share one d-matrix evaluation.
/// Returns the largest d-matrix error estimate used.
double rotate_blocks(std::span<const BlockRotation> tasks, bool transpose, const WignerConfig& cfg,
                     Execution exec);

int max_threads();

}  // namespace kernels
}  // namespace sepwitness
