#pragma once

// Variance-sum separability witnesses for bipartite states:
//   var(u) + var(v) >= a^2 C1 + b^2 C2,
//   u = a A1 (x) 1 + b 1 (x) A2,  v = a B1 (x) 1 - b 1 (x) B2,
//   Ci = |<[Ai, Bi]>|,
// which every separable state satisfies.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "sepwitness/hilbert.hpp"
#include "sepwitness/kernels.hpp"
#include "sepwitness/spin.hpp"

namespace sepwitness {

/// Violation threshold: a margin must fall below -kViolation to count.
inline constexpr double kViolation = 1e-9;

/// A1, B1 act on system 1 and A2, B2 on system 2. All four carry the joint dims.
class ObservablePair {
 public:
  ObservablePair(Observable a1, Observable b1, Observable a2, Observable b2);
  /// Builds the pair from local matrices of each subsystem.
  static ObservablePair from_local(const Matrix& a1, const Matrix& b1, const Matrix& a2,
                                   const Matrix& b2);

  const HilbertDims& dims() const { return a1_.dims(); }
  const Observable& a1() const { return a1_; }
  const Observable& b1() const { return b1_; }
  const Observable& a2() const { return a2_; }
  const Observable& b2() const { return b2_; }

 private:
  Observable a1_, b1_, a2_, b2_;
};

/// A1 = Jy1, B1 = Jz1, A2 = Jy2, B2 = -Jz2, so that at a = b = 1
/// u = Jy1 + Jy2 and v = Jz1 + Jz2.
ObservablePair jkp_pairs(Irrep j1, Irrep j2);

/// A = q, B = p on both modes (u = q1 + q2, v = p1 - p2 at a = b = 1).
ObservablePair quadrature_pairs(int cutoff);

struct WitnessConfig {
  double alpha = 1.0;
  double beta = 1.0;

  /// Throws ValidationError unless finite and not both zero.
  void validate() const;
};

struct CombinedObservables {
  Observable u;
  Observable v;
};

CombinedObservables assemble_uv(const ObservablePair& pairs, const WitnessConfig& cfg);

struct WitnessReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool violated = false;
  double c1 = 0.0;
  double c2 = 0.0;
  double var_u = 0.0;
  double var_v = 0.0;
  WitnessConfig config;
};

WitnessReport general_criterion(const State& state, const ObservablePair& pairs,
                                const WitnessConfig& cfg);
/// general_criterion at a = b = 1.
WitnessReport sum_criterion(const State& state, const ObservablePair& pairs);

enum class SpinRhsMode {
  Symmetric,  ///< 2 |<Jx1>|, the symmetric-setup shorthand
  General,    ///< |<Jx1>| + |<Jx2>|, each commutator evaluated on its own
};

const char* to_string(SpinRhsMode m);

struct SpinWitnessReport {
  WitnessReport general;
  WitnessReport symmetric;
  double jx1 = 0.0;
  double jx2 = 0.0;

  const WitnessReport& in(SpinRhsMode m) const { return m == SpinRhsMode::Symmetric ? symmetric : general; }
};

SpinWitnessReport spin_criterion(const State& state, Irrep j1, Irrep j2);

enum class HwMode {
  FixedBound,      ///< rhs = 2
  StateDependent,  ///< rhs = |<[q1,p1]>| + |<[q2,p2]>| on the truncated matrices
};

const char* to_string(HwMode m);

/// Weight on Fock levels n >= cutoff - 2 of either mode.
double fock_edge_weight(const State& state, int cutoff);

/// var(q1 + q2) + var(p1 - p2) >= 2. Throws CapabilityError when the
/// edge weight exceeds 1e-6, since the truncated [q, p] is no longer i there.
WitnessReport hw_criterion(const State& state, int cutoff, HwMode mode);

// ---------------------------------------------------------------------------
// separable ensembles

struct EnsembleTerm {
  double p;
  DensityOperator rho1;
  DensityOperator rho2;
};

/// sum_i p_i rho1_i (x) rho2_i. Validated on construction.
class SeparableEnsemble {
 public:
  explicit SeparableEnsemble(std::vector<EnsembleTerm> terms);
  const std::vector<EnsembleTerm>& terms() const { return terms_; }
  HilbertDims dims() const;

 private:
  std::vector<EnsembleTerm> terms_;
};

DensityOperator ensemble_to_density(const SeparableEnsemble& e);

struct DecompositionCheckReport {
  double s_u = 0.0;  ///< sum p <u>_i^2 - (sum p <u>_i)^2
  double s_v = 0.0;
  double s = 0.0;    ///< s_u + s_v
  double direct_var_u = 0.0;
  double direct_var_v = 0.0;
  /// sum_i p_i [a^2 var_i(A1) + b^2 var_i(A2)], and its B counterpart
  double term_var_u = 0.0;
  double term_var_v = 0.0;
  double term_variance_sum = 0.0;
  double residual = 0.0;
  /// sum_i p_i [var_i(u) + var_i(v) - a^2 C1_i - b^2 C2_i], each term >= 0
  double term_margin = 0.0;
};

DecompositionCheckReport decomposition_check(const SeparableEnsemble& e, const ObservablePair& pairs,
                                             const WitnessConfig& cfg);

struct AlphaBetaOptimum {
  double alpha = 0.0;
  double beta = 0.0;
  double min_eigenvalue = 0.0;
  Eigen::Matrix2d m;
  bool violated = false;
};

/// margin(a, b) = (a, b) M (a, b)^T; returns the lowest eigenpair of M.
AlphaBetaOptimum optimize_alpha_beta(const State& state, const ObservablePair& pairs);

/// Haar-random pure factors mixed with flat-Dirichlet weights.
SeparableEnsemble random_separable(int d1, int d2, int n_terms, std::uint64_t seed);
SeparableEnsemble random_separable(int d1, int d2, int n_terms, std::mt19937_64& rng);

Vector haar_vector(int d, std::mt19937_64& rng);
/// GUE-like random Hermitian matrix.
Matrix random_hermitian(int d, std::mt19937_64& rng);
ObservablePair random_pairs(int d1, int d2, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// brute force over pure states

struct BruteForceResult {
  PureState state;
  double margin;
  int restarts;
};

/// Random-restart Riemannian gradient descent of the spin-criterion margin
/// over pure joint states (or product states only). Joint dim must be <= 64.
BruteForceResult brute_force_min_margin(Irrep j1, Irrep j2, SpinRhsMode mode, int restarts,
                                        std::uint64_t seed, bool product_only = false);

// ---------------------------------------------------------------------------
// necessity batches

struct NecessityBatchConfig {
  /// ensemble i uses dims[i % dims.size()]
  std::vector<std::pair<int, int>> dims = {{2, 2}, {2, 3}, {3, 3}, {2, 4}, {3, 4}, {4, 4}};
  int ensembles = 1000;
  int draws = 10;
  int max_terms = 4;
  std::uint64_t seed = 0;
};

struct NecessityBatchResult {
  int evaluated = 0;
  int violations = 0;
  /// smallest margin / (a^2 + b^2) seen
  double min_normalized_margin = 0.0;
  double max_decomposition_residual = 0.0;
  double min_s = 0.0;
};

/// Each ensemble i draws from its own generator seeded by (seed, i), so the
/// result does not depend on scheduling.
NecessityBatchResult necessity_batch(const NecessityBatchConfig& cfg,
                                     Execution exec = Execution::Parallel);

}  // namespace sepwitness
