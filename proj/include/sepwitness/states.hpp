#pragma once

// State constructors: the two-mode SU(2) coherent family and its exact and
// Gaussian-approximate representations, the Fourier-shortcut transform, and
// truncated oscillator states.

#include "sepwitness/hilbert.hpp"
#include "sepwitness/wavefunction.hpp"

namespace sepwitness {

struct SU2CoherentParams {
  Complex alpha1;
  Complex alpha2;

  /// Throws ValidationError unless the mean j is positive and finite.
  void validate() const;
};

/// Closed-form first moments of the coherent family.
struct CoherentMeans {
  double mean_j;
  double jx;
  double jy;
  double jz;
};

CoherentMeans coherent_means(const SU2CoherentParams& p);

struct TransformedParams {
  Complex beta1;  ///< (alpha2 + alpha1) / sqrt 2
  Complex beta2;  ///< (alpha2 - alpha1) / sqrt 2
  double phase1() const { return std::arg(beta1); }
  double phase2() const { return std::arg(beta2); }
};

TransformedParams transformed_params(const SU2CoherentParams& p);

struct TruncationPolicy {
  /// keep j in [jbar - w sqrt(jbar), jbar + w sqrt(jbar)]
  double window = 6.0;
  double max_discarded = 1e-9;
};

/// |C(j)|^2 = exp(-2 jbar) (2 jbar)^{2j} / (2j)!, the Poisson weight of 2j.
double poisson_j_weight(int two_j, double mean_j);

/// C(j, m) = exp(-jbar) a1^{j+m} a2^{j-m} / sqrt((j+m)! (j-m)!), in the Jy basis.
SpinWaveFunction coherent_spin_wavefunction(const SU2CoherentParams& p,
                                            const TruncationPolicy& policy = {});

/// The same state written directly in the Jz basis with (beta1, beta2).
SpinWaveFunction transformed_coefficients_exact(const SU2CoherentParams& p,
                                                const TruncationPolicy& policy = {});

/// C(j) (pi w)^{-1/4} exp(-(m - center)^2 / 2w) exp(i rate m), with
/// C(j) = sqrt(poisson_j_weight) exp(i j_rate j).
struct GaussianEnvelope {
  double center;
  double width;
  double phase_rate;
  double mean_j;
  double j_phase_rate;

  Complex amplitude(int two_j, int two_m) const;
};

struct GaussianWaveFunction {
  SpinWaveFunction wf;
  GaussianEnvelope envelope;
  bool in_regime;  ///< large-jbar, near-equator regime of the approximation
};

GaussianWaveFunction gaussian_approx_y(const SU2CoherentParams& p,
                                       const TruncationPolicy& policy = {});
GaussianWaveFunction gaussian_approx_z(const SU2CoherentParams& p,
                                       const TruncationPolicy& policy = {});

/// Treats m_y, m_z as quasi-continuous Q = m_y / sqrt(Jx), P = m_z / sqrt(Jx)
/// and applies the continuous Fourier kernel to each j block's Gaussian
/// envelope analytically. The result is sampled on integer m_z around its own
/// center (not clipped to |m| <= j), renormalized, and flagged provisional.
SpinWaveFunction fourier_basis_change(const GaussianWaveFunction& psi, double mean_jx,
                                      double sample_window = 8.0);

// ---------------------------------------------------------------------------
// oscillators

struct OscillatorParams {
  double r = 0.0;
  int cutoff = 20;
};

/// Fock-space tail weight beyond the cutoff for the two-mode squeezed vacuum.
double tmsv_tail_weight(const OscillatorParams& p);

/// sum_n (-tanh r)^n / cosh r |n, n>, truncated and renormalized.
/// Throws ValidationError when the tail weight exceeds 1e-9.
PureState tmsv_state(const OscillatorParams& p);

/// Single-mode q = (a + a^+)/sqrt 2, p = (a - a^+)/(i sqrt 2) on n < cutoff.
struct Quadratures {
  Matrix q;
  Matrix p;
};

Quadratures quadrature_ops(int cutoff);

/// Fock state |n> (single mode).
PureState fock_state(int n, int cutoff);

}  // namespace sepwitness
