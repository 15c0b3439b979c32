#pragma once

// End-to-end pipelines: the spin witness applied to a two-ensemble state, and
// the comparison of an exact Jy -> Jz basis change against the quasi-continuous
// Fourier shortcut for two-mode SU(2) coherent states.

#include <vector>

#include "sepwitness/states.hpp"
#include "sepwitness/witness.hpp"

namespace sepwitness {

struct AppendixOptions {
  TruncationPolicy truncation;
  WignerConfig wigner;
  Execution exec = Execution::Parallel;
  /// Run outside the near-Jx-pole regime instead of refusing.
  bool force = false;
};

struct AppendixReport {
  Complex alpha1;
  Complex alpha2;
  double phi_offset;  ///< phi2 - phi1
  double mean_j;
  double mean_jx;
  double mean_jy;
  double mean_jz;
  bool in_regime;     ///< Jy^2 + Jz^2 <= 0.01 Jx^2

  double exact_mz;               ///< <Jz> after the exact d-matrix transform
  double exact_formula_mz;       ///< |a1 a2| cos(phi2 - phi1)
  double provisional_mz;         ///< <Jz> after the Fourier shortcut
  double predicted_provisional;  ///< (phi1 - phi2) Jx
  double discrepancy_ratio;      ///< |provisional - exact| / max(1, |Jx|)

  // diagnostics
  int two_j_min;
  int two_j_max;
  double discarded_weight;
  double rotation_error;
  double exact_norm;                ///< |psi_z|^2 after the exact transform
  double provisional_outside_weight;  ///< weight the shortcut puts on |m| > j
  double resampling_error;          ///< |sampled norm / continuous norm - 1|
  double provisional_overlap;       ///< |<provisional|exact>|^2 in the Jz basis
};

/// Jy^2 + Jz^2 <= 0.01 Jx^2 with Jx > 0.
bool in_extremum_regime(const CoherentMeans& m);

/// Both pipelines start from the same coherent_spin_wavefunction(params).
/// Throws ValidationError outside the regime unless opts.force.
AppendixReport reproduce_ft_discrepancy(const SU2CoherentParams& params,
                                        const AppendixOptions& opts = {});

/// |a1| = |a2| = sqrt(jbar), phi1 = 0, phi2 = offset, for each offset.
/// Out-of-regime points are computed and flagged rather than refused.
std::vector<AppendixReport> appendix_sweep(double mean_j, const std::vector<double>& offsets,
                                           const AppendixOptions& opts = {});

/// n evenly spaced offsets in [center - half_span, center + half_span].
std::vector<double> offset_grid(double center, double half_span, int n);

struct AsymptoticRow {
  int two_j;
  int two_m;
  int two_mp;
  double exact;
  double asymptotic;
  double relative_error;  ///< |asymptotic - exact| / |exact|; NaN when exact == 0
  bool even_parity;       ///< j + m - m' even
};

struct AsymptoticErrorTable {
  std::vector<AsymptoticRow> rows;
};

/// For each 2j in two_j_list (each j >= 50) and every |m|, |m'| <= m_window.
AsymptoticErrorTable asymptotic_dmatrix_report(const std::vector<int>& two_j_list, double m_window,
                                               const WignerConfig& cfg = {});

struct JkpReport {
  SpinWitnessReport witness;
  double jx1;
  double jx2;
  double jx_asymmetry;  ///< |<Jx1>| - |<Jx2>|
  bool symmetric;       ///< |asymmetry| <= 1e-9 max(1, |<Jx1>|)
};

JkpReport jkp_scenario(const State& state, Irrep j1, Irrep j2);

}  // namespace sepwitness
