#include "sepwitness/casestudy.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sepwitness {

bool in_extremum_regime(const CoherentMeans& m) {
  return m.jx > 0.0 && m.jy * m.jy + m.jz * m.jz <= 0.01 * m.jx * m.jx;
}

namespace {

// Everything except the exact rotation, which callers may batch.
AppendixReport prepare(const SU2CoherentParams& params, const AppendixOptions& opts,
                       std::vector<SpinWaveFunction>& exact_y) {
  params.validate();
  const auto means = coherent_means(params);
  AppendixReport r{};
  r.alpha1 = params.alpha1;
  r.alpha2 = params.alpha2;
  r.phi_offset = std::arg(params.alpha2) - std::arg(params.alpha1);
  r.mean_j = means.mean_j;
  r.mean_jx = means.jx;
  r.mean_jy = means.jy;
  r.mean_jz = means.jz;
  r.in_regime = in_extremum_regime(means);
  if (!r.in_regime && !opts.force) {
    throw ValidationError("parameters are outside the near-Jx-pole regime (Jy^2 + Jz^2 > 0.01 Jx^2)");
  }
  exact_y.push_back(coherent_spin_wavefunction(params, opts.truncation));
  const auto& psi_y = exact_y.back();
  r.exact_formula_mz = std::abs(params.alpha1) * std::abs(params.alpha2) * std::cos(r.phi_offset);
  r.two_j_min = psi_y.truncation().two_j_min;
  r.two_j_max = psi_y.truncation().two_j_max;
  r.discarded_weight = psi_y.truncation().discarded_weight;
  r.predicted_provisional = -r.phi_offset * means.jx;
  return r;
}

void finish(AppendixReport& r, const SU2CoherentParams& params, const AppendixOptions& opts,
            const SpinWaveFunction& psi_z) {
  // (a) exact: coefficients -> d-matrix rotation -> moment
  r.exact_mz = wavefunction_moments(psi_z).mean_m;
  r.exact_norm = psi_z.norm_squared();
  r.rotation_error = psi_z.truncation().rotation_error;

  // (b) Gaussian envelope -> Fourier shortcut -> moment
  const auto gauss = gaussian_approx_y(params, opts.truncation);
  const auto provisional = fourier_basis_change(gauss, r.mean_jx);
  r.provisional_mz = wavefunction_moments(provisional).mean_m;
  r.discrepancy_ratio = std::abs(r.provisional_mz - r.exact_mz) / std::max(1.0, std::abs(r.mean_jx));
  r.provisional_outside_weight = provisional.weight_outside_irrep();
  r.resampling_error = std::abs(provisional.truncation().raw_norm - 1.0);
  r.provisional_overlap = fidelity(provisional, psi_z);
}

}  // namespace

AppendixReport reproduce_ft_discrepancy(const SU2CoherentParams& params, const AppendixOptions& opts) {
  std::vector<SpinWaveFunction> exact_y;
  auto r = prepare(params, opts, exact_y);
  const auto psi_z = basis_change_y_to_z(exact_y.front(), opts.wigner, opts.exec);
  finish(r, params, opts, psi_z);
  return r;
}

std::vector<double> offset_grid(double center, double half_span, int n) {
  if (n < 1) throw ValidationError("offset grid needs at least one point");
  if (n == 1) return {center};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = center - half_span + 2.0 * half_span * i / (n - 1);
  return out;
}

std::vector<AppendixReport> appendix_sweep(double mean_j, const std::vector<double>& offsets,
                                           const AppendixOptions& opts) {
  if (!(mean_j > 0.0)) throw ValidationError("sweep needs a positive mean j");
  AppendixOptions o = opts;
  o.force = true;
  const double mod = std::sqrt(mean_j);
  std::vector<SU2CoherentParams> params;
  std::vector<AppendixReport> out;
  std::vector<SpinWaveFunction> exact_y;
  for (double off : offsets) {
    params.push_back({Complex(mod, 0.0), std::polar(mod, off)});
    out.push_back(prepare(params.back(), o, exact_y));
  }
  const auto exact_z = basis_change_y_to_z(exact_y, o.wigner, o.exec);
  for (std::size_t i = 0; i < out.size(); ++i) finish(out[i], params[i], o, exact_z[i]);
  return out;
}

AsymptoticErrorTable asymptotic_dmatrix_report(const std::vector<int>& two_j_list, double m_window,
                                               const WignerConfig& cfg) {
  AsymptoticErrorTable t;
  for (int two_j : two_j_list) {
    if (two_j < 100) throw ValidationError("asymptotic table needs j >= 50");
    const Irrep irrep(two_j);
    const auto d = wigner_d_stable(irrep, cfg);
    const int reach = static_cast<int>(std::floor(2.0 * m_window));
    for (int tm = reach; tm >= -reach; --tm) {
      if (((tm - two_j) % 2) != 0) continue;
      for (int tmp = reach; tmp >= -reach; --tmp) {
        if (((tmp - two_j) % 2) != 0) continue;
        AsymptoticRow row{two_j, tm, tmp, d->at(tm, tmp),
                          wigner_d_asymptotic(0.5 * two_j, 0.5 * tm, 0.5 * tmp),
                          std::numeric_limits<double>::quiet_NaN(),
                          ((two_j + tm - tmp) / 2) % 2 == 0};
        if (row.exact != 0.0) row.relative_error = std::abs(row.asymptotic - row.exact) / std::abs(row.exact);
        t.rows.push_back(row);
      }
    }
  }
  return t;
}

JkpReport jkp_scenario(const State& state, Irrep j1, Irrep j2) {
  JkpReport r;
  r.witness = spin_criterion(state, j1, j2);
  r.jx1 = r.witness.jx1;
  r.jx2 = r.witness.jx2;
  r.jx_asymmetry = std::abs(r.jx1) - std::abs(r.jx2);
  r.symmetric = std::abs(r.jx_asymmetry) <= 1e-9 * std::max(1.0, std::abs(r.jx1));
  return r;
}

}  // namespace sepwitness
