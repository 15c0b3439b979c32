#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "sepwitness/states.hpp"

namespace sepwitness {

namespace {

struct JWindow {
  int two_j_min;
  int two_j_max;
  double discarded;
};

JWindow j_window(double mean_j, const TruncationPolicy& policy) {
  const double half_width = policy.window * std::sqrt(mean_j);
  const int lo = std::max(0, static_cast<int>(std::ceil(2.0 * (mean_j - half_width))));
  const int hi = static_cast<int>(std::floor(2.0 * (mean_j + half_width)));
  const double lambda = 2.0 * mean_j;
  // P(N < lo) + P(N > hi), N ~ Poisson(2 jbar)
  double discarded = 0.0;
  if (lo > 0) discarded += boost::math::gamma_q(double(lo), lambda);
  discarded += boost::math::gamma_p(double(hi + 1), lambda);
  if (discarded > policy.max_discarded) {
    throw ValidationError("j-window discards weight " + std::to_string(discarded) +
                          " > " + std::to_string(policy.max_discarded) + "; widen the window");
  }
  return {lo, hi, discarded};
}

// a^n in log-magnitude/phase form, with 0^0 = 1.
struct LogPow {
  bool zero;
  double log_mag;
  double phase;
};

LogPow log_pow(Complex a, int n) {
  if (n == 0) return {false, 0.0, 0.0};
  if (std::abs(a) == 0.0) return {true, 0.0, 0.0};
  return {false, n * std::log(std::abs(a)), n * std::arg(a)};
}

SpinWaveFunction two_mode_coherent(Complex a1, Complex a2, SpinBasis basis,
                                   const TruncationPolicy& policy) {
  const double mean_j = 0.5 * (std::norm(a1) + std::norm(a2));
  const auto win = j_window(mean_j, policy);
  std::map<int, SpinBlock> blocks;
  for (int two_j = win.two_j_min; two_j <= win.two_j_max; ++two_j) {
    SpinBlock b{two_j, two_j, Vector::Zero(two_j + 1)};
    for (int k = 0; k <= two_j; ++k) {
      const int up = two_j - k;  // j + m
      const int down = k;        // j - m
      const auto p1 = log_pow(a1, up);
      const auto p2 = log_pow(a2, down);
      if (p1.zero || p2.zero) continue;
      const double log_mag =
          -mean_j + p1.log_mag + p2.log_mag - 0.5 * (std::lgamma(up + 1.0) + std::lgamma(down + 1.0));
      b.amps(k) = std::polar(std::exp(log_mag), p1.phase + p2.phase);
    }
    blocks.emplace(two_j, std::move(b));
  }
  TruncationInfo info{win.two_j_min, win.two_j_max, policy.window, win.discarded, 1.0, 0.0};
  SpinWaveFunction wf(basis, std::move(blocks), info);
  info.raw_norm = wf.norm_squared();
  SpinWaveFunction out(basis, wf.blocks(), info);
  out.normalize();
  return out;
}

GaussianWaveFunction gaussian_wavefunction(const GaussianEnvelope& env, SpinBasis basis,
                                           bool in_regime, const TruncationPolicy& policy) {
  const auto win = j_window(env.mean_j, policy);
  std::map<int, SpinBlock> blocks;
  for (int two_j = win.two_j_min; two_j <= win.two_j_max; ++two_j) {
    SpinBlock b{two_j, two_j, Vector(two_j + 1)};
    for (int k = 0; k <= two_j; ++k) b.amps(k) = env.amplitude(two_j, two_j - 2 * k);
    blocks.emplace(two_j, std::move(b));
  }
  TruncationInfo info{win.two_j_min, win.two_j_max, policy.window, win.discarded, 1.0, 0.0};
  SpinWaveFunction wf(basis, std::move(blocks), info);
  info.raw_norm = wf.norm_squared();
  SpinWaveFunction out(basis, wf.blocks(), info);
  out.normalize();
  return {std::move(out), env, in_regime};
}

}  // namespace

void SU2CoherentParams::validate() const {
  const double mean_j = 0.5 * (std::norm(alpha1) + std::norm(alpha2));
  if (!std::isfinite(mean_j) || mean_j <= 0.0) {
    throw ValidationError("coherent parameters need (|a1|^2 + |a2|^2)/2 > 0");
  }
}

CoherentMeans coherent_means(const SU2CoherentParams& p) {
  const double mod = std::abs(p.alpha1) * std::abs(p.alpha2);
  const double dphi = std::arg(p.alpha2) - std::arg(p.alpha1);
  return {0.5 * (std::norm(p.alpha1) + std::norm(p.alpha2)), mod * std::sin(dphi),
          0.5 * (std::norm(p.alpha1) - std::norm(p.alpha2)), mod * std::cos(dphi)};
}

TransformedParams transformed_params(const SU2CoherentParams& p) {
  const double s = 1.0 / std::numbers::sqrt2;
  return {(p.alpha2 + p.alpha1) * s, (p.alpha2 - p.alpha1) * s};
}

double poisson_j_weight(int two_j, double mean_j) {
  const double lambda = 2.0 * mean_j;
  return std::exp(-lambda + two_j * std::log(lambda) - std::lgamma(two_j + 1.0));
}

SpinWaveFunction coherent_spin_wavefunction(const SU2CoherentParams& p,
                                            const TruncationPolicy& policy) {
  p.validate();
  return two_mode_coherent(p.alpha1, p.alpha2, SpinBasis::Y, policy);
}

SpinWaveFunction transformed_coefficients_exact(const SU2CoherentParams& p,
                                                const TruncationPolicy& policy) {
  p.validate();
  const auto t = transformed_params(p);
  return two_mode_coherent(t.beta1, t.beta2, SpinBasis::Z, policy);
}

Complex GaussianEnvelope::amplitude(int two_j, int two_m) const {
  const double j = 0.5 * two_j;
  const double m = 0.5 * two_m;
  const double c_mod = std::sqrt(poisson_j_weight(two_j, mean_j));
  const double env = std::pow(std::numbers::pi * width, -0.25) *
                     std::exp(-(m - center) * (m - center) / (2.0 * width));
  return std::polar(c_mod * env, j_phase_rate * j + phase_rate * m);
}

GaussianWaveFunction gaussian_approx_y(const SU2CoherentParams& p, const TruncationPolicy& policy) {
  p.validate();
  const auto means = coherent_means(p);
  const double phi1 = std::arg(p.alpha1);
  const double phi2 = std::arg(p.alpha2);
  GaussianEnvelope env{means.jy, means.mean_j, phi1 - phi2, means.mean_j, phi1 + phi2};
  const bool in_regime = means.mean_j >= 100.0 && std::abs(means.jy) <= 0.1 * means.mean_j;
  return gaussian_wavefunction(env, SpinBasis::Y, in_regime, policy);
}

GaussianWaveFunction gaussian_approx_z(const SU2CoherentParams& p, const TruncationPolicy& policy) {
  p.validate();
  const auto means = coherent_means(p);
  const auto t = transformed_params(p);
  GaussianEnvelope env{means.jz, means.mean_j, t.phase1() - t.phase2(), means.mean_j,
                       t.phase1() + t.phase2()};
  const bool in_regime = means.mean_j >= 100.0 && std::abs(means.jz) <= 0.1 * means.mean_j;
  return gaussian_wavefunction(env, SpinBasis::Z, in_regime, policy);
}

SpinWaveFunction fourier_basis_change(const GaussianWaveFunction& psi, double mean_jx,
                                      double sample_window) {
  if (!(mean_jx > 0.0)) throw ValidationError("Fourier shortcut needs mean Jx > 0");
  if (psi.wf.basis() != SpinBasis::Y) throw ValidationError("Fourier shortcut expects a Jy-basis input");
  const auto& env = psi.envelope;
  // y: exp(-(m - c)^2 / 2w) e^{i k m}  ->  z: exp(-(m - k Jx)^2 / 2 (Jx^2 / w)) e^{-i (m c / Jx - k c)}
  const double out_width = mean_jx * mean_jx / env.width;
  const double out_center = env.phase_rate * mean_jx;
  const double norm = std::pow(std::numbers::pi * out_width, -0.25);
  const double reach = sample_window * std::sqrt(out_width);

  std::map<int, SpinBlock> blocks;
  double input_weight = 0.0;
  for (const auto& [two_j, in] : psi.wf.blocks()) {
    input_weight += poisson_j_weight(two_j, env.mean_j);
    int top = static_cast<int>(std::floor(2.0 * (out_center + reach)));
    if (((top - two_j) % 2) != 0) --top;
    int bottom = static_cast<int>(std::ceil(2.0 * (out_center - reach)));
    if (((bottom - two_j) % 2) != 0) ++bottom;
    const int count = (top - bottom) / 2 + 1;
    const double c_mod = std::sqrt(poisson_j_weight(two_j, env.mean_j));
    const double j_phase = env.j_phase_rate * 0.5 * two_j;
    SpinBlock b{two_j, top, Vector(count)};
    for (int k = 0; k < count; ++k) {
      const double m = 0.5 * (top - 2 * k);
      const double mag =
          c_mod * norm * std::exp(-(m - out_center) * (m - out_center) / (2.0 * out_width));
      const double phase =
          j_phase - (m * env.center / mean_jx - env.phase_rate * env.center);
      b.amps(k) = std::polar(mag, phase);
    }
    blocks.emplace(two_j, std::move(b));
  }
  TruncationInfo info = psi.wf.truncation();
  SpinWaveFunction raw(SpinBasis::Z, std::move(blocks), info, true);
  // resampling error: sampled norm vs. the continuous transform's norm
  info.raw_norm = raw.norm_squared() / input_weight;
  SpinWaveFunction out(SpinBasis::Z, raw.blocks(), info, true);
  out.normalize();
  return out;
}

}  // namespace sepwitness
