#include "sepwitness/wavefunction.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sepwitness {

SpinWaveFunction::SpinWaveFunction(SpinBasis basis, std::map<int, SpinBlock> blocks,
                                   TruncationInfo trunc, bool provisional)
    : basis_(basis), blocks_(std::move(blocks)), trunc_(trunc), provisional_(provisional) {
  for (const auto& [two_j, b] : blocks_) {
    if (b.two_j != two_j || two_j < 0) throw ValidationError("block key does not match its 2j");
    if (((b.two_m_top - two_j) % 2) != 0) throw ValidationError("block m parity differs from j");
    if (!provisional_) {
      const int bottom = b.two_m_at(static_cast<int>(b.amps.size()) - 1);
      if (b.two_m_top > two_j || bottom < -two_j) {
        throw ValidationError("|m| > j in block 2j = " + std::to_string(two_j));
      }
    }
  }
}

double SpinWaveFunction::norm_squared() const {
  double n = 0.0;
  for (const auto& [_, b] : blocks_) n += b.amps.squaredNorm();
  return n;
}

double SpinWaveFunction::weight_outside_irrep() const {
  double w = 0.0;
  for (const auto& [two_j, b] : blocks_) {
    for (Eigen::Index k = 0; k < b.amps.size(); ++k) {
      if (std::abs(b.two_m_at(static_cast<int>(k))) > two_j) w += std::norm(b.amps(k));
    }
  }
  return w;
}

Complex SpinWaveFunction::amplitude(int two_j, int two_m) const {
  auto it = blocks_.find(two_j);
  if (it == blocks_.end()) return 0.0;
  const auto& b = it->second;
  const int diff = b.two_m_top - two_m;
  if (diff < 0 || diff % 2 != 0) return 0.0;
  const int k = diff / 2;
  return k < b.amps.size() ? b.amps(k) : Complex(0.0);
}

void SpinWaveFunction::normalize() {
  const double n = norm_squared();
  if (n <= 0.0) throw ValidationError("cannot normalize an empty wavefunction");
  const double s = 1.0 / std::sqrt(n);
  for (auto& [_, b] : blocks_) b.amps *= s;
}

MomentReport wavefunction_moments(const SpinWaveFunction& psi) {
  if (psi.blocks().empty() || psi.norm_squared() <= 0.0) {
    throw ValidationError("moments of an empty wavefunction");
  }
  MomentReport r;
  Complex ladder_mean = 0.0;
  for (const auto& [two_j, b] : psi.blocks()) {
    const double j = 0.5 * two_j;
    for (Eigen::Index k = 0; k < b.amps.size(); ++k) {
      const double w = std::norm(b.amps(k));
      const int two_m = b.two_m_at(static_cast<int>(k));
      r.norm += w;
      r.mean_j += w * j;
      r.mean_casimir += w * j * (j + 1.0);
      r.mean_m += w * 0.5 * two_m;
      if (k > 0 && !psi.provisional()) {
        ladder_mean += std::conj(b.amps(k - 1)) * b.amps(k) * ladder_coefficient(two_j, two_m);
      }
    }
  }
  r.mean_j /= r.norm;
  r.mean_casimir /= r.norm;
  r.mean_m /= r.norm;
  ladder_mean /= r.norm;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (psi.provisional()) {
    r.off_axis_valid = false;
    r.jx = nan;
    r.jy = psi.basis() == SpinBasis::Y ? r.mean_m : nan;
    r.jz = psi.basis() == SpinBasis::Z ? r.mean_m : nan;
    return r;
  }
  if (psi.basis() == SpinBasis::Y) {
    r.jy = r.mean_m;
    r.jz = ladder_mean.real();
    r.jx = ladder_mean.imag();
  } else {
    r.jz = r.mean_m;
    r.jx = ladder_mean.imag();
    r.jy = -ladder_mean.real();
  }
  return r;
}

namespace {

std::vector<SpinWaveFunction> rotate(const std::vector<SpinWaveFunction>& batch, SpinBasis from,
                                     SpinBasis to, const WignerConfig& cfg, Execution exec) {
  std::vector<std::map<int, SpinBlock>> outs(batch.size());
  std::vector<kernels::BlockRotation> tasks;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& psi = batch[i];
    if (psi.basis() != from) throw ValidationError("wavefunction is in the wrong basis");
    if (psi.provisional()) throw ValidationError("cannot rotate a provisional wavefunction");
    for (const auto& [two_j, b] : psi.blocks()) {
      if (!b.is_full()) throw ValidationError("basis change needs full 2j+1 blocks");
      auto& dst = outs[i][two_j];
      dst.two_j = two_j;
      dst.two_m_top = two_j;
      dst.amps.resize(two_j + 1);
    }
  }
  // map nodes are stable, so pointers taken now survive
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (const auto& [two_j, b] : batch[i].blocks()) tasks.push_back({two_j, &b.amps, &outs[i][two_j].amps});
  }
  // y -> z uses the transposed kernel; z -> y its inverse D.
  const double err = kernels::rotate_blocks(tasks, from == SpinBasis::Y, cfg, exec);
  std::vector<SpinWaveFunction> result;
  result.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    TruncationInfo info = batch[i].truncation();
    info.rotation_error = std::max(info.rotation_error, err);
    result.emplace_back(to, std::move(outs[i]), info);
  }
  return result;
}

SpinWaveFunction rotate(const SpinWaveFunction& psi, SpinBasis from, SpinBasis to,
                        const WignerConfig& cfg, Execution exec) {
  return std::move(rotate(std::vector<SpinWaveFunction>{psi}, from, to, cfg, exec).front());
}

}  // namespace

SpinWaveFunction basis_change_y_to_z(const SpinWaveFunction& psi, const WignerConfig& cfg,
                                     Execution exec) {
  return rotate(psi, SpinBasis::Y, SpinBasis::Z, cfg, exec);
}

SpinWaveFunction basis_change_z_to_y(const SpinWaveFunction& psi, const WignerConfig& cfg,
                                     Execution exec) {
  return rotate(psi, SpinBasis::Z, SpinBasis::Y, cfg, exec);
}

std::vector<SpinWaveFunction> basis_change_y_to_z(const std::vector<SpinWaveFunction>& batch,
                                                  const WignerConfig& cfg, Execution exec) {
  return rotate(batch, SpinBasis::Y, SpinBasis::Z, cfg, exec);
}

Complex overlap(const SpinWaveFunction& a, const SpinWaveFunction& b) {
  if (a.basis() != b.basis()) throw ValidationError("overlap of wavefunctions in different bases");
  Complex acc = 0.0;
  for (const auto& [two_j, ba] : a.blocks()) {
    if (!b.blocks().contains(two_j)) continue;
    for (Eigen::Index k = 0; k < ba.amps.size(); ++k) {
      const Complex other = b.amplitude(two_j, ba.two_m_at(static_cast<int>(k)));
      acc += std::conj(ba.amps(k)) * other;
    }
  }
  return acc;
}

double fidelity(const SpinWaveFunction& a, const SpinWaveFunction& b) {
  return std::norm(overlap(a, b)) / (a.norm_squared() * b.norm_squared());
}

}  // namespace sepwitness
