#include "sepwitness/kernels.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <omp.h>

namespace sepwitness::kernels {

namespace {

void fill_row(int two_j, int k, RealMatrix& out, std::vector<double>& buf) {
  wigner_row_recursive(two_j, two_j - 2 * k, buf);
  for (int c = 0; c <= two_j; ++c) out(k, c) = buf[c];
}

// Applies one d-matrix to every task of a 2j group.
double rotate_group(const std::vector<const BlockRotation*>& group, bool transpose,
                    const WignerConfig& cfg) {
  auto d = wigner_d_stable(Irrep(group.front()->two_j), cfg);
  for (const auto* t : group) {
    // real kernel: rotate the real and imaginary parts separately
    const Eigen::VectorXd re = t->in->real();
    const Eigen::VectorXd im = t->in->imag();
    Eigen::VectorXd out_re, out_im;
    if (transpose) {
      out_re.noalias() = d->d.transpose() * re;
      out_im.noalias() = d->d.transpose() * im;
    } else {
      out_re.noalias() = d->d * re;
      out_im.noalias() = d->d * im;
    }
    t->out->resize(re.size());
    t->out->real() = out_re;
    t->out->imag() = out_im;
  }
  return d->error_estimate;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

void fill_wigner_rows(int two_j, RealMatrix& out, Execution exec) {
  const int n = two_j + 1;
  out.resize(n, n);
  if (exec == Execution::Serial) {
    std::vector<double> buf(n);
    for (int k = 0; k < n; ++k) fill_row(two_j, k, out, buf);
    return;
  }
#pragma omp parallel
  {
    std::vector<double> buf(n);
#pragma omp for schedule(static)
    for (int k = 0; k < n; ++k) fill_row(two_j, k, out, buf);
  }
}

double rotate_blocks(std::span<const BlockRotation> tasks, bool transpose, const WignerConfig& cfg,
                     Execution exec) {
  for (const auto& t : tasks) {
    if (t.two_j > cfg.j_max) {
      throw CapabilityError("2j = " + std::to_string(t.two_j) + " exceeds j_max " +
                            std::to_string(cfg.j_max));
    }
    if (t.in->size() != t.two_j + 1) throw DimensionError("block length does not match 2j+1");
  }
  std::map<int, std::vector<const BlockRotation*>> by_j;
  for (const auto& t : tasks) by_j[t.two_j].push_back(&t);
  std::vector<const std::vector<const BlockRotation*>*> groups;
  groups.reserve(by_j.size());
  for (const auto& [_, g] : by_j) groups.push_back(&g);

  double worst = 0.0;
  const auto count = static_cast<std::ptrdiff_t>(groups.size());
  if (exec == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i)
      worst = std::max(worst, rotate_group(*groups[i], transpose, cfg));
    return worst;
  }
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    worst = std::max(worst, rotate_group(*groups[i], transpose, cfg));
  return worst;
}

}  // namespace sepwitness::kernels
