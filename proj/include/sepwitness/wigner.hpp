#pragma once

// Reduced Wigner matrix d^j_{m m'}(pi/2) = <j,m| exp(-i pi/2 Jy) |j,m'>.
//
// Rows and columns use the Irrep index order (index k holds m = j - k).
// Three evaluation regimes:
//   ExactRational  alternating binomial sum in GMP integers; 2j <= exact cap
//   LogDomain      log-domain prefactor, alternating sum in MPFR with 2j + 96 bits
//   Recursion      three-term recurrence in m' per row, seeded at m' = j

#include <memory>
#include <span>
#include <string>

#include "sepwitness/spin.hpp"

namespace sepwitness {

enum class WignerMethod { ExactRational, LogDomain, Recursion };

std::string to_string(WignerMethod m);

struct WignerConfig {
  int exact_cap = 50;
  int log_domain_cap = 300;
  int j_max = 4000;  ///< largest accepted 2j
  bool use_cache = true;
};

struct WignerDMatrix {
  Irrep irrep;
  double angle;
  RealMatrix d;
  WignerMethod method;
  double error_estimate;

  double at(int two_m, int two_mp) const {
    return d(irrep.index_of(two_m), irrep.index_of(two_mp));
  }
};

/// Exact value 2^{-j} sqrt(num/den) * sum, plus its rounded double.
struct ExactWignerValue {
  int two_j;
  std::string sum;        ///< alternating binomial sum, decimal
  std::string ratio_num;  ///< (j+m')!(j-m')!
  std::string ratio_den;  ///< (j+m)!(j-m)!
  double value;
};

/// Throws CapabilityError above `cap`; use wigner_d_stable there.
ExactWignerValue wigner_d_exact(Irrep irrep, int two_m, int two_mp, int cap = 50);

/// Full matrix, regime chosen from `cfg`. Shared from a process-wide cache
/// when cfg.use_cache is set.
std::shared_ptr<const WignerDMatrix> wigner_d_stable(Irrep irrep, const WignerConfig& cfg = {});

/// Full matrix with a forced method; never cached.
WignerDMatrix wigner_d_with(Irrep irrep, WignerMethod method);

/// One row d^j_{m, .}(pi/2) by recursion; `out` has 2j+1 entries.
void wigner_row_recursive(int two_j, int two_m, std::span<double> out);

/// Large-j approximation sqrt(2/(pi j)) exp(|m^2 - m'^2| / 2j) cos((j + m - m') pi/2).
double wigner_d_asymptotic(double j, double m, double mp);

/// max |(D D^T - 1)_{kl}| over all entries.
double unitarity_deviation(const RealMatrix& d);

/// Cheap estimate from sampled row/column orthogonality, O(n) per sample.
double sampled_unitarity_deviation(const RealMatrix& d, int samples = 8);

void clear_wigner_cache();
std::size_t wigner_cache_size();

}  // namespace sepwitness
