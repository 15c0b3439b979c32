#include "sepwitness/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <utility>
#include <vector>

#include <gmp.h>
#include <mpfr.h>

#include "sepwitness/kernels.hpp"

namespace sepwitness {

namespace {

// Thin RAII holders for the GMP/MPFR C types.
struct Mpz {
  mpz_t v;
  Mpz() { mpz_init(v); }
  ~Mpz() { mpz_clear(v); }
  Mpz(const Mpz&) = delete;
  Mpz& operator=(const Mpz&) = delete;
  std::string str() const {
    std::vector<char> buf(mpz_sizeinbase(v, 10) + 2);
    mpz_get_str(buf.data(), 10, v);
    return std::string(buf.data());
  }
};

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

// Integer pieces of the closed form for (j, m, m').
struct Indices {
  long a;  // j + m
  long b;  // j - m
  long c;  // j + m'
  long e;  // j - m'
  long sign_base;  // m - m'
};

Indices indices(int two_j, int two_m, int two_mp) {
  return {(two_j + two_m) / 2, (two_j - two_m) / 2, (two_j + two_mp) / 2, (two_j - two_mp) / 2,
          (two_m - two_mp) / 2};
}

void check_entry(const Irrep& irrep, int two_m, int two_mp) {
  if (!irrep.contains(two_m) || !irrep.contains(two_mp)) {
    throw DimensionError("d-matrix entry outside the irrep");
  }
}

void exact_sum(const Indices& ix, Mpz& sum) {
  Mpz t1, t2, term;
  mpz_set_ui(sum.v, 0);
  const long k_lo = std::max(0L, ix.c - ix.a);
  const long k_hi = std::min(ix.b, ix.c);
  for (long k = k_lo; k <= k_hi; ++k) {
    mpz_bin_uiui(t1.v, ix.a, ix.c - k);
    mpz_bin_uiui(t2.v, ix.b, k);
    mpz_mul(term.v, t1.v, t2.v);
    if (((ix.sign_base + k) % 2 + 2) % 2 == 1) {
      mpz_sub(sum.v, sum.v, term.v);
    } else {
      mpz_add(sum.v, sum.v, term.v);
    }
  }
}

double exact_value(int two_j, const Indices& ix, const Mpz& sum, Mpz& num, Mpz& den) {
  Mpz f;
  mpz_fac_ui(num.v, ix.c);
  mpz_fac_ui(f.v, ix.e);
  mpz_mul(num.v, num.v, f.v);
  mpz_fac_ui(den.v, ix.a);
  mpz_fac_ui(f.v, ix.b);
  mpz_mul(den.v, den.v, f.v);

  const mpfr_prec_t prec = 256 + 4 * two_j;
  Mpfr x(prec), y(prec);
  mpfr_set_z(x.v, num.v, MPFR_RNDN);
  mpfr_set_z(y.v, den.v, MPFR_RNDN);
  mpfr_div(x.v, x.v, y.v, MPFR_RNDN);
  mpfr_sqrt(x.v, x.v, MPFR_RNDN);
  mpfr_set_z(y.v, sum.v, MPFR_RNDN);
  mpfr_mul(x.v, x.v, y.v, MPFR_RNDN);
  // 2^{-j} = sqrt(2^{-2j})
  mpfr_set_ui(y.v, 1, MPFR_RNDN);
  mpfr_div_2ui(y.v, y.v, two_j, MPFR_RNDN);
  mpfr_sqrt(y.v, y.v, MPFR_RNDN);
  mpfr_mul(x.v, x.v, y.v, MPFR_RNDN);
  return mpfr_get_d(x.v, MPFR_RNDN);
}

double exact_entry(int two_j, int two_m, int two_mp) {
  auto ix = indices(two_j, two_m, two_mp);
  Mpz sum, num, den;
  exact_sum(ix, sum);
  return exact_value(two_j, ix, sum, num, den);
}

// log-Gamma prefactor, alternating sum carried with 2j + 96 bits so the
// ~2^j cancellation is absorbed. ln n! is tabulated once per matrix.
class LogDomainEvaluator {
 public:
  explicit LogDomainEvaluator(int two_j) : two_j_(two_j), prec_(two_j + 96) {
    lnfact_.reserve(two_j + 1);
    for (int n = 0; n <= two_j; ++n) {
      auto v = std::make_unique<Mpfr>(prec_);
      mpfr_set_si(v->v, n + 1, MPFR_RNDN);
      mpfr_lngamma(v->v, v->v, MPFR_RNDN);
      lnfact_.push_back(std::move(v));
    }
  }

  double operator()(int two_m, int two_mp) const {
    const auto ix = indices(two_j_, two_m, two_mp);
    const long k_lo = std::max(0L, ix.c - ix.a);
    const long k_hi = std::min(ix.b, ix.c);
    Mpfr log_pre(prec_), tmp(prec_), term(prec_), sum(prec_), ratio(prec_);

    // -j ln 2 + 1/2 [ln c! + ln e! - ln a! - ln b!] + ln C(a, c - k_lo) + ln C(b, k_lo)
    mpfr_add(log_pre.v, lnf(ix.c), lnf(ix.e), MPFR_RNDN);
    mpfr_sub(log_pre.v, log_pre.v, lnf(ix.a), MPFR_RNDN);
    mpfr_sub(log_pre.v, log_pre.v, lnf(ix.b), MPFR_RNDN);
    mpfr_div_2ui(log_pre.v, log_pre.v, 1, MPFR_RNDN);
    mpfr_const_log2(tmp.v, MPFR_RNDN);
    mpfr_mul_d(tmp.v, tmp.v, 0.5 * two_j_, MPFR_RNDN);
    mpfr_sub(log_pre.v, log_pre.v, tmp.v, MPFR_RNDN);
    add_lnbinom(log_pre, ix.a, ix.c - k_lo);
    add_lnbinom(log_pre, ix.b, k_lo);

    // sum relative to the first term
    mpfr_set_ui(term.v, 1, MPFR_RNDN);
    mpfr_set_zero(sum.v, 1);
    for (long k = k_lo; k <= k_hi; ++k) {
      if (((ix.sign_base + k) % 2 + 2) % 2 == 1) {
        mpfr_sub(sum.v, sum.v, term.v, MPFR_RNDN);
      } else {
        mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
      }
      // t_{k+1}/t_k = (c - k)(b - k) / ((a - c + k + 1)(k + 1))
      mpfr_set_si(ratio.v, (ix.c - k) * (ix.b - k), MPFR_RNDN);
      mpfr_div_si(ratio.v, ratio.v, (ix.a - ix.c + k + 1) * (k + 1), MPFR_RNDN);
      mpfr_mul(term.v, term.v, ratio.v, MPFR_RNDN);
    }
    if (mpfr_zero_p(sum.v)) return 0.0;
    mpfr_exp(log_pre.v, log_pre.v, MPFR_RNDN);
    mpfr_mul(log_pre.v, log_pre.v, sum.v, MPFR_RNDN);
    return mpfr_get_d(log_pre.v, MPFR_RNDN);
  }

 private:
  mpfr_srcptr lnf(long n) const { return lnfact_[n]->v; }

  void add_lnbinom(Mpfr& acc, long n, long k) const {
    mpfr_add(acc.v, acc.v, lnf(n), MPFR_RNDN);
    mpfr_sub(acc.v, acc.v, lnf(k), MPFR_RNDN);
    mpfr_sub(acc.v, acc.v, lnf(n - k), MPFR_RNDN);
  }

  int two_j_;
  mpfr_prec_t prec_;
  std::vector<std::unique_ptr<Mpfr>> lnfact_;
};

template <class Entry>
RealMatrix fill_by_entries(Irrep irrep, const Entry& entry) {
  const int n = irrep.dim();
  RealMatrix d(n, n);
  // d_{m m'} = (-1)^{m - m'} d_{m' m} = (-1)^{m - m'} d_{-m, -m'}; one quarter is evaluated
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n && r + c <= n - 1; ++c) {
      const int tm = irrep.two_m_at(r);
      const int tmp = irrep.two_m_at(c);
      const double v = entry(tm, tmp);
      const double sv = (((tm - tmp) / 2) % 2 == 0) ? v : -v;
      d(r, c) = v;
      d(c, r) = sv;
      d(n - 1 - r, n - 1 - c) = sv;
      d(n - 1 - c, n - 1 - r) = v;
    }
  }
  return d;
}

class WignerCache {
 public:
  std::shared_ptr<const WignerDMatrix> find(int two_j, WignerMethod method) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find({two_j, method});
    return it == entries_.end() ? nullptr : it->second;
  }

  void insert(std::shared_ptr<const WignerDMatrix> m) {
    const std::size_t bytes = sizeof(double) * m->d.size();
    std::unique_lock lock(mu_);
    if (bytes_ + bytes > kBudget) return;
    if (entries_.emplace(std::pair{m->irrep.two_j(), m->method}, m).second) bytes_ += bytes;
  }

  void clear() {
    std::unique_lock lock(mu_);
    entries_.clear();
    bytes_ = 0;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

 private:
  static constexpr std::size_t kBudget = std::size_t(256) << 20;
  mutable std::shared_mutex mu_;
  std::map<std::pair<int, WignerMethod>, std::shared_ptr<const WignerDMatrix>> entries_;
  std::size_t bytes_ = 0;
};

WignerCache& cache() {
  static WignerCache c;
  return c;
}

}  // namespace

std::string to_string(WignerMethod m) {
  switch (m) {
    case WignerMethod::ExactRational: return "exact-rational";
    case WignerMethod::LogDomain: return "log-domain";
    case WignerMethod::Recursion: return "recursion";
  }
  return "unknown";
}

ExactWignerValue wigner_d_exact(Irrep irrep, int two_m, int two_mp, int cap) {
  if (irrep.two_j() > cap) {
    throw CapabilityError("2j = " + std::to_string(irrep.two_j()) +
                          " exceeds the exact-arithmetic cap " + std::to_string(cap) +
                          "; use wigner_d_stable");
  }
  check_entry(irrep, two_m, two_mp);
  const auto ix = indices(irrep.two_j(), two_m, two_mp);
  Mpz sum, num, den;
  exact_sum(ix, sum);
  const double value = exact_value(irrep.two_j(), ix, sum, num, den);
  return {irrep.two_j(), sum.str(), num.str(), den.str(), value};
}

void wigner_row_recursive(int two_j, int two_m, std::span<double> out) {
  const int n = two_j + 1;
  if (static_cast<int>(out.size()) != n) throw DimensionError("row buffer must hold 2j+1 entries");
  if (std::abs(two_m) > two_j || (two_j - two_m) % 2 != 0) {
    throw DimensionError("row index outside the irrep");
  }
  constexpr double kBig = 1e150;
  const double m = 0.5 * two_m;
  // index k holds m' = j - k; walk k = 0 .. half (m' >= 0), where the
  // solution grows or oscillates, then mirror the m' < 0 half.
  const int half = two_j / 2;
  out[0] = 1.0;  // d_{m,j} > 0; overall scale fixed by normalization
  for (int k = 0; k < half; ++k) {
    const int two_mp = two_j - 2 * k;
    const double next = (k > 0) ? out[k - 1] : 0.0;
    const double c_up = ladder_coefficient(two_j, two_mp);      // c(m')
    const double c_dn = ladder_coefficient(two_j, two_mp - 2);  // c(m'-1)
    double v = -(2.0 * m * out[k] + c_up * next) / c_dn;
    if (std::abs(v) > kBig) {
      for (int i = 0; i <= k; ++i) out[i] /= kBig;
      v /= kBig;
    }
    out[k + 1] = v;
  }
  // d_{m,-m'} = (-1)^{j+m} d_{m,m'}
  const double flip = (((two_j + two_m) / 2) % 2 == 0) ? 1.0 : -1.0;
  for (int k = half + 1; k < n; ++k) out[k] = flip * out[two_j - k];
  double norm2 = 0.0;
  for (double v : out) norm2 += v * v;
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : out) v *= inv;
}

WignerDMatrix wigner_d_with(Irrep irrep, WignerMethod method) {
  RealMatrix d;
  switch (method) {
    case WignerMethod::ExactRational:
      d = fill_by_entries(irrep, [&](int tm, int tmp) { return exact_entry(irrep.two_j(), tm, tmp); });
      break;
    case WignerMethod::LogDomain:
      d = fill_by_entries(irrep, LogDomainEvaluator(irrep.two_j()));
      break;
    case WignerMethod::Recursion: kernels::fill_wigner_rows(irrep.two_j(), d, Execution::Parallel); break;
  }
  const double err = (method == WignerMethod::ExactRational)
                         ? std::numeric_limits<double>::epsilon() * std::max(1.0, std::sqrt(double(irrep.dim())))
                         : sampled_unitarity_deviation(d);
  return {irrep, std::numbers::pi / 2, std::move(d), method, err};
}

std::shared_ptr<const WignerDMatrix> wigner_d_stable(Irrep irrep, const WignerConfig& cfg) {
  if (irrep.two_j() > cfg.j_max) {
    throw CapabilityError("2j = " + std::to_string(irrep.two_j()) + " exceeds j_max " +
                          std::to_string(cfg.j_max));
  }
  WignerMethod method = WignerMethod::Recursion;
  if (irrep.two_j() <= cfg.exact_cap) {
    method = WignerMethod::ExactRational;
  } else if (irrep.two_j() <= cfg.log_domain_cap) {
    method = WignerMethod::LogDomain;
  }
  if (cfg.use_cache) {
    if (auto hit = cache().find(irrep.two_j(), method)) return hit;
  }
  auto m = std::make_shared<const WignerDMatrix>(wigner_d_with(irrep, method));
  if (cfg.use_cache) cache().insert(m);
  return m;
}

double wigner_d_asymptotic(double j, double m, double mp) {
  return std::sqrt(2.0 / (std::numbers::pi * j)) * std::exp(std::abs(m * m - mp * mp) / (2.0 * j)) *
         std::cos((j + m - mp) * std::numbers::pi / 2.0);
}

double unitarity_deviation(const RealMatrix& d) {
  RealMatrix g = d * d.transpose();
  g -= RealMatrix::Identity(d.rows(), d.cols());
  return g.cwiseAbs().maxCoeff();
}

double sampled_unitarity_deviation(const RealMatrix& d, int samples) {
  const Eigen::Index n = d.rows();
  if (n <= 2 * samples) return unitarity_deviation(d);
  std::vector<Eigen::Index> pick(samples);
  for (int s = 0; s < samples; ++s) pick[s] = (s * (n - 1)) / (samples - 1);
  double worst = 0.0;
  for (int a = 0; a < samples; ++a) {
    for (int b = a; b < samples; ++b) {
      const double delta = (a == b) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(d.row(pick[a]).dot(d.row(pick[b])) - delta));
      worst = std::max(worst, std::abs(d.col(pick[a]).dot(d.col(pick[b])) - delta));
    }
  }
  return worst;
}

void clear_wigner_cache() { cache().clear(); }
std::size_t wigner_cache_size() { return cache().size(); }

}  // namespace sepwitness
