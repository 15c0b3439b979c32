#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

#include "oracles.hpp"
#include "sepwitness/wigner.hpp"

using namespace sepwitness;

TEST_CASE("hand values") {
  const double s = 1.0 / std::sqrt(2.0);
  const Irrep half(1);
  CHECK(wigner_d_exact(half, 1, 1).value == doctest::Approx(s).epsilon(1e-15));
  CHECK(wigner_d_exact(half, 1, -1).value == doctest::Approx(-s).epsilon(1e-15));
  CHECK(wigner_d_exact(half, -1, 1).value == doctest::Approx(s).epsilon(1e-15));
  CHECK(wigner_d_exact(Irrep(2), 0, 0).value == 0.0);
  CHECK(wigner_d_exact(Irrep(2), 2, 2).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(wigner_d_exact(Irrep(2), 2, 0).value == doctest::Approx(-s).epsilon(1e-15));
}

TEST_CASE("exact evaluation refuses past its cap") {
  CHECK_THROWS_AS(wigner_d_exact(Irrep(60), 0, 0, 50), CapabilityError);
}

TEST_CASE("exact rational values agree with the spectral oracle") {
  for (int two_j = 1; two_j <= 20; ++two_j) {
    const Irrep ir(two_j);
    const auto ref = oracle::rotation_pi_2(two_j);
    double worst = 0.0;
    for (int r = 0; r < ir.dim(); ++r)
      for (int c = 0; c < ir.dim(); ++c)
        worst = std::max(worst, std::abs(wigner_d_exact(ir, ir.two_m_at(r), ir.two_m_at(c)).value -
                                         ref(r, c)));
    CHECK_MESSAGE(worst < 1e-10, "2j = " << two_j);
  }
}

TEST_CASE("every method matches exact rational values up to 2j = 40") {
  for (int two_j = 0; two_j <= 40; ++two_j) {
    const Irrep ir(two_j);
    RealMatrix exact(ir.dim(), ir.dim());
    for (int r = 0; r < ir.dim(); ++r)
      for (int c = 0; c < ir.dim(); ++c)
        exact(r, c) = wigner_d_exact(ir, ir.two_m_at(r), ir.two_m_at(c)).value;

    WignerConfig cfg;
    cfg.use_cache = false;
    CHECK((wigner_d_stable(ir, cfg)->d - exact).cwiseAbs().maxCoeff() <= 1e-12);
    for (auto m : {WignerMethod::LogDomain, WignerMethod::Recursion}) {
      CHECK_MESSAGE((wigner_d_with(ir, m).d - exact).cwiseAbs().maxCoeff() <= 1e-12,
                    to_string(m) << " at 2j = " << two_j);
    }
  }
}

TEST_CASE("log-domain and recursion agree in the middle range") {
  for (int two_j : {60, 101, 160}) {
    const auto a = wigner_d_with(Irrep(two_j), WignerMethod::LogDomain);
    const auto b = wigner_d_with(Irrep(two_j), WignerMethod::Recursion);
    CHECK((a.d - b.d).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("unitarity up to 2j = 800") {
  for (int two_j : {1, 50, 51, 200, 301, 500, 799, 800}) {
    const auto d = wigner_d_stable(Irrep(two_j));
    CHECK_MESSAGE(unitarity_deviation(d->d) < 1e-10, "2j = " << two_j);
    CHECK(d->error_estimate < 1e-10);
  }
}

TEST_CASE("symmetries") {
  for (int two_j : {7, 10, 120}) {
    const Irrep ir(two_j);
    const auto d = wigner_d_stable(ir);
    for (int r = 0; r < ir.dim(); ++r) {
      for (int c = 0; c < ir.dim(); ++c) {
        const int tm = ir.two_m_at(r);
        const int tmp = ir.two_m_at(c);
        // d_{m'm} = (-1)^{m-m'} d_{mm'}
        const double sign = ((tm - tmp) / 2) % 2 == 0 ? 1.0 : -1.0;
        CHECK(d->at(tmp, tm) == doctest::Approx(sign * d->at(tm, tmp)).epsilon(1e-12).scale(1.0));
        // d_{-m,-m'} = (-1)^{m-m'} d_{mm'}
        CHECK(d->at(-tm, -tmp) == doctest::Approx(sign * d->at(tm, tmp)).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("row recursion") {
  std::vector<double> row(81);
  const auto d = wigner_d_with(Irrep(80), WignerMethod::LogDomain);
  for (int k : {0, 13, 40, 80}) {
    wigner_row_recursive(80, 80 - 2 * k, row);
    double worst = 0.0;
    for (int c = 0; c <= 80; ++c) worst = std::max(worst, std::abs(row[c] - d.d(k, c)));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("d^j_00 equals the Legendre polynomial at zero") {
  for (int j : {100, 200, 400}) {
    const auto d = wigner_d_stable(Irrep(2 * j));
    CHECK(d->at(0, 0) ==
          doctest::Approx(boost::math::legendre_p(j, 0.0)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("asymptotic form near the center") {
  // j = 100, m = m' = 0: sqrt(2/(100 pi)) against P_100(0)
  const double a = wigner_d_asymptotic(100, 0, 0);
  CHECK(a == doctest::Approx(std::sqrt(2.0 / (100 * std::numbers::pi))).epsilon(1e-14));
  const double p = boost::math::legendre_p(100, 0.0);
  CHECK(std::abs(a - p) / std::abs(p) < 0.005);
  CHECK(wigner_d_asymptotic(101, 0, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("cache returns shared matrices") {
  clear_wigner_cache();
  const auto a = wigner_d_stable(Irrep(30));
  const auto b = wigner_d_stable(Irrep(30));
  CHECK(a.get() == b.get());
  CHECK(wigner_cache_size() >= 1);
  WignerConfig off;
  off.use_cache = false;
  CHECK(wigner_d_stable(Irrep(30), off).get() != a.get());
}

TEST_CASE("j cap") {
  WignerConfig cfg;
  cfg.j_max = 100;
  CHECK_THROWS_AS(wigner_d_stable(Irrep(101), cfg), CapabilityError);
}
