#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sepwitness/states.hpp"
#include "sepwitness/wavefunction.hpp"

using namespace sepwitness;

namespace {

SpinWaveFunction single_block(SpinBasis basis, int two_j, const Vector& amps) {
  std::map<int, SpinBlock> blocks;
  blocks[two_j] = SpinBlock{two_j, two_j, amps};
  TruncationInfo t;
  t.two_j_min = t.two_j_max = two_j;
  return SpinWaveFunction(basis, std::move(blocks), t);
}

double binomial_weight(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                  n * std::log(2.0));
}

SpinWaveFunction random_wavefunction(std::mt19937_64& rng, int lo, int hi) {
  std::normal_distribution<double> g;
  std::map<int, SpinBlock> blocks;
  for (int two_j = lo; two_j <= hi; ++two_j) {
    Vector v(two_j + 1);
    for (int k = 0; k <= two_j; ++k) v(k) = Complex(g(rng), g(rng));
    blocks[two_j] = SpinBlock{two_j, two_j, v};
  }
  TruncationInfo t;
  t.two_j_min = lo;
  t.two_j_max = hi;
  SpinWaveFunction wf(SpinBasis::Y, std::move(blocks), t);
  wf.normalize();
  return wf;
}

}  // namespace

TEST_CASE("Jy highest weight spreads binomially over Jz") {
  for (int two_j : {1, 4, 9, 30, 120}) {
    Vector v = Vector::Zero(two_j + 1);
    v(0) = 1.0;
    const auto z = basis_change_y_to_z(single_block(SpinBasis::Y, two_j, v));
    CHECK(z.basis() == SpinBasis::Z);
    for (int k = 0; k <= two_j; ++k) {
      const int two_m = two_j - 2 * k;
      CHECK(std::norm(z.amplitude(two_j, two_m)) ==
            doctest::Approx(binomial_weight(two_j, k)).epsilon(1e-10).scale(1e-300));
    }
    const auto m = wavefunction_moments(z);
    CHECK(m.jy == doctest::Approx(0.5 * two_j).epsilon(1e-10));
    CHECK(m.mean_m == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("round trip and invariants") {
  std::mt19937_64 rng(21);
  const auto y = random_wavefunction(rng, 3, 40);
  const auto z = basis_change_y_to_z(y);
  const auto back = basis_change_z_to_y(z);
  double worst = 0.0;
  for (const auto& [two_j, b] : y.blocks())
    for (int k = 0; k < b.amps.size(); ++k)
      worst = std::max(worst, std::abs(back.amplitude(two_j, b.two_m_at(k)) - b.amps(k)));
  CHECK(worst < 1e-13);
  CHECK(z.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));

  const auto my = wavefunction_moments(y);
  const auto mz = wavefunction_moments(z);
  CHECK(mz.jx == doctest::Approx(my.jx).epsilon(1e-11));
  CHECK(mz.jy == doctest::Approx(my.jy).epsilon(1e-11));
  CHECK(mz.jz == doctest::Approx(my.jz).epsilon(1e-11));
  CHECK(mz.mean_casimir == doctest::Approx(my.mean_casimir).epsilon(1e-12));
  CHECK(my.mean_m == doctest::Approx(my.jy).epsilon(1e-14));
  CHECK(mz.mean_m == doctest::Approx(mz.jz).epsilon(1e-14));
}

TEST_CASE("batch and single rotations agree exactly") {
  std::mt19937_64 rng(4);
  std::vector<SpinWaveFunction> batch{random_wavefunction(rng, 1, 12), random_wavefunction(rng, 5, 20)};
  const auto out = basis_change_y_to_z(batch);
  REQUIRE(out.size() == 2);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto one = basis_change_y_to_z(batch[i]);
    for (const auto& [two_j, b] : one.blocks()) CHECK(out[i].blocks().at(two_j).amps == b.amps);
  }
}

TEST_CASE("wrong basis is refused") {
  Vector v = Vector::Zero(3);
  v(1) = 1.0;
  CHECK_THROWS_AS(basis_change_y_to_z(single_block(SpinBasis::Z, 2, v)), ValidationError);
  CHECK_THROWS_AS(basis_change_z_to_y(single_block(SpinBasis::Y, 2, v)), ValidationError);
}

TEST_CASE("exact rotation of the coherent family lands on the beta form") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ph(-3.1, 3.1);
  std::uniform_real_distribution<double> mag(2.0, 3.8);
  for (int trial = 0; trial < 6; ++trial) {
    const SU2CoherentParams p{std::polar(mag(rng), ph(rng)), std::polar(mag(rng), ph(rng))};
    const auto y = coherent_spin_wavefunction(p);
    REQUIRE(y.truncation().two_j_max <= 80);
    const auto z = basis_change_y_to_z(y);
    const auto ref = transformed_coefficients_exact(p);
    double worst = 0.0;
    for (const auto& [two_j, b] : ref.blocks())
      for (int k = 0; k < b.amps.size(); ++k)
        worst = std::max(worst, std::abs(z.amplitude(two_j, b.two_m_at(k)) - b.amps(k)));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("fidelity and overlap") {
  std::mt19937_64 rng(2);
  const auto a = random_wavefunction(rng, 2, 6);
  CHECK(fidelity(a, a) == doctest::Approx(1.0));
  CHECK(std::abs(overlap(a, a) - 1.0) < 1e-14);
  CHECK_THROWS(overlap(a, basis_change_y_to_z(a)));
}
