#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sepwitness/spin.hpp"

using namespace sepwitness;

namespace {

double comm_residual(const Matrix& a, const Matrix& b, const Matrix& c) {
  return (a * b - b * a - Complex(0, 1) * c).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("irrep indexing") {
  const Irrep j(3);
  CHECK(j.dim() == 4);
  CHECK(j.m_at(0) == 1.5);
  CHECK(j.two_m_at(3) == -3);
  CHECK(j.index_of(-1) == 2);
  CHECK_FALSE(j.contains(2));
  CHECK_THROWS_AS(j.index_of(5), DimensionError);
  CHECK_THROWS_AS(j.index_of(0), DimensionError);
  CHECK_THROWS(Irrep(-1));
}

TEST_CASE("spin matrices match independent construction") {
  for (int two_j = 1; two_j <= 12; ++two_j) {
    const auto ops = spin_operators(Irrep(two_j));
    oracle::Mat jx, jy, jz;
    oracle::spin_matrices(two_j, jx, jy, jz);
    CHECK((ops.jx - jx).norm() < 1e-13);
    CHECK((ops.jy - jy).norm() < 1e-13);
    CHECK((ops.jz - jz).norm() < 1e-13);
  }
}

TEST_CASE("angular momentum algebra holds in every frame") {
  for (int two_j : {1, 2, 5, 10}) {
    const Irrep ir(two_j);
    const double casimir = ir.j() * (ir.j() + 1);
    for (const auto& ops : {spin_operators(ir), frame_operators(ir, SpinBasis::Y),
                            frame_operators(ir, SpinBasis::Z)}) {
      CHECK(comm_residual(ops.jx, ops.jy, ops.jz) < 1e-12);
      CHECK(comm_residual(ops.jy, ops.jz, ops.jx) < 1e-12);
      CHECK(comm_residual(ops.jz, ops.jx, ops.jy) < 1e-12);
      const Matrix c = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
      CHECK((c - casimir * Matrix::Identity(ir.dim(), ir.dim())).norm() < 1e-11);
    }
  }
}

TEST_CASE("frames are related by the real kernel") {
  // C_z = D^T C_y, so an operator O_y in the Y frame reads D^T O_y D in the Z frame.
  for (int two_j : {1, 2, 3, 6, 9}) {
    const Irrep ir(two_j);
    const Matrix d = oracle::rotation_pi_2(two_j).cast<Complex>();
    const auto y = frame_operators(ir, SpinBasis::Y);
    const auto z = frame_operators(ir, SpinBasis::Z);
    CHECK((d.transpose() * y.jx * d - z.jx).norm() < 1e-11);
    CHECK((d.transpose() * y.jy * d - z.jy).norm() < 1e-11);
    CHECK((d.transpose() * y.jz * d - z.jz).norm() < 1e-11);
  }
}

TEST_CASE("ladder coefficient") {
  CHECK(ladder_coefficient(1, -1) == doctest::Approx(1.0));
  CHECK(ladder_coefficient(2, 0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(ladder_coefficient(2, 2) == 0.0);
}

TEST_CASE("coherent state points along its Bloch vector") {
  const Irrep ir(4);
  const auto ops = spin_operators(ir);
  const double th = 0.7, ph = 1.9;
  const auto s = spin_coherent_state(ir, th, ph);
  CHECK(expectation(s, ops.x()) == doctest::Approx(2 * std::sin(th) * std::cos(ph)).epsilon(1e-12));
  CHECK(expectation(s, ops.y()) == doctest::Approx(2 * std::sin(th) * std::sin(ph)).epsilon(1e-12));
  CHECK(expectation(s, ops.z()) == doctest::Approx(2 * std::cos(th)).epsilon(1e-12));
}

TEST_CASE("phase-state kernel is exact") {
  double worst = 0.0;
  for (int two_j = 1; two_j <= 40; ++two_j) {
    const Irrep ir(two_j);
    const double norm = 1.0 / std::sqrt(two_j + 1.0);
    for (double theta : {0.0, 0.3, 1.0, 2.5, -1.7, std::numbers::pi}) {
      for (int k = 0; k < ir.dim(); ++k) {
        const double m = ir.m_at(k);
        const Complex want(norm * std::cos(m * theta), norm * std::sin(m * theta));
        worst = std::max(worst, std::abs(phase_state_kernel(ir, theta, ir.two_m_at(k)) - want));
      }
    }
  }
  CHECK(worst <= 1e-15);
}

TEST_CASE("full-circle spacing gives an orthonormal basis") {
  for (int two_j = 1; two_j <= 40; ++two_j) {
    const auto b = phase_state_basis(Irrep(two_j), PhaseSpacing::FullCircle);
    const Matrix u = b.states();
    const Matrix g = u * u.adjoint();
    CHECK((g - Matrix::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((b.overlaps() - Matrix::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("half-circle spacing is not orthogonal") {
  for (int two_j = 1; two_j <= 40; ++two_j) {
    const auto b = phase_state_basis(Irrep(two_j), PhaseSpacing::HalfCircle);
    REQUIRE(b.thetas.size() == static_cast<std::size_t>(two_j + 1));
    CHECK(b.thetas[1] == doctest::Approx(std::numbers::pi / (two_j + 1)));
    const Matrix g = b.overlaps();
    CHECK((g - Matrix::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff() > 1e-2);
  }
}
