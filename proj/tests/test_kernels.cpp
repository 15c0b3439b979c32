#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sepwitness/kernels.hpp"
#include "sepwitness/witness.hpp"

using namespace sepwitness;

TEST_CASE("row fill: parallel equals serial") {
  for (int two_j : {0, 1, 17, 120, 401}) {
    RealMatrix a, b;
    kernels::fill_wigner_rows(two_j, a, Execution::Serial);
    kernels::fill_wigner_rows(two_j, b, Execution::Parallel);
    CHECK(a.rows() == two_j + 1);
    CHECK(a == b);
  }
}

TEST_CASE("row fill agrees with the stable matrix") {
  RealMatrix a;
  kernels::fill_wigner_rows(60, a, Execution::Serial);
  const auto d = wigner_d_with(Irrep(60), WignerMethod::LogDomain);
  CHECK((a - d.d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("block rotation: parallel equals serial") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::vector<Vector> in;
  for (int two_j : {3, 10, 10, 57, 3, 200}) {
    Vector v(two_j + 1);
    for (auto& x : v) x = Complex(g(rng), g(rng));
    in.push_back(v);
  }
  const std::vector<int> two_js{3, 10, 10, 57, 3, 200};
  for (bool transpose : {false, true}) {
    std::vector<Vector> s(in.size()), p(in.size());
    std::vector<kernels::BlockRotation> ts, tp;
    for (std::size_t i = 0; i < in.size(); ++i) {
      ts.push_back({two_js[i], &in[i], &s[i]});
      tp.push_back({two_js[i], &in[i], &p[i]});
    }
    const double es = kernels::rotate_blocks(ts, transpose, {}, Execution::Serial);
    const double ep = kernels::rotate_blocks(tp, transpose, {}, Execution::Parallel);
    CHECK(es == ep);
    for (std::size_t i = 0; i < in.size(); ++i) {
      CHECK(s[i] == p[i]);
      const auto d = wigner_d_stable(Irrep(two_js[i]));
      const Eigen::MatrixXd k = transpose ? Eigen::MatrixXd(d->d.transpose()) : d->d;
      CHECK((k.cast<Complex>() * in[i] - s[i]).norm() < 1e-12 * in[i].norm());
    }
  }
}

TEST_CASE("block rotation validates its tasks") {
  Vector v(3);
  Vector out;
  std::vector<kernels::BlockRotation> bad{{3, &v, &out}};
  CHECK_THROWS(kernels::rotate_blocks(bad, false, {}, Execution::Serial));
  WignerConfig small;
  small.j_max = 1;
  std::vector<kernels::BlockRotation> big{{2, &v, &out}};
  CHECK_THROWS_AS(kernels::rotate_blocks(big, false, small, Execution::Parallel), CapabilityError);
}

TEST_CASE("necessity batch: parallel equals serial") {
  NecessityBatchConfig cfg;
  cfg.ensembles = 48;
  cfg.draws = 4;
  cfg.seed = 2718;
  const auto s = necessity_batch(cfg, Execution::Serial);
  const auto p = necessity_batch(cfg, Execution::Parallel);
  CHECK(s.evaluated == p.evaluated);
  CHECK(s.violations == p.violations);
  CHECK(s.min_normalized_margin == p.min_normalized_margin);
  CHECK(s.max_decomposition_residual == p.max_decomposition_residual);
  CHECK(s.min_s == p.min_s);
  CHECK(kernels::max_threads() >= 1);
}
