#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <Eigen/Eigenvalues>

#include "sepwitness/witness.hpp"

namespace sepwitness {

AlphaBetaOptimum optimize_alpha_beta(const State& state, const ObservablePair& pairs) {
  const double va1 = variance(state, pairs.a1());
  const double vb1 = variance(state, pairs.b1());
  const double va2 = variance(state, pairs.a2());
  const double vb2 = variance(state, pairs.b2());
  const double ca = covariance(state, pairs.a1(), pairs.a2());
  const double cb = covariance(state, pairs.b1(), pairs.b2());
  const double c1 = commutator_bound(state, pairs.a1(), pairs.b1());
  const double c2 = commutator_bound(state, pairs.a2(), pairs.b2());

  AlphaBetaOptimum r;
  r.m << va1 + vb1 - c1, ca - cb, ca - cb, va2 + vb2 - c2;
  if (!r.m.allFinite()) throw ValidationError("non-finite moments in the alpha/beta optimizer");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(r.m);
  r.min_eigenvalue = es.eigenvalues()(0);
  Eigen::Vector2d v = es.eigenvectors().col(0);
  // fix the sign so the direction is reproducible
  if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0)) v = -v;
  r.alpha = v(0);
  r.beta = v(1);
  r.violated = r.min_eigenvalue < -kViolation;
  return r;
}

// ---------------------------------------------------------------------------
// random generators

Vector haar_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

Matrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return (m + m.adjoint()) * 0.5;
}

ObservablePair random_pairs(int d1, int d2, std::mt19937_64& rng) {
  Matrix a1 = random_hermitian(d1, rng);
  Matrix b1 = random_hermitian(d1, rng);
  Matrix a2 = random_hermitian(d2, rng);
  Matrix b2 = random_hermitian(d2, rng);
  return ObservablePair::from_local(a1, b1, a2, b2);
}

SeparableEnsemble random_separable(int d1, int d2, int n_terms, std::mt19937_64& rng) {
  if (n_terms < 1) throw ValidationError("ensemble needs at least one term");
  if (d1 < 1 || d2 < 1) throw DimensionError("ensemble factor dimension must be positive");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n_terms);
  for (auto& x : w) x = expo(rng);
  double total = 0.0;
  for (double x : w) total += x;
  std::vector<EnsembleTerm> terms;
  terms.reserve(n_terms);
  double acc = 0.0;
  for (int i = 0; i < n_terms; ++i) {
    // last weight absorbs the rounding so the sum is 1 to the last bit we can manage
    const double p = i + 1 < n_terms ? w[i] / total : std::max(0.0, 1.0 - acc);
    acc += p;
    const auto s1 = HilbertDims::single(d1);
    const auto s2 = HilbertDims::single(d2);
    Vector psi1 = haar_vector(d1, rng);
    Vector psi2 = haar_vector(d2, rng);
    terms.push_back({p, DensityOperator::from_pure(PureState(s1, psi1)),
                     DensityOperator::from_pure(PureState(s2, psi2))});
  }
  return SeparableEnsemble(std::move(terms));
}

SeparableEnsemble random_separable(int d1, int d2, int n_terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_separable(d1, d2, n_terms, rng);
}

// ---------------------------------------------------------------------------
// brute force

namespace {

struct SpinObjective {
  Matrix u, u2, v, v2;
  std::vector<std::pair<double, Matrix>> abs_terms;  // weight, X in -w |<X>|

  double value(const Vector& psi) const {
    auto ev = [&](const Matrix& m) { return psi.dot(m * psi).real(); };
    const double mu = ev(u);
    const double mv = ev(v);
    double f = ev(u2) - mu * mu + ev(v2) - mv * mv;
    for (const auto& [w, x] : abs_terms) f -= w * std::abs(ev(x));
    return f;
  }

  /// Wirtinger gradient d f / d psi^*.
  Vector gradient(const Vector& psi) const {
    auto ev = [&](const Matrix& m) { return psi.dot(m * psi).real(); };
    Vector g = u2 * psi - 2.0 * ev(u) * (u * psi) + v2 * psi - 2.0 * ev(v) * (v * psi);
    for (const auto& [w, x] : abs_terms) {
      const double e = ev(x);
      const double sgn = e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
      g -= w * sgn * (x * psi);
    }
    return g;
  }
};

SpinObjective spin_objective(Irrep j1, Irrep j2, SpinRhsMode mode) {
  const auto s1 = spin_operators(j1);
  const auto s2 = spin_operators(j2);
  const Matrix i1 = identity(j1.dim());
  const Matrix i2 = identity(j2.dim());
  SpinObjective o;
  o.u = kron(s1.jy, i2) + kron(i1, s2.jy);
  o.v = kron(s1.jz, i2) + kron(i1, s2.jz);
  o.u2 = o.u * o.u;
  o.v2 = o.v * o.v;
  if (mode == SpinRhsMode::Symmetric) {
    o.abs_terms.push_back({2.0, kron(s1.jx, i2)});
  } else {
    o.abs_terms.push_back({1.0, kron(s1.jx, i2)});
    o.abs_terms.push_back({1.0, kron(i1, s2.jx)});
  }
  return o;
}

Vector tangent(const Vector& g, const Vector& psi) { return g - psi.dot(g) * psi; }

constexpr int kMaxSteps = 4000;
constexpr double kArmijo = 1e-4;
constexpr double kGradTol = 1e-11;

// Gradient descent on the unit sphere with backtracking line search.
Vector descend_joint(const SpinObjective& obj, Vector psi) {
  double f = obj.value(psi);
  double eta = 0.1;
  for (int step = 0; step < kMaxSteps; ++step) {
    const Vector g = tangent(obj.gradient(psi), psi);
    const double g2 = g.squaredNorm();
    if (std::sqrt(g2) < kGradTol) break;
    bool moved = false;
    while (eta > 1e-16) {
      Vector trial = psi - eta * g;
      trial.normalize();
      const double ft = obj.value(trial);
      if (ft <= f - kArmijo * 2.0 * eta * g2) {
        psi = std::move(trial);
        f = ft;
        moved = true;
        eta = std::min(eta * 2.0, 10.0);
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  return psi;
}

Vector descend_product(const SpinObjective& obj, Vector p1, Vector p2) {
  const auto d1 = p1.size();
  const auto d2 = p2.size();
  auto joint = [&](const Vector& a, const Vector& b) { return kron(a, b).col(0).eval(); };
  Vector psi = joint(p1, p2);
  double f = obj.value(psi);
  double eta = 0.1;
  for (int step = 0; step < kMaxSteps; ++step) {
    const Vector g = obj.gradient(psi);
    // g1 = G conj(psi2), g2 = G^T conj(psi1), G the d1 x d2 reshaping of g
    Vector g1 = Vector::Zero(d1);
    Vector g2 = Vector::Zero(d2);
    for (Eigen::Index a = 0; a < d1; ++a) {
      for (Eigen::Index b = 0; b < d2; ++b) {
        const Complex gab = g(a * d2 + b);
        g1(a) += gab * std::conj(p2(b));
        g2(b) += gab * std::conj(p1(a));
      }
    }
    g1 = tangent(g1, p1);
    g2 = tangent(g2, p2);
    const double gn = g1.squaredNorm() + g2.squaredNorm();
    if (std::sqrt(gn) < kGradTol) break;
    bool moved = false;
    while (eta > 1e-16) {
      Vector t1 = (p1 - eta * g1).normalized();
      Vector t2 = (p2 - eta * g2).normalized();
      Vector trial = joint(t1, t2);
      const double ft = obj.value(trial);
      if (ft <= f - kArmijo * 2.0 * eta * gn) {
        p1 = std::move(t1);
        p2 = std::move(t2);
        psi = std::move(trial);
        f = ft;
        moved = true;
        eta = std::min(eta * 2.0, 10.0);
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  return psi;
}

}  // namespace

BruteForceResult brute_force_min_margin(Irrep j1, Irrep j2, SpinRhsMode mode, int restarts,
                                        std::uint64_t seed, bool product_only) {
  const auto dims = HilbertDims::bipartite(j1.dim(), j2.dim());
  if (dims.joint() > 64) throw CapabilityError("brute force is limited to joint dimension 64");
  if (restarts < 1) throw ValidationError("brute force needs at least one restart");
  const auto obj = spin_objective(j1, j2, mode);
  std::mt19937_64 rng(seed);

  Vector best;
  double best_f = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Vector psi;
    if (product_only) {
      Vector p1 = haar_vector(j1.dim(), rng);
      Vector p2 = haar_vector(j2.dim(), rng);
      psi = descend_product(obj, p1, p2);
    } else {
      psi = descend_joint(obj, haar_vector(dims.joint(), rng));
    }
    const double f = obj.value(psi);
    if (f < best_f) {
      best_f = f;
      best = psi;
    }
  }
  PureState state(dims, best);
  // report the margin from the independent criterion code path
  const double margin = spin_criterion(State(state), j1, j2).in(mode).margin;
  return {std::move(state), margin, restarts};
}

// ---------------------------------------------------------------------------
// necessity batches

namespace {

struct TaskResult {
  int evaluated = 0;
  int violations = 0;
  double min_normalized_margin = std::numeric_limits<double>::infinity();
  double max_residual = 0.0;
  double min_s = std::numeric_limits<double>::infinity();
};

TaskResult necessity_task(const NecessityBatchConfig& cfg, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> n_terms(1, std::max(1, cfg.max_terms));
  std::uniform_real_distribution<double> coef(-2.0, 2.0);

  const auto [d1, d2] = cfg.dims[index % cfg.dims.size()];
  const auto e = random_separable(d1, d2, n_terms(rng), rng);
  const State rho = ensemble_to_density(e);
  TaskResult out;
  for (int k = 0; k < cfg.draws; ++k) {
    const auto pairs = random_pairs(d1, d2, rng);
    WitnessConfig wc{coef(rng), coef(rng)};
    while (wc.alpha * wc.alpha + wc.beta * wc.beta < 1e-6) wc = {coef(rng), coef(rng)};
    const auto rep = general_criterion(rho, pairs, wc);
    const auto dec = decomposition_check(e, pairs, wc);
    ++out.evaluated;
    if (rep.violated) ++out.violations;
    out.min_normalized_margin = std::min(out.min_normalized_margin,
                                         rep.margin / (wc.alpha * wc.alpha + wc.beta * wc.beta));
    out.max_residual = std::max(out.max_residual, dec.residual);
    out.min_s = std::min({out.min_s, dec.s_u, dec.s_v});
  }
  return out;
}

}  // namespace

NecessityBatchResult necessity_batch(const NecessityBatchConfig& cfg, Execution exec) {
  if (cfg.ensembles < 1 || cfg.draws < 1 || cfg.dims.empty()) {
    throw ValidationError("empty necessity batch");
  }
  std::vector<TaskResult> results(cfg.ensembles);
  if (exec == Execution::Serial) {
    for (int i = 0; i < cfg.ensembles; ++i) results[i] = necessity_task(cfg, i);
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < cfg.ensembles; ++i) {
      try {
        results[i] = necessity_task(cfg, i);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  // fixed-order reduction keeps serial and parallel results identical
  NecessityBatchResult r;
  r.min_normalized_margin = std::numeric_limits<double>::infinity();
  r.min_s = std::numeric_limits<double>::infinity();
  for (const auto& t : results) {
    r.evaluated += t.evaluated;
    r.violations += t.violations;
    r.min_normalized_margin = std::min(r.min_normalized_margin, t.min_normalized_margin);
    r.max_decomposition_residual = std::max(r.max_decomposition_residual, t.max_residual);
    r.min_s = std::min(r.min_s, t.min_s);
  }
  return r;
}

}  // namespace sepwitness
