#include "sepwitness/witness.hpp"

#include <cmath>
#include <string>

#include "sepwitness/states.hpp"

namespace sepwitness {

namespace {

void require_tag(const Observable& o, Subsystem want, const char* name) {
  if (o.subsystem() != want) {
    throw ValidationError(std::string(name) + " has the wrong subsystem tag");
  }
}

struct PairMoments {
  double var_a1, var_b1, var_a2, var_b2;
  double cov_a, cov_b;  // cov(A1, A2), cov(B1, B2)
  double c1, c2;
};

PairMoments pair_moments(const State& s, const ObservablePair& p) {
  if (!(dims_of(s) == p.dims())) {
    throw DimensionError("state dims " + dims_of(s).to_string() + " vs observables " +
                         p.dims().to_string());
  }
  return {variance(s, p.a1()),
          variance(s, p.b1()),
          variance(s, p.a2()),
          variance(s, p.b2()),
          covariance(s, p.a1(), p.a2()),
          covariance(s, p.b1(), p.b2()),
          commutator_bound(s, p.a1(), p.b1()),
          commutator_bound(s, p.a2(), p.b2())};
}

WitnessReport assemble_report(const PairMoments& m, const WitnessConfig& cfg, double rhs) {
  const double a = cfg.alpha;
  const double b = cfg.beta;
  WitnessReport r;
  r.var_u = a * a * m.var_a1 + b * b * m.var_a2 + 2.0 * a * b * m.cov_a;
  r.var_v = a * a * m.var_b1 + b * b * m.var_b2 - 2.0 * a * b * m.cov_b;
  r.lhs = r.var_u + r.var_v;
  r.rhs = rhs;
  r.margin = r.lhs - r.rhs;
  r.violated = r.margin < -kViolation;
  r.c1 = m.c1;
  r.c2 = m.c2;
  r.config = cfg;
  return r;
}

DensityOperator local_density(const DensityOperator& rho) {
  if (rho.dims().is_bipartite()) throw DimensionError("ensemble factors must be single-system");
  return rho;
}

}  // namespace

ObservablePair::ObservablePair(Observable a1, Observable b1, Observable a2, Observable b2)
    : a1_(std::move(a1)), b1_(std::move(b1)), a2_(std::move(a2)), b2_(std::move(b2)) {
  if (!a1_.dims().is_bipartite()) throw DimensionError("observable pairs need a bipartite space");
  for (const auto* o : {&b1_, &a2_, &b2_}) {
    if (!(o->dims() == a1_.dims())) throw DimensionError("observable pairs disagree on dims");
  }
  require_tag(a1_, Subsystem::First, "A1");
  require_tag(b1_, Subsystem::First, "B1");
  require_tag(a2_, Subsystem::Second, "A2");
  require_tag(b2_, Subsystem::Second, "B2");
}

ObservablePair ObservablePair::from_local(const Matrix& a1, const Matrix& b1, const Matrix& a2,
                                          const Matrix& b2) {
  const auto dims = HilbertDims::bipartite(static_cast<int>(a1.rows()), static_cast<int>(a2.rows()));
  return ObservablePair(Observable(dims, a1, Subsystem::First), Observable(dims, b1, Subsystem::First),
                        Observable(dims, a2, Subsystem::Second),
                        Observable(dims, b2, Subsystem::Second));
}

ObservablePair jkp_pairs(Irrep j1, Irrep j2) {
  const auto s1 = spin_operators(j1);
  const auto s2 = spin_operators(j2);
  return ObservablePair::from_local(s1.jy, s1.jz, s2.jy, -s2.jz);
}

ObservablePair quadrature_pairs(int cutoff) {
  const auto q = quadrature_ops(cutoff);
  return ObservablePair::from_local(q.q, q.p, q.q, q.p);
}

void WitnessConfig::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ValidationError("alpha, beta must be finite");
  if (alpha == 0.0 && beta == 0.0) throw ValidationError("alpha and beta cannot both be zero");
}

CombinedObservables assemble_uv(const ObservablePair& p, const WitnessConfig& cfg) {
  cfg.validate();
  Observable u = p.a1().scaled(cfg.alpha) + p.a2().scaled(cfg.beta);
  Observable v = p.b1().scaled(cfg.alpha) - p.b2().scaled(cfg.beta);
  // u = a A1 (x) 1 + b 1 (x) A2 must hold entrywise
  const Matrix expect_u = cfg.alpha * p.a1().embedded() + cfg.beta * p.a2().embedded();
  const Matrix expect_v = cfg.alpha * p.b1().embedded() - cfg.beta * p.b2().embedded();
  const double scale = 1.0 + expect_u.norm() + expect_v.norm();
  if ((u.embedded() - expect_u).norm() > 1e-12 * scale ||
      (v.embedded() - expect_v).norm() > 1e-12 * scale) {
    throw ValidationError("combined observables do not match their definition");
  }
  return {std::move(u), std::move(v)};
}

WitnessReport general_criterion(const State& state, const ObservablePair& pairs,
                                const WitnessConfig& cfg) {
  cfg.validate();
  const auto m = pair_moments(state, pairs);
  return assemble_report(m, cfg, cfg.alpha * cfg.alpha * m.c1 + cfg.beta * cfg.beta * m.c2);
}

WitnessReport sum_criterion(const State& state, const ObservablePair& pairs) {
  return general_criterion(state, pairs, WitnessConfig{1.0, 1.0});
}

const char* to_string(SpinRhsMode m) { return m == SpinRhsMode::Symmetric ? "symmetric" : "general"; }

SpinWitnessReport spin_criterion(const State& state, Irrep j1, Irrep j2) {
  const auto& dims = dims_of(state);
  if (!(dims == HilbertDims::bipartite(j1.dim(), j2.dim()))) {
    throw DimensionError("spin criterion expects dims " +
                         HilbertDims::bipartite(j1.dim(), j2.dim()).to_string() + ", got " +
                         dims.to_string());
  }
  const auto pairs = jkp_pairs(j1, j2);
  const auto m = pair_moments(state, pairs);
  SpinWitnessReport r;
  r.jx1 = expectation(state, Observable(dims, spin_operators(j1).jx, Subsystem::First));
  r.jx2 = expectation(state, Observable(dims, spin_operators(j2).jx, Subsystem::Second));
  const WitnessConfig unit{1.0, 1.0};
  r.general = assemble_report(m, unit, m.c1 + m.c2);
  r.symmetric = assemble_report(m, unit, 2.0 * std::abs(r.jx1));
  return r;
}

const char* to_string(HwMode m) { return m == HwMode::FixedBound ? "fixed-bound" : "state-dependent"; }

double fock_edge_weight(const State& state, int cutoff) {
  const auto& dims = dims_of(state);
  if (!(dims == HilbertDims::bipartite(cutoff, cutoff))) {
    throw DimensionError("state dims " + dims.to_string() + " do not match cutoff " +
                         std::to_string(cutoff));
  }
  double w = 0.0;
  for (auto which : {Subsystem::First, Subsystem::Second}) {
    const Matrix r = std::visit([&](const auto& s) { return reduced_density(s, which); }, state);
    for (int n = std::max(0, cutoff - 2); n < cutoff; ++n) w += r(n, n).real();
  }
  return w;
}

WitnessReport hw_criterion(const State& state, int cutoff, HwMode mode) {
  constexpr double kEdgeLimit = 1e-6;
  const double edge = fock_edge_weight(state, cutoff);
  if (edge > kEdgeLimit) {
    throw CapabilityError("weight " + std::to_string(edge) +
                          " near the Fock cutoff; truncation is unsafe");
  }
  const auto pairs = quadrature_pairs(cutoff);
  const auto m = pair_moments(state, pairs);
  const double rhs = mode == HwMode::FixedBound ? 2.0 : m.c1 + m.c2;
  return assemble_report(m, WitnessConfig{1.0, 1.0}, rhs);
}

// ---------------------------------------------------------------------------

SeparableEnsemble::SeparableEnsemble(std::vector<EnsembleTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ValidationError("ensemble has no terms");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!(t.p >= 0.0) || !std::isfinite(t.p)) throw ValidationError("ensemble weight is negative");
    local_density(t.rho1);
    local_density(t.rho2);
    if (!(t.rho1.dims() == terms_.front().rho1.dims()) ||
        !(t.rho2.dims() == terms_.front().rho2.dims())) {
      throw DimensionError("ensemble terms disagree on dims");
    }
    total += t.p;
  }
  if (std::abs(total - 1.0) > tolerance::kTrace) {
    throw ValidationError("ensemble weights sum to " + std::to_string(total));
  }
}

HilbertDims SeparableEnsemble::dims() const {
  return HilbertDims::bipartite(terms_.front().rho1.dims().d1(), terms_.front().rho2.dims().d1());
}

DensityOperator ensemble_to_density(const SeparableEnsemble& e) {
  const auto dims = e.dims();
  Matrix rho = Matrix::Zero(dims.joint(), dims.joint());
  for (const auto& t : e.terms()) rho += t.p * kron(t.rho1.matrix(), t.rho2.matrix());
  return DensityOperator(dims, rho);
}

DecompositionCheckReport decomposition_check(const SeparableEnsemble& e, const ObservablePair& pairs,
                                             const WitnessConfig& cfg) {
  cfg.validate();
  if (!(e.dims() == pairs.dims())) throw DimensionError("ensemble and observables disagree on dims");
  const double a = cfg.alpha;
  const double b = cfg.beta;
  const auto d1 = HilbertDims::single(pairs.dims().d1());
  const auto d2 = HilbertDims::single(pairs.dims().d2());
  const Observable a1(d1, pairs.a1().local()), b1(d1, pairs.b1().local());
  const Observable a2(d2, pairs.a2().local()), b2(d2, pairs.b2().local());

  DecompositionCheckReport r;
  double mean_u = 0.0, mean_v = 0.0, sq_u = 0.0, sq_v = 0.0, c_terms = 0.0;
  for (const auto& t : e.terms()) {
    const double u_i = a * expectation(t.rho1, a1) + b * expectation(t.rho2, a2);
    const double v_i = a * expectation(t.rho1, b1) - b * expectation(t.rho2, b2);
    r.term_var_u += t.p * (a * a * variance(t.rho1, a1) + b * b * variance(t.rho2, a2));
    r.term_var_v += t.p * (a * a * variance(t.rho1, b1) + b * b * variance(t.rho2, b2));
    c_terms += t.p * (a * a * commutator_bound(t.rho1, a1, b1) + b * b * commutator_bound(t.rho2, a2, b2));
    mean_u += t.p * u_i;
    mean_v += t.p * v_i;
    sq_u += t.p * u_i * u_i;
    sq_v += t.p * v_i * v_i;
  }
  r.s_u = sq_u - mean_u * mean_u;
  r.s_v = sq_v - mean_v * mean_v;
  r.s = r.s_u + r.s_v;
  r.term_variance_sum = r.term_var_u + r.term_var_v;

  const State rho = ensemble_to_density(e);
  const auto report = general_criterion(rho, pairs, cfg);
  r.direct_var_u = report.var_u;
  r.direct_var_v = report.var_v;
  r.residual = std::max(std::abs(r.direct_var_u - (r.term_var_u + r.s_u)),
                        std::abs(r.direct_var_v - (r.term_var_v + r.s_v)));
  r.term_margin = r.term_variance_sum - c_terms;
  return r;
}

}  // namespace sepwitness
