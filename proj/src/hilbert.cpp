#include "sepwitness/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sepwitness {

namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

int local_dim(const HilbertDims& dims, Subsystem where) {
  switch (where) {
    case Subsystem::First: return dims.d1();
    case Subsystem::Second: return dims.d2();
    case Subsystem::Joint: return dims.joint();
  }
  return 0;
}

// A single-system space has no distinction between "first" and "joint".
Subsystem normalize(const HilbertDims& dims, Subsystem where) {
  if (!dims.is_bipartite() && where == Subsystem::First) return Subsystem::Joint;
  return where;
}

void require_same_dims(const HilbertDims& a, const HilbertDims& b, const char* what) {
  if (!(a == b)) {
    throw DimensionError(std::string(what) + ": dims " + a.to_string() + " vs " + b.to_string());
  }
}

// Tr(rho A B) for the cross term A on system 1, B on system 2.
Complex cross_term(const PureState& s, const Matrix& a, const Matrix& b) {
  const auto& d = s.dims();
  RowMajorMap psi(s.vector().data(), d.d1(), d.d2());
  Matrix w = a * psi * b.transpose();
  return (psi.conjugate().cwiseProduct(w)).sum();
}

Complex cross_term(const DensityOperator& s, const Matrix& a, const Matrix& b) {
  const int d1 = s.dims().d1();
  const int d2 = s.dims().d2();
  const Matrix bt = b.transpose();
  Complex acc = 0.0;
  for (int i = 0; i < d1; ++i) {
    for (int j = 0; j < d1; ++j) {
      if (a(j, i) == Complex(0.0)) continue;
      auto block = s.matrix().block(i * d2, j * d2, d2, d2);
      acc += a(j, i) * block.cwiseProduct(bt).sum();
    }
  }
  return acc;
}

Complex joint_term(const PureState& s, const Matrix& a, const Matrix& b) {
  return (a * s.vector()).dot(b * s.vector());
}

Complex joint_term(const DensityOperator& s, const Matrix& a, const Matrix& b) {
  Matrix ra = s.matrix() * a;
  return ra.cwiseProduct(b.transpose()).sum();
}

// Tr(rho A B) with A, B each living on either subsystem or the joint space.
template <class S>
Complex trace_product(const S& s, const Observable& a, const Observable& b) {
  require_same_dims(s.dims(), a.dims(), "trace_product");
  require_same_dims(s.dims(), b.dims(), "trace_product");
  const auto& dims = s.dims();
  Subsystem wa = normalize(dims, a.subsystem());
  Subsystem wb = normalize(dims, b.subsystem());
  if (wa == Subsystem::Joint || wb == Subsystem::Joint) {
    return joint_term(s, a.embedded(), b.embedded());
  }
  if (wa == wb) {
    Matrix r = reduced_density(s, wa);
    return (r * a.local()).cwiseProduct(b.local().transpose()).sum();
  }
  if (wa == Subsystem::First) return cross_term(s, a.local(), b.local());
  return cross_term(s, b.local(), a.local());
}

template <class S>
Complex trace_single(const S& s, const Observable& o) {
  require_same_dims(s.dims(), o.dims(), "expectation");
  Subsystem w = normalize(s.dims(), o.subsystem());
  if (w == Subsystem::Joint) {
    if constexpr (std::is_same_v<S, PureState>) {
      return s.vector().dot(o.local() * s.vector());
    } else {
      return s.matrix().cwiseProduct(o.local().transpose()).sum();
    }
  }
  Matrix r = reduced_density(s, w);
  return r.cwiseProduct(o.local().transpose()).sum();
}

template <class S>
double expectation_impl(const S& s, const Observable& o) {
  Complex t = trace_single(s, o);
  if (std::abs(t.imag()) > tolerance::kImaginary * std::max(1.0, std::abs(t.real()))) {
    throw ValidationError("expectation has imaginary part " + std::to_string(t.imag()));
  }
  return t.real();
}

template <class S>
double variance_impl(const S& s, const Observable& o) {
  double mean = expectation_impl(s, o);
  double second = trace_product(s, o, o).real();
  double v = second - mean * mean;
  if (v < 0.0) {
    if (v >= -tolerance::kVarianceClamp * std::max(1.0, std::abs(second))) return 0.0;
    throw ValidationError("negative variance " + std::to_string(v));
  }
  return v;
}

template <class S>
double covariance_impl(const S& s, const Observable& a, const Observable& b) {
  Complex ab = trace_product(s, a, b);
  return ab.real() - expectation_impl(s, a) * expectation_impl(s, b);
}

template <class S>
double commutator_impl(const S& s, const Observable& a, const Observable& b) {
  Complex c = trace_product(s, a, b) - trace_product(s, b, a);
  if (std::abs(c.real()) > tolerance::kImaginary * std::max(1.0, std::abs(c.imag()))) {
    throw ValidationError("commutator expectation is not purely imaginary");
  }
  return std::abs(c);
}

}  // namespace

HilbertDims HilbertDims::single(int d) {
  if (d < 1) throw DimensionError("dimension must be >= 1");
  return HilbertDims(d, std::nullopt);
}

HilbertDims HilbertDims::bipartite(int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw DimensionError("dimensions must be >= 1");
  return HilbertDims(d1, d2);
}

std::string HilbertDims::to_string() const {
  std::ostringstream os;
  os << "(" << d1_;
  if (d2_) os << "," << *d2_;
  os << ")";
  return os.str();
}

bool is_hermitian(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= rel_tol * scale;
}

Observable::Observable(HilbertDims dims, Matrix local, Subsystem where)
    : dims_(dims), m_(std::move(local)), where_(where) {
  if (where_ == Subsystem::Second && !dims_.is_bipartite()) {
    throw DimensionError("system-2 observable on a single-system space");
  }
  const int d = local_dim(dims_, where_);
  if (m_.rows() != d || m_.cols() != d) {
    throw DimensionError("observable matrix is " + std::to_string(m_.rows()) + "x" +
                         std::to_string(m_.cols()) + ", expected " + std::to_string(d));
  }
  if (!is_hermitian(m_)) throw ValidationError("observable is not Hermitian");
}

Matrix Observable::embedded() const {
  switch (normalize(dims_, where_)) {
    case Subsystem::First: return kron(m_, identity(dims_.d2()));
    case Subsystem::Second: return kron(identity(dims_.d1()), m_);
    case Subsystem::Joint: return m_;
  }
  return m_;
}

Observable Observable::operator+(const Observable& o) const {
  require_same_dims(dims_, o.dims_, "observable sum");
  if (where_ == o.where_) return Observable(dims_, m_ + o.m_, where_);
  return Observable(dims_, embedded() + o.embedded(), Subsystem::Joint);
}

Observable Observable::operator-(const Observable& o) const { return *this + o.scaled(-1.0); }

Observable Observable::scaled(double s) const { return Observable(dims_, m_ * s, where_); }

PureState::PureState(HilbertDims dims, Vector psi) : dims_(dims), psi_(std::move(psi)) {
  if (psi_.size() != dims_.joint()) throw DimensionError("state vector length mismatch");
  if (std::abs(psi_.squaredNorm() - 1.0) > tolerance::kNorm) {
    throw ValidationError("state vector is not normalized: |psi|^2 = " +
                          std::to_string(psi_.squaredNorm()));
  }
}

DensityOperator::DensityOperator(HilbertDims dims, Matrix rho) : dims_(dims), rho_(std::move(rho)) {
  if (rho_.rows() != dims_.joint() || rho_.cols() != dims_.joint()) {
    throw DimensionError("density matrix size mismatch");
  }
  if (!is_hermitian(rho_)) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho_.trace().real() - 1.0) > tolerance::kTrace) {
    throw ValidationError("density matrix trace is " + std::to_string(rho_.trace().real()));
  }
  if (min_eigenvalue() < -tolerance::kPsd) {
    throw ValidationError("density matrix is not positive semidefinite");
  }
}

DensityOperator::DensityOperator(HilbertDims dims, Matrix rho, Trusted)
    : dims_(dims), rho_(std::move(rho)) {}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.dims(), psi.vector() * psi.vector().adjoint(), Trusted{});
}

DensityOperator DensityOperator::maximally_mixed(HilbertDims dims) {
  return DensityOperator(dims, identity(dims.joint()) / double(dims.joint()), Trusted{});
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Observable tensor(const Observable& a, const Observable& b) {
  if (a.dims().is_bipartite() || b.dims().is_bipartite()) {
    throw DimensionError("tensor expects single-system operands");
  }
  return Observable(HilbertDims::bipartite(a.dims().d1(), b.dims().d1()),
                    kron(a.local(), b.local()), Subsystem::Joint);
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.dims().is_bipartite() || b.dims().is_bipartite()) {
    throw DimensionError("tensor expects single-system operands");
  }
  Vector v(a.vector().size() * b.vector().size());
  for (Eigen::Index i = 0; i < a.vector().size(); ++i) {
    v.segment(i * b.vector().size(), b.vector().size()) = a.vector()(i) * b.vector();
  }
  return PureState(HilbertDims::bipartite(a.dims().d1(), b.dims().d1()), std::move(v));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  if (a.dims().is_bipartite() || b.dims().is_bipartite()) {
    throw DimensionError("tensor expects single-system operands");
  }
  return DensityOperator(HilbertDims::bipartite(a.dims().d1(), b.dims().d1()),
                         kron(a.matrix(), b.matrix()));
}

Observable embed(const Observable& local, const HilbertDims& joint, Subsystem where) {
  if (local.dims().is_bipartite()) throw DimensionError("embed expects a single-system observable");
  if (!joint.is_bipartite()) throw DimensionError("embed target must be bipartite");
  const int expected = where == Subsystem::First ? joint.d1() : joint.d2();
  if (where == Subsystem::Joint || local.dims().d1() != expected) {
    throw DimensionError("embed: local dimension does not match target subsystem");
  }
  return Observable(joint, local.local(), where);
}

Matrix reduced_density(const PureState& s, Subsystem keep) {
  const auto& d = s.dims();
  if (normalize(d, keep) == Subsystem::Joint) return s.vector() * s.vector().adjoint();
  RowMajorMap psi(s.vector().data(), d.d1(), d.d2());
  if (keep == Subsystem::First) return psi * psi.adjoint();
  return psi.transpose() * psi.conjugate();
}

Matrix reduced_density(const DensityOperator& s, Subsystem keep) {
  const auto& d = s.dims();
  if (normalize(d, keep) == Subsystem::Joint) return s.matrix();
  const int d1 = d.d1();
  const int d2 = d.d2();
  if (keep == Subsystem::First) {
    Matrix r(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) r(i, j) = s.matrix().block(i * d2, j * d2, d2, d2).trace();
    return r;
  }
  Matrix r = Matrix::Zero(d2, d2);
  for (int i = 0; i < d1; ++i) r += s.matrix().block(i * d2, i * d2, d2, d2);
  return r;
}

double expectation(const PureState& s, const Observable& o) { return expectation_impl(s, o); }
double expectation(const DensityOperator& s, const Observable& o) { return expectation_impl(s, o); }
double expectation(const State& s, const Observable& o) {
  return std::visit([&](const auto& x) { return expectation_impl(x, o); }, s);
}

double variance(const PureState& s, const Observable& o) { return variance_impl(s, o); }
double variance(const DensityOperator& s, const Observable& o) { return variance_impl(s, o); }
double variance(const State& s, const Observable& o) {
  return std::visit([&](const auto& x) { return variance_impl(x, o); }, s);
}

double covariance(const PureState& s, const Observable& a, const Observable& b) {
  return covariance_impl(s, a, b);
}
double covariance(const DensityOperator& s, const Observable& a, const Observable& b) {
  return covariance_impl(s, a, b);
}
double covariance(const State& s, const Observable& a, const Observable& b) {
  return std::visit([&](const auto& x) { return covariance_impl(x, a, b); }, s);
}

double commutator_bound(const PureState& s, const Observable& a, const Observable& b) {
  return commutator_impl(s, a, b);
}
double commutator_bound(const DensityOperator& s, const Observable& a, const Observable& b) {
  return commutator_impl(s, a, b);
}
double commutator_bound(const State& s, const Observable& a, const Observable& b) {
  return std::visit([&](const auto& x) { return commutator_impl(x, a, b); }, s);
}

const HilbertDims& dims_of(const State& s) {
  return std::visit([](const auto& x) -> const HilbertDims& { return x.dims(); }, s);
}

}  // namespace sepwitness
