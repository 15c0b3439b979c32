#pragma once

// Dense states and observables on finite-dimensional, possibly bipartite,
// Hilbert spaces. Joint basis index is i1 * d2 + i2 (Kronecker order).

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace sepwitness {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Raised when operand dimensions disagree with the declared space.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a value violates its type invariant (trace, hermiticity, ...).
class ValidationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a request exceeds what a method can deliver accurately.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tolerance {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kNorm = 1e-12;
inline constexpr double kVarianceClamp = 1e-12;
inline constexpr double kImaginary = 1e-10;
}  // namespace tolerance

class HilbertDims {
 public:
  static HilbertDims single(int d);
  static HilbertDims bipartite(int d1, int d2);

  int d1() const { return d1_; }
  /// 1 when the space is not bipartite.
  int d2() const { return d2_.value_or(1); }
  bool is_bipartite() const { return d2_.has_value(); }
  int joint() const { return d1_ * d2(); }

  std::string to_string() const;
  bool operator==(const HilbertDims&) const = default;

 private:
  HilbertDims(int d1, std::optional<int> d2) : d1_(d1), d2_(d2) {}
  int d1_;
  std::optional<int> d2_;
};

enum class Subsystem { First, Second, Joint };

/// Hermitian operator. Local observables keep their local matrix and are
/// embedded as A (x) 1 or 1 (x) B on demand.
class Observable {
 public:
  Observable(HilbertDims dims, Matrix local, Subsystem where = Subsystem::Joint);

  const HilbertDims& dims() const { return dims_; }
  Subsystem subsystem() const { return where_; }
  const Matrix& local() const { return m_; }
  Matrix embedded() const;

  Observable operator+(const Observable& o) const;
  Observable operator-(const Observable& o) const;
  Observable scaled(double s) const;

 private:
  HilbertDims dims_;
  Matrix m_;
  Subsystem where_;
};

class PureState {
 public:
  PureState(HilbertDims dims, Vector psi);

  const HilbertDims& dims() const { return dims_; }
  const Vector& vector() const { return psi_; }

 private:
  HilbertDims dims_;
  Vector psi_;
};

class DensityOperator {
 public:
  /// Validates hermiticity, unit trace and positivity.
  DensityOperator(HilbertDims dims, Matrix rho);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(HilbertDims dims);

  const HilbertDims& dims() const { return dims_; }
  const Matrix& matrix() const { return rho_; }
  double min_eigenvalue() const;

 private:
  struct Trusted {};
  DensityOperator(HilbertDims dims, Matrix rho, Trusted);
  HilbertDims dims_;
  Matrix rho_;
};

using State = std::variant<PureState, DensityOperator>;

Matrix identity(int d);
Matrix kron(const Matrix& a, const Matrix& b);

/// Joint object with dims (d1, d2). Operands must be single-system values.
Observable tensor(const Observable& a, const Observable& b);
PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Embed a single-system observable into a bipartite space as A (x) 1 or 1 (x) B.
Observable embed(const Observable& local, const HilbertDims& joint, Subsystem where);

Matrix reduced_density(const PureState& s, Subsystem keep);
Matrix reduced_density(const DensityOperator& s, Subsystem keep);

double expectation(const PureState& s, const Observable& o);
double expectation(const DensityOperator& s, const Observable& o);
double expectation(const State& s, const Observable& o);

double variance(const PureState& s, const Observable& o);
double variance(const DensityOperator& s, const Observable& o);
double variance(const State& s, const Observable& o);

/// Symmetrized covariance 1/2 <dA dB + dB dA>.
double covariance(const PureState& s, const Observable& a, const Observable& b);
double covariance(const DensityOperator& s, const Observable& a, const Observable& b);
double covariance(const State& s, const Observable& a, const Observable& b);

/// |Tr(rho [A, B])|.
double commutator_bound(const PureState& s, const Observable& a, const Observable& b);
double commutator_bound(const DensityOperator& s, const Observable& a, const Observable& b);
double commutator_bound(const State& s, const Observable& a, const Observable& b);

const HilbertDims& dims_of(const State& s);

bool is_hermitian(const Matrix& m, double rel_tol = tolerance::kHermitian);

}  // namespace sepwitness
