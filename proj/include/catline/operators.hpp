#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "catline/errors.hpp"

namespace catline {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Ordered factor dimensions of a (possibly composite) Hilbert space.
/// Subsystem ordering is fixed and global: probe mode is factor 0,
/// reservoir unit is factor 1.
struct SpaceLayout {
  std::vector<int> factors;
  int total_dim = 0;

  static SpaceLayout single(int dim);
  static SpaceLayout composite(std::vector<int> factors);

  bool operator==(const SpaceLayout& other) const {
    return factors == other.factors;
  }
};

/// Dense complex matrix on a truncated Fock space or composite space.
/// Immutable after construction; all entries finite.
class Operator {
 public:
  Operator(SpaceLayout layout, Matrix m);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  int dim() const { return layout_.total_dim; }

  static Operator zero(const SpaceLayout& layout);
  static Operator identity(const SpaceLayout& layout);

  Operator operator*(const Operator& rhs) const;
  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  friend Operator operator*(Complex c, const Operator& op);

 private:
  SpaceLayout layout_;
  Matrix m_;
};

/// Hermitian, unit-trace, positive-semidefinite state.
/// Invariants checked at construction: max |rho - rho^dag| <= 1e-12,
/// |tr rho - 1| <= 1e-10, min eigenvalue >= -1e-8.
class DensityMatrix {
 public:
  DensityMatrix(SpaceLayout layout, Matrix m);

  /// Pure state |psi><psi| (psi normalized by the caller).
  static DensityMatrix pure(SpaceLayout layout, const Vector& psi);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  int dim() const { return layout_.total_dim; }

 private:
  SpaceLayout layout_;
  Matrix m_;
};

/// Annihilation operator a on a dim-level Fock space: (n-1, n) = sqrt(n).
Operator annihilation(int dim);

/// Creation operator a^dag = annihilation(dim)^dag.
Operator creation(int dim);

/// Number operator diag(0, 1, ..., dim-1).
Operator number(int dim);

/// Identity on a dim-level space.
Operator identity(int dim);

/// Conjugate transpose.
Operator dagger(const Operator& op);

/// A*B - B*A. Throws ShapeError on layout mismatch.
Operator commutator(const Operator& a, const Operator& b);

/// Kronecker product in operand order; layout = concatenated factors.
Operator tensor(const std::vector<Operator>& ops);
Operator tensor(const Operator& a, const Operator& b);

/// Reduced state on factor `keep`, tracing out all other factors.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

/// Tr[rho * op]. Throws ShapeError on layout mismatch.
Complex expectation(const DensityMatrix& rho, const Operator& op);

}  // namespace catline
