#include "catline/states.hpp"

#include <cmath>
#include <sstream>

namespace catline {

namespace {

constexpr double kNormTol = 1e-10;

Operator embed(const SpaceLayout& layout, const Matrix& m) {
  return Operator(layout, m);
}

}  // namespace

Ket::Ket(int dim_, Vector amps) : dim(dim_), amplitudes(std::move(amps)) {
  if (amplitudes.size() != dim) {
    throw ShapeError("Ket: amplitude vector size does not match dim");
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "Ket: norm deviates from 1 by " << std::abs(norm - 1.0);
    throw StateValidationError(os.str());
  }
}

DensityMatrix Ket::density() const {
  return DensityMatrix::pure(SpaceLayout::single(dim), amplitudes);
}

int required_dim(double alpha_abs) {
  const double rule = alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0;
  const int dim = static_cast<int>(std::ceil(rule));
  return dim < 8 ? 8 : dim;
}

Ket fock(int n, int dim) {
  if (dim < 2) {
    throw InvalidDimensionError("fock: dim must be >= 2");
  }
  if (n < 0 || n >= dim) {
    throw ShapeError("fock: n out of range");
  }
  Vector v = Vector::Zero(dim);
  v(n) = 1.0;
  return Ket(dim, std::move(v));
}

Ket coherent(Complex alpha, int dim) {
  const double aa = std::abs(alpha);
  const int needed = required_dim(aa);
  if (dim < needed) {
    std::ostringstream os;
    os << "coherent: dim " << dim << " below sizing rule " << needed
       << " for |alpha| = " << aa;
    throw TruncationError(os.str());
  }
  Vector v(dim);
  v(0) = 1.0;
  for (int n = 1; n < dim; ++n) {
    v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  v /= v.norm();
  return Ket(dim, std::move(v));
}

Ket cat(double alpha, Parity parity, int dim) {
  if (alpha < 0.0) {
    throw DegenerateStateError("cat: alpha must be >= 0");
  }
  if (alpha == 0.0 && parity == Parity::Odd) {
    throw DegenerateStateError("cat: odd cat undefined at alpha = 0");
  }
  Ket c = coherent(Complex(alpha, 0.0), dim);
  // |-alpha> amplitudes are (-1)^n times those of |alpha>; forming the
  // sum/difference entrywise makes wrong-parity amplitudes exactly zero.
  Vector v(dim);
  for (int n = 0; n < dim; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    v(n) = (parity == Parity::Even) ? c.amplitudes(n) * (1.0 + sign)
                                    : c.amplitudes(n) * (1.0 - sign);
  }
  v /= v.norm();
  return Ket(dim, std::move(v));
}

CatBasis cat_basis(double alpha, int dim) {
  Ket cp = cat(alpha, Parity::Even, dim);
  Ket cm = cat(alpha, Parity::Odd, dim);
  const SpaceLayout layout = SpaceLayout::single(dim);
  const Vector& p = cp.amplitudes;
  const Vector& m = cm.amplitudes;
  const Complex i(0.0, 1.0);
  Matrix sx = p * m.adjoint() + m * p.adjoint();
  Matrix sy = -i * (p * m.adjoint()) + i * (m * p.adjoint());
  Matrix sz = p * p.adjoint() - m * m.adjoint();
  return CatBasis{alpha,
                  dim,
                  std::move(cp),
                  std::move(cm),
                  embed(layout, std::move(sx)),
                  embed(layout, std::move(sy)),
                  embed(layout, std::move(sz))};
}

Ket logical_state(const CatBasis& basis, double theta, double phi) {
  const Complex phase = std::exp(Complex(0.0, -phi));
  Vector v = std::cos(theta / 2.0) * basis.c_plus.amplitudes +
             std::sin(theta / 2.0) * phase * basis.c_minus.amplitudes;
  v /= v.norm();
  return Ket(basis.dim, std::move(v));
}

Ket plus_state(const CatBasis& basis) {
  Vector v = (basis.c_plus.amplitudes + basis.c_minus.amplitudes) / std::sqrt(2.0);
  v /= v.norm();
  return Ket(basis.dim, std::move(v));
}

BlochVector bloch_vector(const DensityMatrix& rho, const CatBasis& basis) {
  if (rho.dim() != basis.dim) {
    throw ShapeError("bloch_vector: state dimension does not match basis");
  }
  return BlochVector{expectation(rho, basis.sigma_x).real(),
                     expectation(rho, basis.sigma_y).real(),
                     expectation(rho, basis.sigma_z).real()};
}

double fidelity(const DensityMatrix& rho, const Ket& ket) {
  if (rho.dim() != ket.dim) {
    throw ShapeError("fidelity: dimensions do not match");
  }
  const Complex f = ket.amplitudes.adjoint() * (rho.matrix() * ket.amplitudes);
  return f.real();
}

}  // namespace catline
