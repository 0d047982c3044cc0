#include "catline/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <sstream>

namespace catline {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kEigTol = -1e-8;

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw StateValidationError(std::string(what) + ": non-finite entries");
  }
}

void check_dim(int dim, const char* what) {
  if (dim < 2) {
    std::ostringstream os;
    os << what << ": dim must be >= 2 (got " << dim << ")";
    throw InvalidDimensionError(os.str());
  }
}

}  // namespace

SpaceLayout SpaceLayout::single(int dim) {
  check_dim(dim, "SpaceLayout");
  return SpaceLayout{{dim}, dim};
}

SpaceLayout SpaceLayout::composite(std::vector<int> factors) {
  if (factors.empty()) {
    throw ShapeError("SpaceLayout: at least one factor required");
  }
  int total = 1;
  for (int f : factors) {
    check_dim(f, "SpaceLayout");
    total *= f;
  }
  return SpaceLayout{std::move(factors), total};
}

Operator::Operator(SpaceLayout layout, Matrix m)
    : layout_(std::move(layout)), m_(std::move(m)) {
  if (m_.rows() != layout_.total_dim || m_.cols() != layout_.total_dim) {
    std::ostringstream os;
    os << "Operator: matrix is " << m_.rows() << "x" << m_.cols()
       << " but layout total_dim is " << layout_.total_dim;
    throw ShapeError(os.str());
  }
  check_finite(m_, "Operator");
}

Operator Operator::zero(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Zero(layout.total_dim, layout.total_dim));
}

Operator Operator::identity(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Identity(layout.total_dim, layout.total_dim));
}

Operator Operator::operator*(const Operator& rhs) const {
  if (!(layout_ == rhs.layout_)) {
    throw ShapeError("Operator*: layout mismatch");
  }
  return Operator(layout_, m_ * rhs.m_);
}

Operator Operator::operator+(const Operator& rhs) const {
  if (!(layout_ == rhs.layout_)) {
    throw ShapeError("Operator+: layout mismatch");
  }
  return Operator(layout_, m_ + rhs.m_);
}

Operator Operator::operator-(const Operator& rhs) const {
  if (!(layout_ == rhs.layout_)) {
    throw ShapeError("Operator-: layout mismatch");
  }
  return Operator(layout_, m_ - rhs.m_);
}

Operator operator*(Complex c, const Operator& op) {
  return Operator(op.layout_, c * op.m_);
}

DensityMatrix::DensityMatrix(SpaceLayout layout, Matrix m)
    : layout_(std::move(layout)), m_(std::move(m)) {
  if (m_.rows() != layout_.total_dim || m_.cols() != layout_.total_dim) {
    throw ShapeError("DensityMatrix: matrix size does not match layout");
  }
  check_finite(m_, "DensityMatrix");
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermTol) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (max |rho - rho^dag| = " << herm << ")";
    throw StateValidationError(os.str());
  }
  const double tr_err = std::abs(m_.trace() - Complex(1.0, 0.0));
  if (tr_err > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace deviates from 1 by " << tr_err;
    throw StateValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigTol) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << min_eig;
    throw StateValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(SpaceLayout layout, const Vector& psi) {
  if (psi.size() != layout.total_dim) {
    throw ShapeError("DensityMatrix::pure: vector size does not match layout");
  }
  return DensityMatrix(std::move(layout), psi * psi.adjoint());
}

Operator annihilation(int dim) {
  check_dim(dim, "annihilation");
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    m(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return Operator(SpaceLayout::single(dim), std::move(m));
}

Operator creation(int dim) {
  check_dim(dim, "creation");
  return dagger(annihilation(dim));
}

Operator number(int dim) {
  check_dim(dim, "number");
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    m(n, n) = static_cast<double>(n);
  }
  return Operator(SpaceLayout::single(dim), std::move(m));
}

Operator identity(int dim) {
  return Operator::identity(SpaceLayout::single(dim));
}

Operator dagger(const Operator& op) {
  return Operator(op.layout(), op.matrix().adjoint());
}

Operator commutator(const Operator& a, const Operator& b) {
  if (!(a.layout() == b.layout())) {
    throw ShapeError("commutator: layout mismatch");
  }
  return Operator(a.layout(), a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

Operator tensor(const std::vector<Operator>& ops) {
  if (ops.empty()) {
    throw ShapeError("tensor: at least one operand required");
  }
  Matrix result = ops.front().matrix();
  std::vector<int> factors = ops.front().layout().factors;
  for (size_t k = 1; k < ops.size(); ++k) {
    const Matrix& b = ops[k].matrix();
    const Eigen::Index ra = result.rows(), rb = b.rows();
    Matrix next(ra * rb, ra * rb);
    for (Eigen::Index i = 0; i < ra; ++i) {
      for (Eigen::Index j = 0; j < ra; ++j) {
        next.block(i * rb, j * rb, rb, rb) = result(i, j) * b;
      }
    }
    result.swap(next);
    const auto& bf = ops[k].layout().factors;
    factors.insert(factors.end(), bf.begin(), bf.end());
  }
  return Operator(SpaceLayout::composite(std::move(factors)), std::move(result));
}

Operator tensor(const Operator& a, const Operator& b) {
  return tensor(std::vector<Operator>{a, b});
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  const auto& factors = rho.layout().factors;
  if (factors.size() < 2) {
    throw ShapeError("partial_trace: layout must have >= 2 factors");
  }
  if (keep < 0 || keep >= static_cast<int>(factors.size())) {
    std::ostringstream os;
    os << "partial_trace: keep index " << keep << " out of range [0, "
       << factors.size() << ")";
    throw ShapeError(os.str());
  }
  const int dk = factors[keep];
  // Row index decomposes as (left, k, right) with strides
  // (dk * d_right, d_right, 1) in the fixed factor ordering.
  int d_left = 1, d_right = 1;
  for (int i = 0; i < keep; ++i) d_left *= factors[i];
  for (size_t i = keep + 1; i < factors.size(); ++i) d_right *= factors[i];

  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(dk, dk);
  for (int a = 0; a < dk; ++a) {
    for (int b = 0; b < dk; ++b) {
      Complex sum(0.0, 0.0);
      for (int l = 0; l < d_left; ++l) {
        for (int r = 0; r < d_right; ++r) {
          const int row = (l * dk + a) * d_right + r;
          const int col = (l * dk + b) * d_right + r;
          sum += m(row, col);
        }
      }
      out(a, b) = sum;
    }
  }
  return DensityMatrix(SpaceLayout::single(dk), std::move(out));
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
  if (!(rho.layout() == op.layout())) {
    throw ShapeError("expectation: layout mismatch");
  }
  return (rho.matrix() * op.matrix()).trace();
}

}  // namespace catline
