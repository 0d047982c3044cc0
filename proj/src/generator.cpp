#include "generator.hpp"

#include <cmath>

namespace catline::detail {

namespace {

void band_rowabs(const BandTerm& b, Eigen::VectorXd& acc) {
  const int i0 = b.offset < 0 ? -b.offset : 0;
  for (int k = 0; k < b.values.size(); ++k) {
    acc(i0 + k) += std::abs(b.values(k));
  }
}

}  // namespace

Generator::Generator(int dim, std::vector<BandTerm> h_static,
                     std::vector<BandTerm> h_drive,
                     std::vector<RankOneTerm> h_rank1,
                     std::vector<JumpShift> jumps)
    : dim_(dim),
      h_static_(std::move(h_static)),
      h_drive_(std::move(h_drive)),
      h_rank1_(std::move(h_rank1)),
      jumps_(std::move(jumps)) {
  Eigen::VectorXd q_total = Eigen::VectorXd::Zero(dim_);
  for (const auto& j : jumps_) {
    jump_left_.push_back((j.rate * j.scale).cast<Complex>());
    jump_right_.push_back(j.scale.cast<Complex>());
    for (int i = 0; i < j.scale.size(); ++i) {
      q_total(i + j.shift) += j.rate * j.scale(i) * j.scale(i);
    }
  }
  q_half_ = (0.5 * q_total).cast<Complex>();
  static_rowabs_ = Eigen::VectorXd::Zero(dim_);
  drive_rowabs_ = Eigen::VectorXd::Zero(dim_);
  rank1_rowabs_ = Eigen::VectorXd::Zero(dim_);
  for (const auto& b : h_static_) band_rowabs(b, static_rowabs_);
  for (const auto& b : h_drive_) band_rowabs(b, drive_rowabs_);
  for (const auto& r : h_rank1_) {
    const double v1 = r.v.cwiseAbs().sum();
    rank1_rowabs_ += std::abs(r.coeff) * v1 * r.u.cwiseAbs();
  }
}

void Generator::apply_h(const Matrix& rho, double eps2, Matrix& out) const {
  out.setZero();
  for (const auto& b : h_static_) {
    const int len = static_cast<int>(b.values.size());
    const int i0 = b.offset < 0 ? -b.offset : 0;
    const int j0 = b.offset > 0 ? b.offset : 0;
    out.middleRows(i0, len).noalias() +=
        b.values.asDiagonal() * rho.middleRows(j0, len);
  }
  for (const auto& b : h_drive_) {
    const int len = static_cast<int>(b.values.size());
    const int i0 = b.offset < 0 ? -b.offset : 0;
    const int j0 = b.offset > 0 ? b.offset : 0;
    out.middleRows(i0, len).noalias() +=
        (eps2 * b.values).asDiagonal() * rho.middleRows(j0, len);
  }
  for (const auto& r : h_rank1_) {
    out.noalias() += (r.coeff * r.u) * (r.v.adjoint() * rho);
  }
}

void Generator::rhs(const Matrix& rho, double eps2, Matrix& out,
                    Matrix& work) const {
  apply_h(rho, eps2, work);  // work = H rho
  const Complex mi(0.0, -1.0);
  out = mi * (work - work.adjoint());
  for (size_t k = 0; k < jumps_.size(); ++k) {
    const int m = static_cast<int>(jumps_[k].scale.size());
    const int s = jumps_[k].shift;
    // rate * o rho o^dag lands on the leading m x m block.
    out.topLeftCorner(m, m).noalias() +=
        jump_left_[k].asDiagonal() *
        (rho.block(s, s, m, m) * jump_right_[k].asDiagonal());
  }
  // -1/2 {sum_j rate_j o^dag o, rho}, all diagonals folded into q_half_.
  out.noalias() -= q_half_.asDiagonal() * rho;
  out.noalias() -= rho * q_half_.asDiagonal();
}

Matrix Generator::dense_hamiltonian(double eps2) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (const auto& b : h_static_) {
    const int i0 = b.offset < 0 ? -b.offset : 0;
    const int j0 = b.offset > 0 ? b.offset : 0;
    for (int k = 0; k < b.values.size(); ++k) h(i0 + k, j0 + k) += b.values(k);
  }
  for (const auto& b : h_drive_) {
    const int i0 = b.offset < 0 ? -b.offset : 0;
    const int j0 = b.offset > 0 ? b.offset : 0;
    for (int k = 0; k < b.values.size(); ++k) {
      h(i0 + k, j0 + k) += eps2 * b.values(k);
    }
  }
  for (const auto& r : h_rank1_) {
    h.noalias() += (r.coeff * r.u) * r.v.adjoint();
  }
  return h;
}

double Generator::h_inf_norm(double eps2) const {
  double best = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double row = static_rowabs_(i) + std::abs(eps2) * drive_rowabs_(i) +
                       rank1_rowabs_(i);
    if (row > best) best = row;
  }
  return best;
}

Rk4Stepper::Rk4Stepper(const Generator& gen) : gen_(gen) {
  const int d = gen.dim();
  k1_.resize(d, d);
  k2_.resize(d, d);
  k3_.resize(d, d);
  k4_.resize(d, d);
  stage_.resize(d, d);
  work_.resize(d, d);
}

Generator kerr_cat_generator(double kerr, double delta, double kappa1,
                             double kappa2, int dim) {
  std::vector<BandTerm> h_static;
  std::vector<BandTerm> h_drive;
  Vector diag(dim);
  for (int n = 0; n < dim; ++n) {
    diag(n) = kerr * static_cast<double>(n) * (n - 1.0) + delta * n;
  }
  h_static.push_back({0, std::move(diag)});

  Vector two(dim - 2);
  for (int n = 0; n + 2 < dim; ++n) {
    two(n) = -std::sqrt((n + 1.0) * (n + 2.0));  // scaled by eps2(t)
  }
  h_drive.push_back({2, two});
  h_drive.push_back({-2, two});

  std::vector<JumpShift> jumps;
  if (kappa1 > 0.0) {
    Eigen::VectorXd w(dim - 1);
    for (int n = 0; n + 1 < dim; ++n) w(n) = std::sqrt(n + 1.0);
    jumps.push_back({1, std::move(w), kappa1});
  }
  if (kappa2 > 0.0) {
    Eigen::VectorXd w(dim - 2);
    for (int n = 0; n + 2 < dim; ++n) w(n) = std::sqrt((n + 1.0) * (n + 2.0));
    jumps.push_back({2, std::move(w), kappa2});
  }
  return Generator(dim, std::move(h_static), std::move(h_drive), {},
                   std::move(jumps));
}

}  // namespace catline::detail
