#pragma once

// Internal structured representation of the GKSL generator. The Kerr-cat
// Hamiltonian is banded (offsets 0, +/-2 in the mode space), the jump
// operators a and a^2 are single-diagonal shifts, and the cat-exchange
// coupling is a sum of rank-1 terms. Applying the structure directly costs
// O(d^2) per right-hand-side evaluation instead of O(d^3) for dense
// products, which is what makes the long stabilization and collision runs
// tractable. Equivalence with the dense formula is pinned by tests.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "catline/operators.hpp"

namespace catline::detail {

// H(i0+k, j0+k) = values(k) with i0 = max(0,-offset), j0 = max(0,offset).
struct BandTerm {
  int offset = 0;
  Vector values;
};

// coeff * u * v^dag.
struct RankOneTerm {
  Vector u;
  Vector v;
  Complex coeff{1.0, 0.0};
};

// o = sum_i scale(i) |i><i+shift| with rate kappa.
struct JumpShift {
  int shift = 0;
  Eigen::VectorXd scale;
  double rate = 0.0;
};

class Generator {
 public:
  Generator(int dim, std::vector<BandTerm> h_static, std::vector<BandTerm> h_drive,
            std::vector<RankOneTerm> h_rank1, std::vector<JumpShift> jumps);

  int dim() const { return dim_; }

  /// d rho = -i[H(eps2), rho] + sum_j rate_j D[o_j] rho.
  /// `work` is scratch of the same size as rho.
  void rhs(const Matrix& rho, double eps2, Matrix& out, Matrix& work) const;

  /// Dense H(eps2), for the public operator surface and cross-checks.
  Matrix dense_hamiltonian(double eps2) const;

  /// Upper bound on ||H(eps2)||_inf from the structure.
  double h_inf_norm(double eps2) const;

 private:
  void apply_h(const Matrix& rho, double eps2, Matrix& out) const;

  int dim_;
  std::vector<BandTerm> h_static_;
  std::vector<BandTerm> h_drive_;
  std::vector<RankOneTerm> h_rank1_;
  std::vector<JumpShift> jumps_;
  std::vector<Vector> jump_left_;   // rate * scale, complex
  std::vector<Vector> jump_right_;  // scale, complex
  Vector q_half_;                   // 1/2 sum_j rate_j diag(o_j^dag o_j)
  Eigen::VectorXd static_rowabs_;   // per-row |entry| sums for the norm bound
  Eigen::VectorXd drive_rowabs_;
  Eigen::VectorXd rank1_rowabs_;
};

/// Classic fixed-step RK4 on the generator; eps2 sampled at stage times.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const Generator& gen);

  template <typename DriveFn>
  void step(Matrix& rho, double t, double dt, DriveFn&& eps2_at) {
    const double e0 = eps2_at(t);
    const double eh = eps2_at(t + 0.5 * dt);
    const double e1 = eps2_at(t + dt);
    gen_.rhs(rho, e0, k1_, work_);
    stage_ = rho + (0.5 * dt) * k1_;
    gen_.rhs(stage_, eh, k2_, work_);
    stage_ = rho + (0.5 * dt) * k2_;
    gen_.rhs(stage_, eh, k3_, work_);
    stage_ = rho + dt * k3_;
    gen_.rhs(stage_, e1, k4_, work_);
    rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  const Generator& gen_;
  Matrix k1_, k2_, k3_, k4_, stage_, work_;
};

/// Kerr-cat generator on a single mode: H = K a^dag2 a^2 - eps2 (a^dag2 + a^2)
/// + delta a^dag a, jumps {(kappa1, a), (kappa2, a^2)}.
Generator kerr_cat_generator(double kerr, double delta, double kappa1,
                             double kappa2, int dim);

}  // namespace catline::detail
