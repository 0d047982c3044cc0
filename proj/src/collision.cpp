#include "catline/collision.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "generator.hpp"

namespace catline {

namespace {

constexpr double kStabilityGuard = 0.1;

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

void validate_params(const CollisionParams& cp) {
  if (cp.eps_x < 0.0) throw ConfigError("collision: eps_x must be >= 0");
  if (cp.tau <= 0.0) throw ConfigError("collision: tau must be > 0");
  if (cp.dt <= 0.0) throw ConfigError("collision: dt must be > 0");
  if (cp.n_collisions < 1) {
    throw ConfigError("collision: n_collisions must be >= 1");
  }
  if (cp.reservoirs.empty()) {
    throw ConfigError("collision: at least one reservoir spec required");
  }
  double wsum = 0.0;
  for (const auto& r : cp.reservoirs) {
    if (r.weight < 0.0) throw ConfigError("collision: weights must be >= 0");
    wsum += r.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw ConfigError("collision: weights must sum to 1");
  }
}

// Unit logical amplitudes (cos(theta/2), sin(theta/2) e^{-i phi}).
Vector logical_pair(double theta, double phi) {
  Vector v(2);
  v(0) = std::cos(theta / 2.0);
  v(1) = std::sin(theta / 2.0) * std::exp(Complex(0.0, -phi));
  return v;
}

// Stream selector: largest-remainder round-robin or seeded draws.
class Mixer {
 public:
  Mixer(const CollisionParams& cp, std::uint64_t seed)
      : mode_(cp.mixing), rng_(seed), counts_(cp.reservoirs.size(), 0) {
    for (const auto& r : cp.reservoirs) weights_.push_back(r.weight);
  }

  int pick(long k) {
    if (mode_ == MixingMode::RoundRobin) {
      int best = 0;
      double best_score = weights_[0] * static_cast<double>(k) - counts_[0];
      for (size_t i = 1; i < weights_.size(); ++i) {
        const double score =
            weights_[i] * static_cast<double>(k) - counts_[i];
        if (score > best_score) {
          best_score = score;
          best = static_cast<int>(i);
        }
      }
      ++counts_[best];
      return best;
    }
    const double u =
        static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // uniform [0,1)
    double cum = 0.0;
    for (size_t i = 0; i + 1 < weights_.size(); ++i) {
      cum += weights_[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights_.size()) - 1;
  }

 private:
  MixingMode mode_;
  std::mt19937_64 rng_;
  std::vector<double> weights_;
  std::vector<long> counts_;
};

detail::Generator build_joint_generator(const SystemParams& sys,
                                        const CollisionParams& cp,
                                        const CatBasis& basis, int unit_dim) {
  const int dp = basis.dim;
  const int du = unit_dim;
  const int dj = dp * du;

  std::vector<detail::BandTerm> h_static;
  std::vector<detail::BandTerm> h_drive;

  // Probe diagonal K n(n-1) + delta_ar n, expanded over the unit factor.
  Vector diag = Vector::Zero(dj);
  for (int i = 0; i < dj; ++i) {
    const int p = i / du;
    diag(i) = sys.kerr * static_cast<double>(p) * (p - 1.0) +
              sys.delta_ar * p;
  }
  // Unit free term delta_ir a^dag a: kept verbatim in FullFock mode,
  // dropped as a global phase in the logical representation.
  if (cp.reservoir_model == ReservoirModel::FullFock) {
    for (int i = 0; i < dj; ++i) {
      diag(i) += sys.delta_ir * static_cast<double>(i % du);
    }
  }
  h_static.push_back({0, std::move(diag)});

  // Probe two-photon drive bands at joint offsets +/- 2*du.
  Vector two((dp - 2) * du);
  for (int i = 0; i < two.size(); ++i) {
    const int p = i / du;
    two(i) = -std::sqrt((p + 1.0) * (p + 2.0));
  }
  h_drive.push_back({2 * du, two});
  h_drive.push_back({-2 * du, two});

  // Exchange eps_x(|C+>0<C-| (x) |C->1<C+| + h.c.) as rank-1 pairs.
  std::vector<detail::RankOneTerm> rank1;
  Vector e0, e1;
  if (cp.reservoir_model == ReservoirModel::Logical2Level) {
    e0 = Vector::Zero(2);
    e1 = Vector::Zero(2);
    e0(0) = 1.0;
    e1(1) = 1.0;
  } else {
    e0 = basis.c_plus.amplitudes;
    e1 = basis.c_minus.amplitudes;
  }
  Vector u = kron_vec(basis.c_plus.amplitudes, e1);
  Vector v = kron_vec(basis.c_minus.amplitudes, e0);
  rank1.push_back({u, v, Complex(cp.eps_x, 0.0)});
  rank1.push_back({v, u, Complex(cp.eps_x, 0.0)});

  // Loss acts on the probe factor only.
  std::vector<detail::JumpShift> jumps;
  if (cp.probe_dissipation && sys.kappa1 > 0.0) {
    Eigen::VectorXd w((dp - 1) * du);
    for (int i = 0; i < w.size(); ++i) w(i) = std::sqrt(i / du + 1.0);
    jumps.push_back({du, std::move(w), sys.kappa1});
  }
  if (cp.probe_dissipation && sys.kappa2 > 0.0) {
    Eigen::VectorXd w((dp - 2) * du);
    for (int i = 0; i < w.size(); ++i) {
      const int p = i / du;
      w(i) = std::sqrt((p + 1.0) * (p + 2.0));
    }
    jumps.push_back({2 * du, std::move(w), sys.kappa2});
  }
  return detail::Generator(dj, std::move(h_static), std::move(h_drive),
                           std::move(rank1), std::move(jumps));
}

}  // namespace

Operator joint_hamiltonian(const SystemParams& sys, const CollisionParams& cp,
                           const CatBasis& basis) {
  const int du =
      cp.reservoir_model == ReservoirModel::Logical2Level ? 2 : basis.dim;
  detail::Generator gen = build_joint_generator(sys, cp, basis, du);
  return Operator(SpaceLayout::composite({basis.dim, du}),
                  gen.dense_hamiltonian(sys.eps2));
}

DensityMatrix prepare_unit(const ReservoirSpec& spec, ReservoirModel model,
                           const CatBasis& basis) {
  if (model == ReservoirModel::Logical2Level) {
    return DensityMatrix::pure(SpaceLayout::single(2),
                               logical_pair(spec.theta, spec.phi));
  }
  Ket psi = logical_state(basis, spec.theta, spec.phi);
  return psi.density();
}

DensityMatrix collide_once(const DensityMatrix& probe, const DensityMatrix& unit,
                           const Operator& h_joint, const SystemParams& sys,
                           const CollisionParams& cp) {
  const int dp = probe.dim();
  const int du = unit.dim();
  if (h_joint.layout().factors != std::vector<int>{dp, du}) {
    throw ShapeError("collide_once: joint Hamiltonian layout mismatch");
  }
  const long n_sub = std::max<long>(1, std::lround(cp.tau / cp.dt));
  const double dt = cp.tau / static_cast<double>(n_sub);
  const double h_norm = h_joint.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  if (dt * h_norm > kStabilityGuard) {
    std::ostringstream os;
    os << "collide_once: dt * ||H|| = " << dt * h_norm
       << " exceeds the stability guard " << kStabilityGuard;
    throw StepSizeError(os.str());
  }

  std::vector<std::pair<double, Operator>> dissipators;
  if (cp.probe_dissipation && sys.kappa1 > 0.0) {
    dissipators.emplace_back(sys.kappa1,
                             tensor(annihilation(dp), identity(du)));
  }
  if (cp.probe_dissipation && sys.kappa2 > 0.0) {
    Operator a = annihilation(dp);
    dissipators.emplace_back(sys.kappa2, tensor(a * a, identity(du)));
  }

  Matrix rho(dp * du, dp * du);
  for (int p = 0; p < dp; ++p) {
    for (int q = 0; q < dp; ++q) {
      rho.block(p * du, q * du, du, du) = probe.matrix()(p, q) * unit.matrix();
    }
  }

  const Matrix& h = h_joint.matrix();
  struct Diss {
    double rate;
    Matrix o, od, oo;
  };
  std::vector<Diss> diss;
  for (const auto& [rate, op] : dissipators) {
    diss.push_back({rate, op.matrix(), op.matrix().adjoint(),
                    op.matrix().adjoint() * op.matrix()});
  }
  const Complex mi(0.0, -1.0);
  const auto rhs_dense = [&](const Matrix& r) {
    Matrix hr = h * r;
    Matrix out = mi * (hr - hr.adjoint());
    for (const auto& d : diss) {
      out.noalias() += d.rate * ((d.o * r) * d.od);
      out.noalias() -= (0.5 * d.rate) * (d.oo * r);
      out.noalias() -= (0.5 * d.rate) * (r * d.oo);
    }
    return out;
  };

  for (long k = 0; k < n_sub; ++k) {
    Matrix k1 = rhs_dense(rho);
    Matrix k2 = rhs_dense(rho + (0.5 * dt) * k1);
    Matrix k3 = rhs_dense(rho + (0.5 * dt) * k2);
    Matrix k4 = rhs_dense(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  // Reduce before validating: transient RK4 negativity lives in the joint
  // state's near-zero spectrum and vanishes under the partial trace.
  Matrix reduced(dp, dp);
  for (int p = 0; p < dp; ++p) {
    for (int q = 0; q < dp; ++q) {
      Complex sum(0.0, 0.0);
      for (int uu = 0; uu < du; ++uu) sum += rho(p * du + uu, q * du + uu);
      reduced(p, q) = sum;
    }
  }
  return DensityMatrix(SpaceLayout::single(dp), std::move(reduced));
}

CollisionEngine::CollisionEngine(const SystemParams& sys,
                                 const CollisionParams& cp,
                                 const CatBasis& basis)
    : sys_(sys),
      cp_(cp),
      probe_dim_(basis.dim),
      c_plus_(basis.c_plus.amplitudes),
      c_minus_(basis.c_minus.amplitudes) {
  validate_params(cp_);
  if (sys.kappa1 < 0.0) throw ConfigError("collision: kappa1 must be >= 0");
  if (sys.kappa2 < 0.0) throw ConfigError("collision: kappa2 must be >= 0");
  unit_dim_ =
      cp.reservoir_model == ReservoirModel::Logical2Level ? 2 : basis.dim;
  for (const auto& spec : cp_.reservoirs) {
    units_.push_back(prepare_unit(spec, cp_.reservoir_model, basis).matrix());
  }
  gen_ = std::make_unique<detail::Generator>(
      build_joint_generator(sys_, cp_, basis, unit_dim_));
  n_sub_ = static_cast<int>(std::max<long>(1, std::lround(cp_.tau / cp_.dt)));
  dt_eff_ = cp_.tau / static_cast<double>(n_sub_);
  const double h_norm = gen_->h_inf_norm(sys_.eps2);
  if (dt_eff_ * h_norm > kStabilityGuard) {
    std::ostringstream os;
    os << "collision: dt * ||H|| = " << dt_eff_ * h_norm
       << " exceeds the stability guard " << kStabilityGuard;
    throw StepSizeError(os.str());
  }
}

CollisionEngine::~CollisionEngine() = default;
CollisionEngine::CollisionEngine(CollisionEngine&&) noexcept = default;

Operator CollisionEngine::dense_joint_hamiltonian() const {
  return Operator(SpaceLayout::composite({probe_dim_, unit_dim_}),
                  gen_->dense_hamiltonian(sys_.eps2));
}

CollisionEngine::ChainResult CollisionEngine::run(const DensityMatrix& probe0,
                                                  int n_collisions,
                                                  std::uint64_t seed,
                                                  int k_offset) const {
  if (probe0.dim() != probe_dim_) {
    throw ShapeError("CollisionEngine::run: probe dimension mismatch");
  }
  if (n_collisions < 1) {
    throw ConfigError("CollisionEngine::run: n_collisions must be >= 1");
  }
  Mixer mixer(cp_, seed);
  for (int k = 1; k <= k_offset; ++k) mixer.pick(k);  // resume schedule

  const int dp = probe_dim_, du = unit_dim_, dj = dp * du;
  Matrix probe = probe0.matrix();
  Matrix joint(dj, dj);
  detail::Rk4Stepper stepper(*gen_);
  const auto eps2_const = [this](double) { return sys_.eps2; };

  CollisionTrace trace;
  trace.p_e.reserve(n_collisions);
  trace.p_g.reserve(n_collisions);
  trace.z.reserve(n_collisions);
  trace.reservoir_choice.reserve(n_collisions);

  for (int k = 1; k <= n_collisions; ++k) {
    const int choice = mixer.pick(k_offset + k);
    const Matrix& unit = units_[choice];
    for (int p = 0; p < dp; ++p) {
      for (int q = 0; q < dp; ++q) {
        joint.block(p * du, q * du, du, du) = probe(p, q) * unit;
      }
    }
    for (int s = 0; s < n_sub_; ++s) {
      stepper.step(joint, s * dt_eff_, dt_eff_, eps2_const);
    }
    for (int p = 0; p < dp; ++p) {
      for (int q = 0; q < dp; ++q) {
        Complex sum(0.0, 0.0);
        for (int uu = 0; uu < du; ++uu) sum += joint(p * du + uu, q * du + uu);
        probe(p, q) = sum;
      }
    }
    const double pe = (c_plus_.adjoint() * (probe * c_plus_))(0).real();
    const double pg = (c_minus_.adjoint() * (probe * c_minus_))(0).real();
    trace.p_e.push_back(pe);
    trace.p_g.push_back(pg);
    trace.z.push_back(pe - pg);
    trace.reservoir_choice.push_back(choice);
    if (!std::isfinite(pe) || !std::isfinite(pg)) {
      std::string msg =
          "collision: non-finite observables at step " + std::to_string(k);
      throw CollisionAbortError(std::move(msg), std::move(trace));
    }
  }
  DensityMatrix final_state(SpaceLayout::single(dp), std::move(probe));
  return ChainResult{std::move(trace), std::move(final_state)};
}

CollisionTrace run_collisions(const DensityMatrix& probe0,
                              const SystemParams& sys,
                              const CollisionParams& cp,
                              const CatBasis& basis) {
  CollisionEngine engine(sys, cp, basis);
  return engine.run(probe0, cp.n_collisions, cp.seed).trace;
}

std::optional<std::pair<int, double>> detect_steady_state(
    const CollisionTrace& trace, int window, double tol) {
  if (window < 2) throw ConfigError("detect_steady_state: window must be >= 2");
  const int n = static_cast<int>(trace.z.size());
  for (int k = window; k <= n; ++k) {
    const double zk = trace.z[k - 1];
    bool settled = true;
    for (int j = 1; j < window; ++j) {
      if (std::abs(zk - trace.z[k - 1 - j]) >= tol) {
        settled = false;
        break;
      }
    }
    if (settled) {
      double mean = 0.0;
      for (int j = 0; j < window; ++j) mean += trace.z[k - 1 - j];
      mean /= window;
      return std::make_pair(k, mean);
    }
  }
  return std::nullopt;
}

}  // namespace catline
