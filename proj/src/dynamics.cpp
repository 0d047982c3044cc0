#include "catline/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "generator.hpp"

namespace catline {

namespace {

constexpr double kStabilityGuard = 0.1;
constexpr double kMinEigAbort = -1e-4;
constexpr double kTraceAbort = 1e-6;

void check_guard(double dt, double h_norm) {
  if (dt * h_norm > kStabilityGuard) {
    std::ostringstream os;
    os << "evolve: dt * ||H|| = " << dt * h_norm << " exceeds the stability "
       << "guard " << kStabilityGuard << " (dt = " << dt << ", ||H|| = "
       << h_norm << ")";
    throw StepSizeError(os.str());
  }
}

// Observable basis at the drive target. At alpha = 0 the odd cat is
// degenerate; the limiting pair is {|0>, |1>}.
std::pair<Vector, Vector> observable_pair(double alpha, int dim) {
  if (alpha > 0.0) {
    CatBasis basis = cat_basis(alpha, dim);
    return {basis.c_plus.amplitudes, basis.c_minus.amplitudes};
  }
  Vector p = Vector::Zero(dim), m = Vector::Zero(dim);
  p(0) = 1.0;
  m(1) = 1.0;
  return {p, m};
}

}  // namespace

double SystemParams::alpha() const {
  if (eps2 <= 0.0 || kerr <= 0.0) return 0.0;
  return std::sqrt(eps2 / kerr);
}

double drive_value(double t, const DriveSchedule& schedule) {
  if (schedule.kind == DriveSchedule::Kind::Constant) {
    return schedule.eps2_0;
  }
  const double x = t / schedule.tau_ramp;
  const double x2 = x * x;
  return schedule.eps2_0 * (1.0 - std::exp(-(x2 * x2)));
}

Operator kerr_cat_hamiltonian(const SystemParams& params, int dim,
                              std::optional<double> eps2_override) {
  const double alpha = params.alpha();
  const int needed = required_dim(alpha);
  if (dim < needed) {
    std::ostringstream os;
    os << "kerr_cat_hamiltonian: dim " << dim << " below sizing rule "
       << needed << " for alpha = " << alpha;
    throw TruncationError(os.str());
  }
  const double eps2 = eps2_override.value_or(params.eps2);
  detail::Generator gen = detail::kerr_cat_generator(
      params.kerr, params.delta_ar, 0.0, 0.0, dim);
  return Operator(SpaceLayout::single(dim), gen.dense_hamiltonian(eps2));
}

Operator parity_operator(int dim) {
  if (dim < 2) {
    throw InvalidDimensionError("parity_operator: dim must be >= 2");
  }
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  }
  return Operator(SpaceLayout::single(dim), std::move(m));
}

Operator gksl_rhs(const DensityMatrix& rho, const Operator& hamiltonian,
                  const std::vector<std::pair<double, Operator>>& dissipators) {
  if (!(rho.layout() == hamiltonian.layout())) {
    throw ShapeError("gksl_rhs: rho and H layout mismatch");
  }
  const Complex mi(0.0, -1.0);
  Matrix hr = hamiltonian.matrix() * rho.matrix();
  Matrix out = mi * (hr - hr.adjoint());
  for (const auto& [rate, op] : dissipators) {
    if (!(op.layout() == rho.layout())) {
      throw ShapeError("gksl_rhs: dissipator layout mismatch");
    }
    if (rate < 0.0) {
      throw ConfigError("gksl_rhs: negative dissipator rate");
    }
    const Matrix& o = op.matrix();
    Matrix orho = o * rho.matrix();
    Matrix oo = o.adjoint() * o;
    out.noalias() += rate * (orho * o.adjoint());
    out.noalias() -= (0.5 * rate) * (oo * rho.matrix());
    out.noalias() -= (0.5 * rate) * (rho.matrix() * oo);
  }
  return Operator(rho.layout(), std::move(out));
}

Trajectory evolve(const DensityMatrix& rho0, const SystemParams& params,
                  const DriveSchedule& schedule, double t_final, double dt,
                  int record_every) {
  if (t_final <= 0.0 || dt <= 0.0) {
    throw ConfigError("evolve: t_final and dt must be positive");
  }
  if (record_every < 1) {
    throw ConfigError("evolve: record_every must be >= 1");
  }
  if (params.kappa1 < 0.0 || params.kappa2 < 0.0) {
    throw ConfigError("evolve: negative loss rate");
  }
  const int dim = rho0.dim();
  const double alpha_target =
      (schedule.eps2_0 > 0.0 && params.kerr > 0.0)
          ? std::sqrt(schedule.eps2_0 / params.kerr)
          : 0.0;
  const int needed = required_dim(alpha_target);
  if (dim < needed) {
    std::ostringstream os;
    os << "evolve: dim " << dim << " below sizing rule " << needed
       << " for target alpha = " << alpha_target;
    throw TruncationError(os.str());
  }

  const auto [cp, cm] = observable_pair(alpha_target, dim);
  detail::Generator gen = detail::kerr_cat_generator(
      params.kerr, params.delta_ar, params.kappa1, params.kappa2, dim);

  const long n_steps = std::max<long>(1, std::lround(t_final / dt));
  const double dt_eff = t_final / static_cast<double>(n_steps);

  Trajectory traj{{}, {}, {}, {}, {}, {}, rho0};
  Matrix rho = rho0.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es;

  const auto record = [&](double t) {
    const double pe = (cp.adjoint() * (rho * cp))(0).real();
    const double pg = (cm.adjoint() * (rho * cm))(0).real();
    const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    es.compute(rho, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    traj.times.push_back(t);
    traj.p_e.push_back(pe);
    traj.p_g.push_back(pg);
    traj.z.push_back(pe - pg);
    traj.trace_err.push_back(tr_err);
    traj.min_eig.push_back(min_eig);
    if (min_eig < kMinEigAbort) {
      std::ostringstream os;
      os << "evolve: positivity breach at t = " << t << " (min eig = "
         << min_eig << ")";
      throw NumericalError(os.str());
    }
    if (tr_err > kTraceAbort) {
      std::ostringstream os;
      os << "evolve: trace breach at t = " << t << " (|tr - 1| = " << tr_err
         << ")";
      throw NumericalError(os.str());
    }
  };

  const auto eps2_at = [&](double t) { return drive_value(t, schedule); };

  check_guard(dt_eff, gen.h_inf_norm(eps2_at(0.0)));
  record(0.0);

  detail::Rk4Stepper stepper(gen);
  for (long k = 1; k <= n_steps; ++k) {
    const double t_prev = (k - 1) * dt_eff;
    if (schedule.kind == DriveSchedule::Kind::Ramp) {
      check_guard(dt_eff, gen.h_inf_norm(eps2_at(t_prev + dt_eff)));
    }
    stepper.step(rho, t_prev, dt_eff, eps2_at);
    if (k % record_every == 0 || k == n_steps) {
      record(k * dt_eff);
    }
  }

  traj.final_state = DensityMatrix(rho0.layout(), std::move(rho));
  return traj;
}

}  // namespace catline
