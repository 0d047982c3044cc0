#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "catline/operators.hpp"
#include "catline/states.hpp"

namespace catline {

/// Dimensionless system parameters in units of the scaling frequency.
/// omega_scale (rad/s) is metadata only; all dynamics are dimensionless.
struct SystemParams {
  double kerr = 0.0;      // Kerr nonlinearity K
  double eps2 = 0.0;      // squeezing-drive strength
  double delta_ar = 0.0;  // probe detuning
  double delta_ir = 0.0;  // reservoir detuning
  double kappa1 = 0.0;    // single-photon loss rate
  double kappa2 = 0.0;    // two-photon loss rate
  double omega_scale = 37.7e9;

  /// Cat amplitude sqrt(eps2/K); zero when the drive is off.
  double alpha() const;

  bool operator==(const SystemParams&) const = default;
};

struct DriveSchedule {
  enum class Kind { Constant, Ramp };
  Kind kind = Kind::Constant;
  double eps2_0 = 0.0;    // drive target
  double tau_ramp = 0.0;  // ramp timescale (Ramp only)

  bool operator==(const DriveSchedule&) const = default;
};

/// eps2(t): the target for Constant, eps2_0 (1 - exp(-t^4/tau^4)) for Ramp.
double drive_value(double t, const DriveSchedule& schedule);

/// H = K a^dag2 a^2 - eps2 (a^dag2 + a^2) + delta_ar a^dag a (hbar = 1).
Operator kerr_cat_hamiltonian(const SystemParams& params, int dim,
                              std::optional<double> eps2_override = std::nullopt);

/// Photon-number parity: diag(+1, -1, +1, ...).
Operator parity_operator(int dim);

/// d rho/dt = -i[H, rho] + sum_j rate_j (o rho o^dag - 1/2 {o^dag o, rho}).
/// Returns a Hermitian, traceless matrix in Operator form.
Operator gksl_rhs(const DensityMatrix& rho, const Operator& hamiltonian,
                  const std::vector<std::pair<double, Operator>>& dissipators);

/// Observable record of one evolution. P_e/P_g/Z are measured against the
/// cat basis at the drive's target amplitude throughout, even during a ramp.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> p_e;
  std::vector<double> p_g;
  std::vector<double> z;
  std::vector<double> trace_err;
  std::vector<double> min_eig;
  DensityMatrix final_state;
};

/// Fixed-step RK4 integration of the master equation with jump operators
/// a (rate kappa1) and a^2 (rate kappa2) and drive eps2(t) from `schedule`.
/// The stability guard dt * ||H||_inf <= 0.1 is enforced at the start and
/// after every drive update.
Trajectory evolve(const DensityMatrix& rho0, const SystemParams& params,
                  const DriveSchedule& schedule, double t_final, double dt,
                  int record_every);

}  // namespace catline
