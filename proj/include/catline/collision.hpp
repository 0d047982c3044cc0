#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "catline/dynamics.hpp"
#include "catline/operators.hpp"
#include "catline/states.hpp"

namespace catline {

/// One information-reservoir stream: unit state angles and its mixing weight.
struct ReservoirSpec {
  double theta = 0.0;
  double phi = 0.0;
  double weight = 1.0;

  bool operator==(const ReservoirSpec&) const = default;
};

/// Reservoir unit representation. Logical2Level keeps each unit as a
/// 2-dimensional system in the cat basis (the exchange coupling only acts
/// through cat-basis projectors); FullFock keeps the unit as a second
/// truncated mode for cross-validation at small alpha.
enum class ReservoirModel { Logical2Level, FullFock };

/// Deterministic round-robin realizes weights by largest-remainder
/// scheduling; SeededRandom draws stream i with probability weight_i.
enum class MixingMode { RoundRobin, SeededRandom };

struct CollisionParams {
  double eps_x = 1e-3;   // cat-exchange coupling strength
  double tau = 0.0;      // collision duration (dimensionless)
  int n_collisions = 1;
  std::vector<ReservoirSpec> reservoirs;
  MixingMode mixing = MixingMode::RoundRobin;
  std::uint64_t seed = 1;
  ReservoirModel reservoir_model = ReservoirModel::Logical2Level;
  bool probe_dissipation = true;
  double dt = 0.0;       // inner integrator step; rounded to divide tau

  bool operator==(const CollisionParams&) const = default;
};

/// Per-collision record. z(k) = p_e(k) - p_g(k) on the reduced probe after
/// collision k; reservoir_choice(k) logs which spec collided.
struct CollisionTrace {
  std::vector<double> p_e;
  std::vector<double> p_g;
  std::vector<double> z;
  std::vector<int> reservoir_choice;
  std::optional<int> steady_state_index;  // 1-based collision index
  std::optional<double> z_ss;
};

/// Numerical failure inside a collision chain; carries the per-collision
/// record accumulated before the abort.
class CollisionAbortError : public NumericalError {
 public:
  CollisionAbortError(const std::string& msg, CollisionTrace partial)
      : NumericalError(msg), partial_trace(std::move(partial)) {}
  CollisionTrace partial_trace;
};

/// Joint probe (x) unit Hamiltonian: probe Kerr/drive/detuning terms plus
/// the cat-exchange interaction eps_x (|C+>0<C-| (x) |C->1<C+| + h.c.).
/// In FullFock mode the unit carries its free term delta_ir a^dag a; in
/// Logical2Level mode that term is a global phase and is dropped.
Operator joint_hamiltonian(const SystemParams& sys, const CollisionParams& cp,
                           const CatBasis& basis);

/// Fresh pure unit cos(theta/2)|C+> + sin(theta/2) e^{-i phi}|C-> in the
/// chosen representation.
DensityMatrix prepare_unit(const ReservoirSpec& spec, ReservoirModel model,
                           const CatBasis& basis);

/// Evolve probe (x) unit under the master equation for duration tau with
/// loss on the probe factor only, then trace out the unit.
DensityMatrix collide_once(const DensityMatrix& probe, const DensityMatrix& unit,
                           const Operator& h_joint, const SystemParams& sys,
                           const CollisionParams& cp);

/// Repeated-interaction chain: fresh unit each step, never reused.
CollisionTrace run_collisions(const DensityMatrix& probe0,
                              const SystemParams& sys,
                              const CollisionParams& cp, const CatBasis& basis);

/// First 1-based index k >= window with max_{j=1..window-1}
/// |z(k) - z(k-j)| < tol; z_ss is the mean of z over the trailing window.
std::optional<std::pair<int, double>> detect_steady_state(
    const CollisionTrace& trace, int window, double tol);

namespace detail {
class Generator;
}

/// Precomputed collision chain runner. A single chain is sequential;
/// independent engines/chains may run concurrently (no shared state).
class CollisionEngine {
 public:
  CollisionEngine(const SystemParams& sys, const CollisionParams& cp,
                  const CatBasis& basis);
  ~CollisionEngine();
  CollisionEngine(CollisionEngine&&) noexcept;

  struct ChainResult {
    CollisionTrace trace;
    DensityMatrix final_state;
  };

  /// Run n collisions from probe0. k_offset replays the mixing schedule
  /// (round-robin counters or RNG draws) so a split run resumes exactly
  /// where the full run would be.
  ChainResult run(const DensityMatrix& probe0, int n_collisions,
                  std::uint64_t seed, int k_offset = 0) const;

  int unit_dim() const { return unit_dim_; }
  Operator dense_joint_hamiltonian() const;

 private:
  SystemParams sys_;
  CollisionParams cp_;
  int probe_dim_;
  int unit_dim_;
  Vector c_plus_;
  Vector c_minus_;
  std::vector<Matrix> units_;
  std::unique_ptr<detail::Generator> gen_;
  int n_sub_;
  double dt_eff_;
};

}  // namespace catline
