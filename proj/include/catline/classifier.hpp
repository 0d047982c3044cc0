#pragma once

#include "catline/collision.hpp"

namespace catline {

/// Steady-state binary decision: label 0 iff z_ss >= 0 (boundary inclusive).
struct Decision {
  int label = 0;
  double z_ss = 0.0;
  bool converged = false;
  int n_used = 0;
};

struct DetectorSettings {
  int window = 200;
  double tol = 1e-3;
};

/// Decision from a steady-state magnetization. Throws on z outside
/// [-1 - 1e-6, 1 + 1e-6].
Decision classify(double z_ss);

/// Apply the steady-state detector to a finished trace and classify.
/// Fills the trace's steady-state fields when the detector fires.
Decision decide_from_trace(CollisionTrace& trace,
                           const DetectorSettings& detector);

/// Full pipeline: run the collision chain from the probe |+> state, detect
/// the steady state, classify. When the detector never fires the decision
/// carries converged = false and the trailing-window mean as best effort.
Decision classify_reservoirs(const SystemParams& sys, const CollisionParams& cp,
                             const CatBasis& basis,
                             const DetectorSettings& detector);

}  // namespace catline
