#include "catline/classifier.hpp"

#include <cmath>
#include <sstream>

namespace catline {

Decision classify(double z_ss) {
  if (!(z_ss >= -1.0 - 1e-6 && z_ss <= 1.0 + 1e-6)) {
    std::ostringstream os;
    os << "classify: z_ss = " << z_ss << " outside [-1, 1]";
    throw ConfigError(os.str());
  }
  Decision d;
  d.label = z_ss >= 0.0 ? 0 : 1;
  d.z_ss = z_ss;
  return d;
}

Decision decide_from_trace(CollisionTrace& trace,
                           const DetectorSettings& detector) {
  auto hit = detect_steady_state(trace, detector.window, detector.tol);
  double z_ss;
  bool converged;
  int n_used;
  if (hit) {
    trace.steady_state_index = hit->first;
    trace.z_ss = hit->second;
    z_ss = hit->second;
    converged = true;
    n_used = hit->first;
  } else {
    // Best-effort: mean of z over the trailing window (or the whole trace
    // when it is shorter than the window).
    const int n = static_cast<int>(trace.z.size());
    const int w = std::min(detector.window, n);
    double mean = 0.0;
    for (int j = 0; j < w; ++j) mean += trace.z[n - 1 - j];
    z_ss = mean / w;
    converged = false;
    n_used = n;
  }
  Decision d = classify(z_ss);
  d.converged = converged;
  d.n_used = n_used;
  return d;
}

Decision classify_reservoirs(const SystemParams& sys, const CollisionParams& cp,
                             const CatBasis& basis,
                             const DetectorSettings& detector) {
  CollisionEngine engine(sys, cp, basis);
  Ket plus = plus_state(basis);
  auto result = engine.run(plus.density(), cp.n_collisions, cp.seed);
  return decide_from_trace(result.trace, detector);
}

}  // namespace catline
