#include <doctest.h>

#include <cmath>

#include "catline/classifier.hpp"

using namespace catline;

namespace {

SystemParams small_sys() {
  SystemParams sys;
  sys.kerr = 1.12e-6;
  sys.eps2 = 1.12e-6;
  return sys;
}

CollisionParams small_cp(std::vector<ReservoirSpec> specs) {
  CollisionParams cp;
  cp.eps_x = 5e-3;
  cp.tau = 30.0;
  cp.dt = 7.5;
  cp.n_collisions = 500;
  cp.reservoirs = std::move(specs);
  cp.probe_dissipation = false;
  return cp;
}

}  // namespace

TEST_SUITE("classifier") {

TEST_CASE("classify boundary rule") {
  CHECK(classify(0.0).label == 0);  // inclusive at zero
  CHECK(classify(0.7).label == 0);
  CHECK(classify(-0.1).label == 1);
  CHECK(classify(-0.0).label == 0);   // -0.0 >= 0 in IEEE
  CHECK(classify(-1e-300).label == 1);  // no epsilon fuzz below zero
  CHECK(classify(5e-324).label == 0);
  CHECK(classify(1.0 + 5e-7).label == 0);
  CHECK_THROWS_AS(classify(1.1), ConfigError);
  CHECK_THROWS_AS(classify(-2.0), ConfigError);
}

TEST_CASE("single-stream classification") {
  CatBasis basis = cat_basis(1.0, 17);
  DetectorSettings det{100, 1e-3};

  Decision north = classify_reservoirs(small_sys(), small_cp({{0.0, 0.0, 1.0}}),
                                       basis, det);
  CHECK(north.label == 0);
  CHECK(north.converged);
  CHECK(north.z_ss >= 0.9);

  Decision south = classify_reservoirs(
      small_sys(), small_cp({{M_PI, 0.0, 1.0}}), basis, det);
  CHECK(south.label == 1);
  CHECK(south.converged);
  CHECK(south.z_ss <= -0.9);
}

TEST_CASE("weighted mixtures pick the majority stream") {
  CatBasis basis = cat_basis(1.0, 17);
  DetectorSettings det{101, 0.2};

  Decision d0 = classify_reservoirs(
      small_sys(), small_cp({{0.0, 0.0, 0.8}, {M_PI, 0.0, 0.2}}), basis, det);
  CHECK(d0.label == 0);
  CHECK(d0.z_ss > 0.2);

  Decision d1 = classify_reservoirs(
      small_sys(), small_cp({{0.0, 0.0, 0.2}, {M_PI, 0.0, 0.8}}), basis, det);
  CHECK(d1.label == 1);
  CHECK(d1.z_ss < -0.2);
}

TEST_CASE("label antisymmetry under a bloch z-flip of all inputs") {
  // Streams with transverse components beat against the probe coherence
  // under the exchange coupling, so a dominant near-pole stream keeps
  // |z_ss| above the detector tolerance where the invariant applies.
  CatBasis basis = cat_basis(1.0, 17);
  DetectorSettings det{101, 0.2};
  const std::vector<ReservoirSpec> specs = {{0.0, 0.0, 0.7},
                                            {2.9, 0.5, 0.3}};
  std::vector<ReservoirSpec> flipped;
  for (const auto& s : specs) {
    flipped.push_back({M_PI - s.theta, -s.phi, s.weight});
  }
  Decision a = classify_reservoirs(small_sys(), small_cp(specs), basis, det);
  Decision b = classify_reservoirs(small_sys(), small_cp(flipped), basis, det);
  REQUIRE(std::abs(a.z_ss) > det.tol);
  CHECK(a.label != b.label);
  CHECK(std::abs(a.z_ss + b.z_ss) <= 0.05);
}

TEST_CASE("identical config and seed give bit-identical decisions") {
  CatBasis basis = cat_basis(1.0, 17);
  DetectorSettings det{100, 1e-3};
  CollisionParams cp = small_cp({{0.0, 0.0, 0.5}, {M_PI, 0.0, 0.5}});
  cp.mixing = MixingMode::SeededRandom;
  cp.seed = 77;
  cp.n_collisions = 300;
  Decision a = classify_reservoirs(small_sys(), cp, basis, det);
  Decision b = classify_reservoirs(small_sys(), cp, basis, det);
  CHECK(a.label == b.label);
  CHECK(a.z_ss == b.z_ss);
  CHECK(a.converged == b.converged);
  CHECK(a.n_used == b.n_used);
}

TEST_CASE("non-convergence reports best effort") {
  CatBasis basis = cat_basis(1.0, 17);
  CollisionParams cp = small_cp({{0.0, 0.0, 1.0}});
  cp.n_collisions = 40;  // shorter than the window
  DetectorSettings det{100, 1e-3};
  Decision d = classify_reservoirs(small_sys(), cp, basis, det);
  CHECK(!d.converged);
  CHECK(d.n_used == 40);
  CHECK(d.label == 0);  // rising toward +1, mean is positive
}

}  // TEST_SUITE
