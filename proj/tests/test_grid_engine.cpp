#include <doctest.h>

#include <cmath>

#include "cvqt/errors.hpp"
#include "cvqt/grid_engine.hpp"
#include "cvqt/oracle.hpp"
#include "cvqt/protocol.hpp"
#include "support.hpp"

using namespace cvqt;

TEST_CASE("grid engine agrees with the Fock engine where truncation is harmless") {
  const Eigen::Index d = 200;
  for (int m : {0, 1, 3}) {
    for (int n : {3, 4}) {
      const ProtocolParams p{0.3, n, d};
      const double fock_eps = epsilon(fock(d, m), p);
      const GridProjection g = grid_project(fock(d, m).amps(), p.lambda, n);
      CHECK(g.leakage < 1e-20);
      CHECK(std::abs(g.epsilon - fock_eps) < 5e-3);
    }
  }
}

TEST_CASE("grid projection amplitudes match the Fock projection") {
  const Eigen::Index d = 200;
  const ProtocolParams p{0.25, 4, d};
  testing::Gen gen(4);
  for (int trial = 0; trial < 3; ++trial) {
    const CvState in(gen.state(d, 4));
    const CVector fock_amps = to_phi_basis(
        project_tilde0(Encoder(p).encode(in), tilde0(p, Tilde0Method::SincProjection)));
    const GridProjection g = grid_project(in.amps(), p.lambda, p.n_qubits);
    CHECK(l2_distance_up_to_phase(fock_amps, g.amps) < 2e-2);
  }
}

TEST_CASE("grid amplitudes converge to the sampled wavefunction as lambda halves") {
  for (int m : {0, 1}) {
    double prev = 1.0;
    int n = 5;
    for (double lambda : {0.2, 0.1, 0.05, 0.025}) {
      ++n;
      const CVector amps = fock(60, m).amps();
      const double dist = l2_distance_up_to_phase(grid_project(amps, lambda, n).amps,
                                                  encoded_amplitudes(amps, lambda, n).amps);
      CHECK(dist < prev);
      // Roughly first order in lambda.
      if (prev < 1.0) CHECK(dist < 0.6 * prev);
      prev = dist;
    }
    CHECK(prev < 5e-3);
  }
}

TEST_CASE("grid engine is finer than required") {
  const CVector amps = fock(40, 2).amps();
  const GridProjection a = grid_project(amps, 0.15, 5, 4);
  const GridProjection b = grid_project(amps, 0.15, 5, 8);
  CHECK(b.spacing < a.spacing);
  CHECK(std::abs(a.epsilon - b.epsilon) < 1e-10);
  CHECK(a.epsilon >= 0.0);
  CHECK(a.amps.size() == 32);
}

TEST_CASE("grid engine argument checks") {
  const CVector amps = fock(10, 0).amps();
  CHECK_THROWS_AS(grid_project(amps, 0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(grid_project(amps, 0.1, 1), InvalidArgument);
  CHECK_THROWS_AS(grid_project(amps, 0.1, 17), InvalidArgument);
  CHECK_THROWS_AS(grid_project(amps, 0.1, 4, 1), InvalidArgument);
}
