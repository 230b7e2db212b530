#pragma once

// Position-grid simulation of the encoding, free of Fock truncation.
//
// On a uniform q grid with spacing h = lambda/m, each V_k branch is a
// pointwise factor cos(pi/4 +- v_k q) and each W_k branch a shift by
// w_k = m 2^{k-1} grid points, both exact on samples. The 2^N branches are
// enumerated depth first and each final branch wavefunction chi_s is
// projected on the ideal pointer state sinc(pi q / 2 lambda) / sqrt(2 lambda)
// with the trapezoid rule, which is exact for band-limited integrands.

#include "cvqt/linalg.hpp"

namespace cvqt {

struct GridProjection {
  /// <0~ phi_s | U |psi, 0> indexed by sign index (bit k-1 set when s_k = -1).
  CVector amps;
  double epsilon = 0.0;
  /// Norm^2 shifted off the grid edges (should be ~0).
  double leakage = 0.0;
  double spacing = 0.0;
  Eigen::Index points = 0;
};

/// `fock_amps` are the input's Fock amplitudes; its wavefunction is sampled
/// with the Hermite recurrence. `oversample` is the minimum m in h = lambda/m.
GridProjection grid_project(const CVector& fock_amps, double lambda, int n_qubits, int oversample = 4);

inline double epsilon_grid(const CVector& fock_amps, double lambda, int n_qubits) {
  return grid_project(fock_amps, lambda, n_qubits).epsilon;
}

}  // namespace cvqt
