#pragma once

// Random finite-energy CV states: c_m = u_m e^{i phi_m} with u ~ U(0,1),
// phi ~ U(0, 2 pi), m = 0..n_terms-1, filtered by e^{-kappa m} with kappa
// tuned to a target mean photon number.

#include <cstdint>

#include "cvqt/hilbert.hpp"

namespace cvqt {

struct RandomStateSpec {
  int n_terms = 200;
  double target_nbar = 1.0;
  std::uint64_t seed = 0;
  Eigen::Index dim = 200;
  void validate() const;
};

/// splitmix64 mix of (master, index); independent streams per ensemble member.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Unfiltered coefficients, drawn from a mt19937_64 seeded with `seed`.
CVector draw_coefficients(int n_terms, std::uint64_t seed);

/// Mean photon number of the normalized, filtered coefficient vector.
double filtered_mean_photon(const CVector& coeffs, double kappa);

/// Bisection for kappa in [0, 50]; throws ConvergenceError (achieved = the
/// mean photon number at the nearer bracket end) when the target is outside
/// the reachable range.
double solve_kappa(const CVector& coeffs, double target_nbar);

struct RandomState {
  CvState state;
  double kappa;
};

RandomState random_state_with_kappa(const RandomStateSpec& spec);
inline CvState random_state(const RandomStateSpec& spec) { return random_state_with_kappa(spec).state; }

double mean_photon(const CvState& state);

}  // namespace cvqt
