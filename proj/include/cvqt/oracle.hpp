#pragma once

// Closed-form reference results: the cosine-product kernel, the ideal
// sampled encoding psi(q_s), the brute-force branch expansion of position
// eigenstates and the squeezed-vacuum overlap with the pointer state.

#include <vector>

#include "cvqt/hilbert.hpp"
#include "cvqt/register.hpp"

namespace cvqt {

struct OracleConfig {
  double lambda = 0.1;
  int n_qubits = 4;
  std::vector<double> qgrid;
  void validate() const;
};

/// prod_{k=1}^{N} cos(pi q / (2 lambda 2^k))
double cos_product(double q, double lambda, int n_qubits);
/// sin(x)/x at x = pi q / (2 lambda)
double sinc_kernel(double q, double lambda);

struct EncodedAmplitudes {
  CVector amps;           // normalized, indexed by sign index
  double raw_norm = 0.0;  // norm before normalization
};

/// (-1)^{gamma_s} sqrt(2 lambda) psi(q_s) for every s.
EncodedAmplitudes encoded_amplitudes(const CVector& fock_amps, double lambda, int n_qubits);
inline EncodedAmplitudes encoded_amplitudes(const CvState& input, double lambda, int n_qubits) {
  return encoded_amplitudes(input.amps(), lambda, n_qubits);
}

struct PositionBranch {
  SignVector s;
  double coefficient;  // prod_k cos(pi/4 + s_k v_k q_k) along the path
  double position;     // final position q - q_s
};

/// Follows |q>|0...0> through V_1, W_1, ..., V_N, W_N, splitting at each
/// V_k into the sigma_x eigenbranches. Limited to N <= 5.
std::vector<PositionBranch> exact_position_expansion(double q, double lambda, int n_qubits);

/// Sign of coefficient / prod_k cos(v_k (q - q_s)); 0 when the product vanishes.
int branch_sign(const PositionBranch& branch, double lambda);

/// (2/sqrt(pi)) u erf(pi / (2 sqrt2 u))^2 with u = lambda e^r.
double squeezed_overlap(double lambda, double r);
/// The same overlap as a function of u = lambda e^r alone.
double squeezed_overlap_u(double u);
/// |<S(r)|0~>|^2 by direct quadrature of the two position wavefunctions.
double squeezed_overlap_numeric(double lambda, double r);

struct OverlapOptimum {
  double u = 0.0;
  double fidelity = 0.0;
};
/// Maximizer of squeezed_overlap_u, located by bisection on its derivative.
OverlapOptimum squeezed_overlap_optimum();

/// min over global phases of |a/|a| - e^{i phi} b/|b||.
double l2_distance_up_to_phase(const CVector& a, const CVector& b);

}  // namespace cvqt
