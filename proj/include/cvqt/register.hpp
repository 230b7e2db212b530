#pragma once

// N-qubit register bookkeeping for the sign-vector basis.
//
// Qubits are numbered k = 1..N; qubit 1 interacts first. In the 2^N
// computational basis, qubit k is bit (k-1) of the index (qubit 1 least
// significant). A sign vector s in {+1,-1}^N maps to the index with
// bit (k-1) = (1 - s_k)/2, so the same integer labels |phi_s> in the
// sigma_x product basis.

#include <cstdint>
#include <vector>

#include "cvqt/linalg.hpp"

namespace cvqt {

class SignVector {
 public:
  explicit SignVector(std::vector<int> signs);
  static SignVector from_index(std::uint64_t index, int n_qubits);

  int size() const noexcept { return static_cast<int>(signs_.size()); }
  /// s_k for k = 1..N.
  int sign(int k) const;
  std::uint64_t index() const noexcept;

 private:
  std::vector<int> signs_;
};

/// Normalized 2^N amplitude vector of the register.
class RegisterState {
 public:
  RegisterState(CVector amps, int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  const CVector& amps() const noexcept { return amps_; }

 private:
  CVector amps_;
  int n_qubits_;
};

/// prod_k (|0> + s_k |1>)/sqrt2 in the computational basis.
RegisterState phi_state(const SignVector& s);

/// gamma_s = sum_{k=1}^{N-2} (s_k + s_{k+1})/2 + (s_{N-1} - s_N)/2. Needs N >= 2.
int gamma(const SignVector& s);

/// (-1)^gamma_s
inline int gamma_sign(const SignVector& s) { return (gamma(s) % 2 == 0) ? 1 : -1; }

/// q_s = sum_{l=1}^{N-1} s_l lambda 2^{l-1} - s_N lambda 2^{N-1}.
double grid_point(const SignVector& s, double lambda);

/// Amplitudes <phi_s|chi> indexed by sign index, from computational-basis
/// amplitudes (a normalized Walsh-Hadamard transform). The map is its own inverse.
CVector to_phi_basis(const CVector& computational);
inline CVector from_phi_basis(const CVector& phi) { return to_phi_basis(phi); }

/// log2 of a power-of-two length; throws otherwise.
int qubit_count(Eigen::Index length);

}  // namespace cvqt
