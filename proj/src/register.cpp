#include "cvqt/register.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "cvqt/errors.hpp"

namespace cvqt {

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw InvalidArgument("sign vector must have at least one entry");
  for (int s : signs_) {
    if (s != 1 && s != -1) throw InvalidArgument("sign vector entries must be +1 or -1");
  }
}

SignVector SignVector::from_index(std::uint64_t index, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 62) throw InvalidArgument("qubit count out of range");
  if (index >> n_qubits) throw InvalidArgument("sign index exceeds 2^N - 1");
  std::vector<int> signs(static_cast<std::size_t>(n_qubits));
  for (int k = 0; k < n_qubits; ++k) signs[static_cast<std::size_t>(k)] = ((index >> k) & 1U) ? -1 : 1;
  return SignVector(std::move(signs));
}

int SignVector::sign(int k) const {
  if (k < 1 || k > size()) throw InvalidArgument("qubit index " + std::to_string(k) + " out of range");
  return signs_[static_cast<std::size_t>(k - 1)];
}

std::uint64_t SignVector::index() const noexcept {
  std::uint64_t idx = 0;
  for (std::size_t k = 0; k < signs_.size(); ++k) {
    if (signs_[k] < 0) idx |= std::uint64_t{1} << k;
  }
  return idx;
}

RegisterState::RegisterState(CVector amps, int n_qubits) : amps_(std::move(amps)), n_qubits_(n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("register needs at least one qubit");
  if (amps_.size() != (Eigen::Index{1} << n_qubits)) throw DimensionMismatch("register amplitudes must have length 2^N");
  const double norm = amps_.norm();
  if (!(norm > 0.0)) throw InvalidArgument("register state has zero norm");
  amps_ /= norm;
}

RegisterState phi_state(const SignVector& s) {
  const int n = s.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  const double amp = std::pow(2.0, -0.5 * n);
  CVector out(dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    int sign = 1;
    for (int k = 1; k <= n; ++k) {
      if ((r >> (k - 1)) & 1) sign *= s.sign(k);
    }
    out[r] = amp * sign;
  }
  return RegisterState(std::move(out), n);
}

int gamma(const SignVector& s) {
  const int n = s.size();
  if (n < 2) throw InvalidArgument("gamma needs N >= 2");
  int g = 0;
  for (int k = 1; k <= n - 2; ++k) g += (s.sign(k) + s.sign(k + 1)) / 2;
  g += (s.sign(n - 1) - s.sign(n)) / 2;
  return g;
}

double grid_point(const SignVector& s, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const int n = s.size();
  double q = 0.0;
  for (int l = 1; l <= n - 1; ++l) q += s.sign(l) * std::ldexp(lambda, l - 1);
  q -= s.sign(n) * std::ldexp(lambda, n - 1);
  return q;
}

CVector to_phi_basis(const CVector& computational) {
  const int n = qubit_count(computational.size());
  CVector out = computational;
  for (Eigen::Index half = 1; half < out.size(); half <<= 1) {
    for (Eigen::Index base = 0; base < out.size(); base += 2 * half) {
      for (Eigen::Index j = base; j < base + half; ++j) {
        const cplx a = out[j];
        const cplx b = out[j + half];
        out[j] = a + b;
        out[j + half] = a - b;
      }
    }
  }
  return out * std::pow(2.0, -0.5 * n);
}

int qubit_count(Eigen::Index length) {
  if (length < 2 || !std::has_single_bit(static_cast<std::uint64_t>(length))) {
    throw DimensionMismatch("register length " + std::to_string(length) + " is not a power of two >= 2");
  }
  return std::countr_zero(static_cast<std::uint64_t>(length));
}

}  // namespace cvqt
