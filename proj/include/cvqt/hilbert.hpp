#pragma once

// Single-mode bosonic numerics in a truncated Fock basis {|0>, ..., |d-1>}.
//
// Conventions: [q, p] = i, q = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2),
// vacuum q-variance 1/2. Wavefunctions use orthonormal Hermite functions
// h_n(q) = (2^n n! sqrt(pi))^{-1/2} H_n(q) exp(-q^2/2).

#include <memory>
#include <span>

#include "cvqt/diagnostics.hpp"
#include "cvqt/linalg.hpp"

namespace cvqt {

/// Leakage above which standard-state constructors refuse to truncate.
inline constexpr double kLeakageThreshold = 1e-6;

/// Normalized pure state of one mode. Construction renormalizes.
class CvState {
 public:
  explicit CvState(CVector amps);

  Eigen::Index dim() const noexcept { return amps_.size(); }
  const CVector& amps() const noexcept { return amps_; }
  cplx operator[](Eigen::Index n) const { return amps_[n]; }

 private:
  CVector amps_;
};

struct CvOperator {
  CMatrix mat;
  Eigen::Index dim() const noexcept { return mat.rows(); }
};

/// Density matrix of one mode: Hermitian, unit trace, positive semidefinite.
class CvDensity {
 public:
  /// Validates the invariants (Hermitian 1e-10, trace 1e-8, eigenvalues >= -1e-8).
  explicit CvDensity(CMatrix mat);
  static CvDensity pure(const CvState& state);

  Eigen::Index dim() const noexcept { return mat_.rows(); }
  const CMatrix& mat() const noexcept { return mat_; }

 private:
  struct Trusted {};
  CvDensity(CMatrix mat, Trusted) : mat_(std::move(mat)) {}
  CMatrix mat_;
};

CMatrix annihilation(Eigen::Index d);
CvOperator quadrature_q(Eigen::Index d);
CvOperator quadrature_p(Eigen::Index d);

/// D(beta) = exp(beta a^dag - beta^* a), Padé scaling and squaring on the
/// truncated generator. Warns (code "displacement-range") when |beta| > sqrt(d)/4.
CvOperator displacement(Eigen::Index d, cplx beta, Diagnostics* diag = nullptr);

/// Eigendecomposition of the truncated q operator, shared per dimension.
/// Gives exact unitaries exp(i t q) and exp(i t p) = R^dag exp(-i t q) R
/// with R = diag(i^n), i.e. the displacements D(i t/sqrt2) and D(-t/sqrt2).
class QuadratureSpectrum {
 public:
  static std::shared_ptr<const QuadratureSpectrum> get(Eigen::Index d);

  Eigen::Index dim() const noexcept { return values_.size(); }
  const RVector& values() const noexcept { return values_; }
  const RMatrix& vectors() const noexcept { return vectors_; }

  /// Columns of `block` <- exp(i t q) * columns.
  void apply_exp_iq(double t, CMatrix& block) const;
  /// Columns of `block` <- exp(i t p) * columns.
  void apply_exp_ip(double t, CMatrix& block) const;

  CMatrix exp_iq(double t) const;
  CMatrix exp_ip(double t) const;

  explicit QuadratureSpectrum(Eigen::Index d);

 private:
  RVector values_;
  RMatrix vectors_;
};

CvState fock(Eigen::Index d, Eigen::Index m);
/// Coherent state |alpha> from its analytic Fock amplitudes.
CvState coherent(Eigen::Index d, cplx alpha);
/// q-squeezed vacuum, psi(q) ~ exp(-(q e^r)^2 / 2).
CvState squeezed_vacuum(Eigen::Index d, double r);
/// (exp(-i sqrt2 alpha p) + exp(i sqrt2 alpha p)) |vac>, normalized; lobes at q = +-sqrt2 alpha.
CvState cat(Eigen::Index d, double alpha);

/// Analytic norm of |alpha> beyond the first d Fock states.
double coherent_tail(Eigen::Index d, cplx alpha);
/// Analytic norm of S(r)|0> beyond the first d Fock states.
double squeezed_tail(Eigen::Index d, double r);

/// Weight in the top `fraction` of the basis; the truncation-edge diagnostic.
double edge_weight(const CVector& amps, double fraction = 0.1);

/// h_0..h_nmax at q, computed by the normalized upward recurrence with
/// running rescaling so that large n at large |q| neither overflows nor
/// underflows prematurely. Result has nmax + 1 entries.
RVector hermite_functions(Eigen::Index nmax, double q);

/// psi(q_j) = sum_n amps_n h_n(q_j).
CVector wavefunction(const CvState& state, std::span<const double> qgrid);
CVector wavefunction(const CVector& amps, std::span<const double> qgrid);

/// W(q_i, p_j), normalized so that the integral over dq dp is 1.
/// Evaluated from the displaced-parity expansion with normalized Laguerre terms.
RMatrix wigner(const CvDensity& rho, std::span<const double> qgrid,
               std::span<const double> pgrid);
RMatrix wigner(const CvState& state, std::span<const double> qgrid,
               std::span<const double> pgrid);

/// `points` evenly spaced values from lo to hi inclusive (points >= 2).
std::vector<double> linspace(double lo, double hi, int points);

double fidelity_pure(const CvState& a, const CvState& b);
double fidelity_mixed(const CvState& psi, const CvDensity& rho);

double expectation(const CvState& state, const CvOperator& op);

}  // namespace cvqt
