#pragma once

// Encoding of one CV mode into N qubits with the conditional-displacement
// sequence U = W_N V_N ... W_1 V_1 (qubit 1 acts first),
//   V_k = exp(i v_k q sigma_y^(k)),              v_k = pi / (2 lambda 2^k)
//   W_k = exp(+-i w_k p sigma_x^(k)),            w_k = lambda 2^k / 2
// with the minus sign for k = N.
//
// Joint states are stored as a d x 2^N matrix S(n, r): row n is the Fock
// index, column r the computational-basis register index (qubit k is bit
// k-1). The flat CV-major vector has index n * 2^N + r.

#include <functional>
#include <memory>
#include <optional>

#include "cvqt/diagnostics.hpp"
#include "cvqt/hilbert.hpp"
#include "cvqt/noise.hpp"
#include "cvqt/register.hpp"

namespace cvqt {

struct ProtocolParams {
  double lambda = 0.1;
  int n_qubits = 4;
  Eigen::Index dim = 200;

  /// Throws InvalidArgument / InvalidDimension on bad values.
  void validate() const;
  double v(int k) const;
  double w(int k) const;
  Eigen::Index register_dim() const { return Eigen::Index{1} << n_qubits; }

  /// Largest conditional displacement in q, lambda 2^N / 2 * sqrt2.
  double max_displacement() const;
  /// Warns "turning-point" when max_displacement() + support_radius reaches
  /// the classical turning point sqrt(2d - 1) of the top Fock state.
  void check_extent(double support_radius, Diagnostics* diag) const;
};

class HybridState {
 public:
  /// Normalizes; `block` must be d x 2^N with N >= 1.
  explicit HybridState(CMatrix block);
  HybridState(const CvState& cv, const RegisterState& reg);
  /// |cv> |0...0>
  static HybridState with_ground_register(const CvState& cv, int n_qubits);

  Eigen::Index cv_dim() const noexcept { return block_.rows(); }
  int n_qubits() const noexcept { return n_qubits_; }
  const CMatrix& block() const noexcept { return block_; }
  /// CV-major flattening, index n * 2^N + r.
  CVector flat() const;
  double norm() const { return block_.norm(); }

 private:
  struct Trusted {};
  HybridState(CMatrix block, Trusted);
  friend class Encoder;
  CMatrix block_;
  int n_qubits_;
};

double fidelity_pure(const HybridState& a, const HybridState& b);

/// One V_k or W_k gate on the joint space.
class JointGate {
 public:
  enum class Kind { V, W };
  JointGate(Kind kind, int k, const ProtocolParams& params);

  Kind kind() const noexcept { return kind_; }
  int qubit() const noexcept { return k_; }
  /// Applies the gate (or its adjoint) to a block whose width is a multiple
  /// of 2^k: either B joint states side by side or, during encoding, the
  /// leading 2^k columns that are still populated.
  void apply(Eigen::Ref<CMatrix> block, bool adjoint = false) const;
  /// Dense (d 2^N) x (d 2^N) matrix in the CV-major ordering; for tests.
  CMatrix dense() const;

 private:
  Kind kind_;
  int k_;
  int n_qubits_;
  double angle_;  // signed coefficient of q (V) or p (W) in the + branch
  std::shared_ptr<const QuadratureSpectrum> spectrum_;
};

JointGate gate_V(int k, const ProtocolParams& params);
JointGate gate_W(int k, const ProtocolParams& params);

class Encoder {
 public:
  explicit Encoder(const ProtocolParams& params);

  const ProtocolParams& params() const noexcept { return params_; }
  HybridState encode(const CvState& input, Diagnostics* diag = nullptr) const;
  HybridState decode(const HybridState& state, Diagnostics* diag = nullptr) const;

  /// In-place U (or U^dag) on a d x (B 2^N) block holding B joint states side by side.
  void encode_block(CMatrix& block) const;
  void decode_block(CMatrix& block) const;

 private:
  ProtocolParams params_;
  std::vector<JointGate> gates_;  // V_1, W_1, ..., V_N, W_N
};

enum class Tilde0Method { SincProjection, IteratedEncode, Squeezed };

struct Tilde0Report {
  CvState state;
  /// Norm^2 of the ideal state captured by the first d Fock levels.
  double captured_norm = 1.0;
  /// Largest change of any coefficient in the last panel doubling.
  double achieved_tolerance = 0.0;
  int panels = 0;
};

/// Quadrature tolerance below which the sinc projection is accepted.
inline constexpr double kTilde0Tolerance = 1e-10;

/// Reference pointer state, psi(q) = sinc(pi q / 2 lambda) / sqrt(2 lambda),
/// projected on the first d Fock levels and renormalized. Computed through
/// its momentum representation, constant sqrt(lambda/pi) on |p| < pi/(2 lambda):
///   <n|0~> = i^n sqrt(lambda/pi) int_{-a}^{a} h_n(p) dp.
/// Cached per (lambda, d). Throws ConvergenceError when the composite
/// Gauss-Legendre rule cannot reach kTilde0Tolerance.
const Tilde0Report& tilde0_sinc(double lambda, Eigen::Index d);

/// The three constructions. IteratedEncode reuses one qubit reset to |0>
/// after each W_k V_k pair; returns the principal eigenvector of the
/// resulting CV density. Squeezed uses r = log(1.12 / lambda).
CvState tilde0(const ProtocolParams& params, Tilde0Method method, Diagnostics* diag = nullptr);
/// CV density produced by the iterated single-qubit construction.
CMatrix tilde0_iterated_density(const ProtocolParams& params);

/// Register amplitudes <0~| (x) I applied to the joint state (unnormalized,
/// computational basis).
CVector project_tilde0(const HybridState& state, const CvState& t0);

/// 1 - |<0~| (x) I |state>|^2 with the canonical sinc reference; clamped at 0.
double epsilon(const HybridState& encoded, const ProtocolParams& params, Diagnostics* diag = nullptr);
double epsilon(const CvState& input, const ProtocolParams& params, Diagnostics* diag = nullptr);

struct ResetResult {
  CvState cv;                 // the pointer state |0~>
  BranchEnsemble reg;         // spectral decomposition of Tr_CV
  int rank() const { return static_cast<int>(reg.size()); }
};

/// Replaces the CV mode by |0~> and keeps the reduced register state.
ResetResult reset_cv(const HybridState& state, const ProtocolParams& params);

enum class DecodeMode {
  Full,     // decode every branch and keep the recovered CV density
  Overlap,  // F = <g| rho_reg' |g> with g = <0~|U|psi,0>; no decode
};

struct Recovery {
  double epsilon = 0.0;
  double fidelity = 0.0;
  /// The same fidelity through the other route (Full only; NaN otherwise).
  double fidelity_dual = 0.0;
  int branches = 0;
  /// Tr_reg of the recovered joint state (Full only).
  std::optional<CMatrix> cv_density;
  Diagnostics diagnostics;
};

/// encode -> reset -> optional channel on every qubit -> decode. With no
/// channel the result obeys (1-eps)^2 <= F <= 1-eps.
Recovery recover(const CvState& input, const ProtocolParams& params,
                 const KrausChannel* channel = nullptr, DecodeMode mode = DecodeMode::Full);
double recovered_fidelity(const CvState& input, const ProtocolParams& params,
                          const KrausChannel* channel = nullptr);

struct LambdaOptimum {
  double lambda = 0.0;
  double epsilon = 0.0;
  int evaluations = 0;
};

struct LambdaSearch {
  double lo = 0.02;
  double hi = 0.8;
  int coarse_points = 30;
  double tolerance = 1e-4;  // relative bracket width
};

/// Geometric coarse grid over [lo, hi], then golden-section refinement
/// between the neighbours of the coarse minimum.
LambdaOptimum optimize_lambda(const std::function<double(double)>& eps_of_lambda,
                              const LambdaSearch& search = {});

}  // namespace cvqt
