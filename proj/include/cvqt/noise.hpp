#pragma once

// Single-qubit Kraus channels acting on a register held as a pure-state
// branch ensemble {(p_j, |chi_j>)}.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvqt/linalg.hpp"

namespace cvqt {

using Matrix2c = Eigen::Matrix2cd;

/// Branches lighter than this are dropped after every channel application.
inline constexpr double kBranchPruneThreshold = 1e-12;

class KrausChannel {
 public:
  enum class Kind { Identity, Dephasing, AmplitudeDamping };

  static KrausChannel identity();
  /// {sqrt(1-p) I, sqrt(p) sigma_z}
  static KrausChannel dephasing(double p_z);
  /// {|0><0| + sqrt(1-g)|1><1|, sqrt(g)|0><1|}
  static KrausChannel amplitude_damping(double gamma);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  const std::vector<Matrix2c>& ops() const noexcept { return ops_; }
  /// "identity", "dephasing(0.05)", ...
  std::string label() const;
  /// max |sum_j K_j^dag K_j - I|
  double completeness_error() const;

  /// rho -> sum_j K rho K^dag on a single-qubit density.
  Matrix2c apply(const Matrix2c& rho) const;

 private:
  KrausChannel(Kind kind, double param, std::vector<Matrix2c> ops);
  Kind kind_;
  double param_;
  std::vector<Matrix2c> ops_;
};

struct Branch {
  double weight = 0.0;
  CVector amps;  // normalized register amplitudes, computational basis
};

class BranchEnsemble {
 public:
  BranchEnsemble() = default;
  BranchEnsemble(int n_qubits, std::vector<Branch> branches);
  static BranchEnsemble pure(const CVector& amps);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return branches_.size(); }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  double total_weight() const;

  /// sum_j p_j |chi_j><chi_j|
  CMatrix density() const;

  /// Eigen-decomposition of the ensemble density; branches sorted by
  /// descending weight, those below the prune threshold dropped.
  static BranchEnsemble from_density(const CMatrix& rho);
  /// Re-expresses the ensemble through its density when it holds more
  /// than `max_branches` members; otherwise returns it unchanged.
  BranchEnsemble compressed(std::size_t max_branches) const;

 private:
  int n_qubits_ = 0;
  std::vector<Branch> branches_;
};

/// Apply to every qubit 1..N in sequence.
inline constexpr int kAllQubits = 0;

/// Each branch splits into one sub-branch per Kraus operator with weight
/// p_j * |K chi_j|^2; sub-branches are renormalized and kept in generation
/// order; those below kBranchPruneThreshold are dropped.
BranchEnsemble apply_to_register(const BranchEnsemble& ensemble, const KrausChannel& channel,
                                 int qubit = kAllQubits);

/// Direct superoperator action of the channel on qubit k (1-based) of a
/// register density matrix.
CMatrix apply_channel_to_density(const CMatrix& rho, const KrausChannel& channel, int qubit);

}  // namespace cvqt
