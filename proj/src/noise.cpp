#include "cvqt/noise.hpp"

#include <cmath>
#include <cstdio>

#include "cvqt/errors.hpp"
#include "cvqt/register.hpp"

namespace cvqt {
namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

KrausChannel::KrausChannel(Kind kind, double param, std::vector<Matrix2c> ops)
    : kind_(kind), param_(param), ops_(std::move(ops)) {
  const double err = completeness_error();
  if (err > 1e-12) throw InvalidArgument("Kraus operators are not complete (" + std::to_string(err) + ")");
}

KrausChannel KrausChannel::identity() { return KrausChannel(Kind::Identity, 0.0, {Matrix2c::Identity()}); }

KrausChannel KrausChannel::dephasing(double p_z) {
  require_probability(p_z, "dephasing probability");
  Matrix2c k1 = std::sqrt(1.0 - p_z) * Matrix2c::Identity();
  Matrix2c k2;
  k2 << 1.0, 0.0, 0.0, -1.0;
  k2 *= std::sqrt(p_z);
  return KrausChannel(Kind::Dephasing, p_z, {k1, k2});
}

KrausChannel KrausChannel::amplitude_damping(double gamma) {
  require_probability(gamma, "damping probability");
  Matrix2c k1;
  k1 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  Matrix2c k2;
  k2 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  return KrausChannel(Kind::AmplitudeDamping, gamma, {k1, k2});
}

std::string KrausChannel::label() const {
  char buf[64];
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Dephasing: std::snprintf(buf, sizeof buf, "dephasing(%g)", param_); return buf;
    case Kind::AmplitudeDamping: std::snprintf(buf, sizeof buf, "amplitude-damping(%g)", param_); return buf;
  }
  return "unknown";
}

double KrausChannel::completeness_error() const {
  Matrix2c sum = Matrix2c::Zero();
  for (const auto& k : ops_) sum += k.adjoint() * k;
  return (sum - Matrix2c::Identity()).cwiseAbs().maxCoeff();
}

Matrix2c KrausChannel::apply(const Matrix2c& rho) const {
  Matrix2c out = Matrix2c::Zero();
  for (const auto& k : ops_) out += k * rho * k.adjoint();
  return out;
}

BranchEnsemble::BranchEnsemble(int n_qubits, std::vector<Branch> branches)
    : n_qubits_(n_qubits), branches_(std::move(branches)) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  for (const auto& b : branches_) {
    if (b.amps.size() != dim) throw DimensionMismatch("branch length differs from 2^N");
    if (b.weight < 0.0) throw InvalidArgument("negative branch weight");
  }
}

BranchEnsemble BranchEnsemble::pure(const CVector& amps) {
  const int n = qubit_count(amps.size());
  return BranchEnsemble(n, {Branch{1.0, amps / amps.norm()}});
}

double BranchEnsemble::total_weight() const {
  double total = 0.0;
  for (const auto& b : branches_) total += b.weight;
  return total;
}

CMatrix BranchEnsemble::density() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& b : branches_) rho.noalias() += b.weight * b.amps * b.amps.adjoint();
  return rho;
}

BranchEnsemble BranchEnsemble::from_density(const CMatrix& rho) {
  const int n = qubit_count(rho.rows());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  std::vector<Branch> out;
  // Eigenvalues come in ascending order.
  for (Eigen::Index j = rho.rows() - 1; j >= 0; --j) {
    const double p = es.eigenvalues()[j];
    if (p < kBranchPruneThreshold) continue;
    out.push_back(Branch{p, es.eigenvectors().col(j)});
  }
  return BranchEnsemble(n, std::move(out));
}

BranchEnsemble BranchEnsemble::compressed(std::size_t max_branches) const {
  if (branches_.size() <= max_branches) return *this;
  return from_density(density());
}

namespace {

void apply_kraus(const Matrix2c& k, int qubit, CVector& amps) {
  const Eigen::Index bit = Eigen::Index{1} << (qubit - 1);
  for (Eigen::Index r = 0; r < amps.size(); ++r) {
    if (r & bit) continue;
    const cplx a0 = amps[r];
    const cplx a1 = amps[r | bit];
    amps[r] = k(0, 0) * a0 + k(0, 1) * a1;
    amps[r | bit] = k(1, 0) * a0 + k(1, 1) * a1;
  }
}

BranchEnsemble apply_single(const BranchEnsemble& ens, const KrausChannel& channel, int qubit) {
  std::vector<Branch> out;
  out.reserve(ens.size() * channel.ops().size());
  for (const auto& b : ens.branches()) {
    for (const auto& k : channel.ops()) {
      CVector amps = b.amps;
      apply_kraus(k, qubit, amps);
      const double norm2 = amps.squaredNorm();
      const double w = b.weight * norm2;
      if (w < kBranchPruneThreshold) continue;
      out.push_back(Branch{w, amps / std::sqrt(norm2)});
    }
  }
  return BranchEnsemble(ens.n_qubits(), std::move(out));
}

}  // namespace

BranchEnsemble apply_to_register(const BranchEnsemble& ensemble, const KrausChannel& channel, int qubit) {
  const int n = ensemble.n_qubits();
  if (qubit != kAllQubits && (qubit < 1 || qubit > n)) throw InvalidArgument("qubit index out of range");
  if (qubit != kAllQubits) return apply_single(ensemble, channel, qubit);
  BranchEnsemble cur = ensemble;
  for (int k = 1; k <= n; ++k) cur = apply_single(cur, channel, k);
  return cur;
}

CMatrix apply_channel_to_density(const CMatrix& rho, const KrausChannel& channel, int qubit) {
  const int n = qubit_count(rho.rows());
  if (qubit < 1 || qubit > n) throw InvalidArgument("qubit index out of range");
  const Eigen::Index dim = rho.rows();
  const Eigen::Index bit = Eigen::Index{1} << (qubit - 1);
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& k : channel.ops()) {
    // Full operator I (x) K (x) I on the register.
    CMatrix full = CMatrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const int in_bit = (r & bit) ? 1 : 0;
      const Eigen::Index base = r & ~bit;
      full(base, r) += k(0, in_bit);
      full(base | bit, r) += k(1, in_bit);
    }
    out += full * rho * full.adjoint();
  }
  return out;
}

}  // namespace cvqt
