#include "cvqt/hilbert.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "cvqt/errors.hpp"

namespace cvqt {
namespace {

void require_dim(Eigen::Index d) {
  if (d < 2) throw InvalidDimension("truncation dimension must be >= 2, got " + std::to_string(d));
}

// i^n
cplx ipow(Eigen::Index n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void scale_rows_by_ipow(CMatrix& block, bool conjugate) {
  for (Eigen::Index n = 0; n < block.rows(); ++n) {
    cplx f = ipow(n);
    if (conjugate) f = std::conj(f);
    block.row(n) *= f;
  }
}

}  // namespace

CvState::CvState(CVector amps) : amps_(std::move(amps)) {
  require_dim(amps_.size());
  const double norm = amps_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("state has zero or non-finite norm");
  amps_ /= norm;
}

CvDensity::CvDensity(CMatrix mat) : mat_(std::move(mat)) {
  require_dim(mat_.rows());
  if (mat_.rows() != mat_.cols()) throw DimensionMismatch("density matrix must be square");
  const double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw InvalidArgument("density matrix not Hermitian (" + std::to_string(herm) + ")");
  const double trace_err = std::abs(mat_.trace() - 1.0);
  if (trace_err > 1e-8) throw InvalidArgument("density matrix trace off by " + std::to_string(trace_err));
  const CMatrix sym = 0.5 * (mat_ + mat_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw InvalidArgument("density matrix has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
}

CvDensity CvDensity::pure(const CvState& state) {
  return CvDensity(state.amps() * state.amps().adjoint(), Trusted{});
}

CMatrix annihilation(Eigen::Index d) {
  require_dim(d);
  CMatrix a = CMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CvOperator quadrature_q(Eigen::Index d) {
  const CMatrix a = annihilation(d);
  return {(a + a.adjoint()) / std::numbers::sqrt2};
}

CvOperator quadrature_p(Eigen::Index d) {
  const CMatrix a = annihilation(d);
  return {kI * (a.adjoint() - a) / std::numbers::sqrt2};
}

CvOperator displacement(Eigen::Index d, cplx beta, Diagnostics* diag) {
  const CMatrix a = annihilation(d);
  if (std::abs(beta) > std::sqrt(static_cast<double>(d)) / 4.0) {
    warn_to(diag, "displacement-range", "|beta| exceeds sqrt(d)/4 for d=" + std::to_string(d),
            std::abs(beta));
  }
  const CMatrix generator = beta * a.adjoint() - std::conj(beta) * a;
  return {expm(generator)};
}

QuadratureSpectrum::QuadratureSpectrum(Eigen::Index d) {
  require_dim(d);
  RVector diag = RVector::Zero(d);
  RVector sub(d - 1);
  for (Eigen::Index n = 1; n < d; ++n) sub[n - 1] = std::sqrt(n / 2.0);
  Eigen::SelfAdjointEigenSolver<RMatrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

std::shared_ptr<const QuadratureSpectrum> QuadratureSpectrum::get(Eigen::Index d) {
  static std::mutex mutex;
  static std::map<Eigen::Index, std::shared_ptr<const QuadratureSpectrum>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[d];
  if (!slot) slot = std::make_shared<const QuadratureSpectrum>(d);
  return slot;
}

void QuadratureSpectrum::apply_exp_iq(double t, CMatrix& block) const {
  apply_real_transposed(vectors_, block);
  for (Eigen::Index i = 0; i < block.rows(); ++i) block.row(i) *= std::polar(1.0, t * values_[i]);
  apply_real(vectors_, block);
}

void QuadratureSpectrum::apply_exp_ip(double t, CMatrix& block) const {
  scale_rows_by_ipow(block, false);
  apply_exp_iq(-t, block);
  scale_rows_by_ipow(block, true);
}

CMatrix QuadratureSpectrum::exp_iq(double t) const {
  CMatrix m = CMatrix::Identity(dim(), dim());
  apply_exp_iq(t, m);
  return m;
}

CMatrix QuadratureSpectrum::exp_ip(double t) const {
  CMatrix m = CMatrix::Identity(dim(), dim());
  apply_exp_ip(t, m);
  return m;
}

CvState fock(Eigen::Index d, Eigen::Index m) {
  require_dim(d);
  if (m < 0 || m >= d) {
    throw InvalidArgument("Fock index " + std::to_string(m) + " outside truncation " + std::to_string(d));
  }
  CVector amps = CVector::Zero(d);
  amps[m] = 1.0;
  return CvState(std::move(amps));
}

double coherent_tail(Eigen::Index d, cplx alpha) {
  const double mean = std::norm(alpha);
  if (mean == 0.0) return 0.0;
  // Poisson(mean) mass at n >= d, summed upward from n = d.
  double log_term = -mean + d * std::log(mean) - std::lgamma(static_cast<double>(d) + 1.0);
  double term = std::exp(log_term);
  double tail = 0.0;
  for (Eigen::Index n = d; n < d + 100000; ++n) {
    tail += term;
    term *= mean / static_cast<double>(n + 1);
    if (n > mean && term < 1e-18 * std::max(tail, 1e-300)) break;
  }
  return tail;
}

CvState coherent(Eigen::Index d, cplx alpha) {
  require_dim(d);
  const double leak = coherent_tail(d, alpha);
  if (leak > kLeakageThreshold) {
    throw TruncationError("coherent state leaks out of d=" + std::to_string(d), leak);
  }
  CVector amps(d);
  amps[0] = std::exp(-std::norm(alpha) / 2.0);
  for (Eigen::Index n = 1; n < d; ++n) amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return CvState(std::move(amps));
}

double squeezed_tail(Eigen::Index d, double r) {
  const double t = std::tanh(r);
  double c2 = 1.0 / std::cosh(r);  // |c_0|^2
  double head = 0.0;
  Eigen::Index n = 0;
  for (; 2 * n < d; ++n) {
    head += c2;
    c2 *= t * t * (2.0 * n + 1.0) / (2.0 * n + 2.0);
  }
  if (1.0 - head > 1e-8) return 1.0 - head;
  double tail = 0.0;
  for (Eigen::Index k = 0; k < 10000000; ++k, ++n) {
    tail += c2;
    c2 *= t * t * (2.0 * n + 1.0) / (2.0 * n + 2.0);
    if (c2 < 1e-18 * tail) break;
  }
  return tail;
}

CvState squeezed_vacuum(Eigen::Index d, double r) {
  require_dim(d);
  const double leak = squeezed_tail(d, r);
  if (leak > kLeakageThreshold) {
    throw TruncationError("squeezed vacuum r=" + std::to_string(r) + " leaks out of d=" + std::to_string(d),
                          leak);
  }
  const double t = std::tanh(r);
  CVector amps = CVector::Zero(d);
  double c = 1.0 / std::sqrt(std::cosh(r));
  for (Eigen::Index n = 0; 2 * n < d; ++n) {
    amps[2 * n] = c;
    c *= -t * std::sqrt((2.0 * n + 1.0) / (2.0 * n + 2.0));
  }
  return CvState(std::move(amps));
}

CvState cat(Eigen::Index d, double alpha) {
  require_dim(d);
  const double leak = coherent_tail(d, alpha);
  if (leak > kLeakageThreshold) {
    throw TruncationError("cat state alpha=" + std::to_string(alpha) + " leaks out of d=" + std::to_string(d),
                          leak);
  }
  CVector vac = CVector::Zero(d);
  vac[0] = 1.0;
  const CVector plus = displacement(d, alpha).mat * vac;
  const CVector minus = displacement(d, -alpha).mat * vac;
  return CvState(plus + minus);
}

double edge_weight(const CVector& amps, double fraction) {
  const Eigen::Index d = amps.size();
  const Eigen::Index count = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(fraction * d)));
  return amps.tail(count).squaredNorm();
}

RVector hermite_functions(Eigen::Index nmax, double q) {
  RVector out(nmax + 1);
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);
  double log_scale = -0.5 * q * q;
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  out[0] = cur * std::exp(log_scale);
  for (Eigen::Index n = 1; n <= nmax; ++n) {
    const double nd = static_cast<double>(n);
    const double next = std::sqrt(2.0 / nd) * q * cur - std::sqrt((nd - 1.0) / nd) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += log_rescale;
    }
    out[n] = cur * std::exp(log_scale);
  }
  return out;
}

CVector wavefunction(const CVector& amps, std::span<const double> qgrid) {
  Eigen::Index nmax = amps.size() - 1;
  while (nmax > 0 && amps[nmax] == 0.0) --nmax;
  CVector psi(static_cast<Eigen::Index>(qgrid.size()));
  for (std::size_t j = 0; j < qgrid.size(); ++j) {
    const RVector h = hermite_functions(nmax, qgrid[j]);
    psi[static_cast<Eigen::Index>(j)] = (amps.head(nmax + 1).array() * h.array()).sum();
  }
  return psi;
}

CVector wavefunction(const CvState& state, std::span<const double> qgrid) {
  return wavefunction(state.amps(), qgrid);
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw InvalidArgument("linspace needs at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

double fidelity_pure(const CvState& a, const CvState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("fidelity between states of different dimension");
  return std::norm(a.amps().dot(b.amps()));
}

double fidelity_mixed(const CvState& psi, const CvDensity& rho) {
  if (psi.dim() != rho.dim()) throw DimensionMismatch("fidelity between state and density of different dimension");
  return std::real(psi.amps().dot(rho.mat() * psi.amps()));
}

double expectation(const CvState& state, const CvOperator& op) {
  if (state.dim() != op.dim()) throw DimensionMismatch("operator and state dimensions differ");
  return std::real(state.amps().dot(op.mat * state.amps()));
}

}  // namespace cvqt
