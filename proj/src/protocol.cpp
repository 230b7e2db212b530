#include "cvqt/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "cvqt/errors.hpp"

namespace cvqt {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Radius in q beyond which a state has negligible weight: turning point of
// its highest populated Fock level plus a margin.
double support_radius(const CVector& amps) {
  Eigen::Index top = amps.size() - 1;
  while (top > 0 && std::norm(amps[top]) < 1e-12) --top;
  return std::sqrt(2.0 * static_cast<double>(top) + 1.0) + 3.0;
}

void check_norm(const CMatrix& block, const char* what, Diagnostics* diag) {
  const double drift = std::abs(block.norm() - 1.0);
  if (drift > 1e-6) warn_to(diag, "norm-drift", std::string(what) + " changed the joint norm", drift);
}

void check_edge(const CMatrix& block, Diagnostics* diag) {
  const Eigen::Index d = block.rows();
  const Eigen::Index count = std::max<Eigen::Index>(1, d / 10);
  const double edge = block.bottomRows(count).squaredNorm();
  if (edge > kLeakageThreshold) {
    warn_to(diag, "truncation-edge", "joint state populates the top 10% of the Fock basis", edge);
  }
}

}  // namespace

void ProtocolParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive and finite");
  if (n_qubits < 2 || n_qubits > 20) throw InvalidArgument("n_qubits must lie in 2..20");
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
}

double ProtocolParams::v(int k) const {
  if (k < 1 || k > n_qubits) throw InvalidArgument("qubit index out of range");
  return std::numbers::pi / (2.0 * std::ldexp(lambda, k));
}

double ProtocolParams::w(int k) const {
  if (k < 1 || k > n_qubits) throw InvalidArgument("qubit index out of range");
  return std::ldexp(lambda, k) / 2.0;
}

double ProtocolParams::max_displacement() const {
  return std::ldexp(lambda, n_qubits) / 2.0 * std::numbers::sqrt2;
}

void ProtocolParams::check_extent(double support, Diagnostics* diag) const {
  const double turning = std::sqrt(2.0 * static_cast<double>(dim) - 1.0);
  const double reach = max_displacement() + support;
  if (reach >= turning) {
    warn_to(diag, "turning-point", "displaced support reaches the top Fock level", reach / turning);
  }
  // Momentum extent of the pointer state, pi/(2 lambda), against the same bound.
  const double momentum = std::numbers::pi / (2.0 * lambda);
  if (momentum >= turning) {
    warn_to(diag, "momentum-extent", "pointer-state momentum box exceeds the Fock basis", momentum / turning);
  }
}

HybridState::HybridState(CMatrix block) : block_(std::move(block)) {
  n_qubits_ = qubit_count(block_.cols());
  if (block_.rows() < 2) throw InvalidDimension("CV dimension must be >= 2");
  const double norm = block_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("joint state has zero or non-finite norm");
  block_ /= norm;
}

HybridState::HybridState(CMatrix block, Trusted) : block_(std::move(block)) {
  n_qubits_ = qubit_count(block_.cols());
}

HybridState::HybridState(const CvState& cv, const RegisterState& reg)
    : HybridState(CMatrix(cv.amps() * reg.amps().transpose())) {}

HybridState HybridState::with_ground_register(const CvState& cv, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 20) throw InvalidArgument("qubit count out of range");
  CMatrix block = CMatrix::Zero(cv.dim(), Eigen::Index{1} << n_qubits);
  block.col(0) = cv.amps();
  return HybridState(std::move(block));
}

CVector HybridState::flat() const {
  const Eigen::Index m = block_.cols();
  CVector out(block_.size());
  for (Eigen::Index n = 0; n < block_.rows(); ++n) {
    for (Eigen::Index r = 0; r < m; ++r) out[n * m + r] = block_(n, r);
  }
  return out;
}

double fidelity_pure(const HybridState& a, const HybridState& b) {
  if (a.cv_dim() != b.cv_dim() || a.n_qubits() != b.n_qubits()) {
    throw DimensionMismatch("joint states of different shape");
  }
  const cplx overlap = (a.block().conjugate().cwiseProduct(b.block())).sum();
  return std::norm(overlap);
}

JointGate::JointGate(Kind kind, int k, const ProtocolParams& params)
    : kind_(kind), k_(k), n_qubits_(params.n_qubits) {
  params.validate();
  if (k < 1 || k > params.n_qubits) {
    throw InvalidArgument("gate index " + std::to_string(k) + " outside 1.." + std::to_string(params.n_qubits));
  }
  if (kind == Kind::V) {
    angle_ = params.v(k);
  } else {
    angle_ = (k < params.n_qubits ? 1.0 : -1.0) * params.w(k);
  }
  spectrum_ = QuadratureSpectrum::get(params.dim);
}

void JointGate::apply(Eigen::Ref<CMatrix> block, bool adjoint) const {
  const Eigen::Index d = spectrum_->dim();
  if (block.rows() != d) throw DimensionMismatch("gate dimension differs from state dimension");
  const Eigen::Index bit = Eigen::Index{1} << (k_ - 1);
  if (block.cols() % (2 * bit) != 0) throw DimensionMismatch("block width is not a multiple of 2^k");
  const Eigen::Index half = block.cols() / 2;

  // Rotate each (bit clear, bit set) column pair into the eigenbasis of the
  // gate's Pauli operator: sigma_y for V, sigma_x for W.
  CMatrix plus(d, half);
  CMatrix minus(d, half);
  Eigen::Index j = 0;
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    if (c & bit) continue;
    const auto a = block.col(c);
    const auto b = block.col(c | bit);
    if (kind_ == Kind::V) {
      plus.col(j) = (a - kI * b) * kInvSqrt2;
      minus.col(j) = (a + kI * b) * kInvSqrt2;
    } else {
      plus.col(j) = (a + b) * kInvSqrt2;
      minus.col(j) = (a - b) * kInvSqrt2;
    }
    ++j;
  }
  const double t = adjoint ? -angle_ : angle_;
  if (kind_ == Kind::V) {
    spectrum_->apply_exp_iq(t, plus);
    spectrum_->apply_exp_iq(-t, minus);
  } else {
    spectrum_->apply_exp_ip(t, plus);
    spectrum_->apply_exp_ip(-t, minus);
  }
  j = 0;
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    if (c & bit) continue;
    block.col(c) = (plus.col(j) + minus.col(j)) * kInvSqrt2;
    if (kind_ == Kind::V) {
      block.col(c | bit) = kI * (plus.col(j) - minus.col(j)) * kInvSqrt2;
    } else {
      block.col(c | bit) = (plus.col(j) - minus.col(j)) * kInvSqrt2;
    }
    ++j;
  }
}

CMatrix JointGate::dense() const {
  const Eigen::Index d = spectrum_->dim();
  const Eigen::Index m = Eigen::Index{1} << n_qubits_;
  const Eigen::Index total = d * m;
  CMatrix block = CMatrix::Zero(d, total * m);
  for (Eigen::Index col = 0; col < total; ++col) block(col / m, col * m + col % m) = 1.0;
  apply(block);
  CMatrix out(total, total);
  for (Eigen::Index col = 0; col < total; ++col) {
    for (Eigen::Index n = 0; n < d; ++n) {
      for (Eigen::Index r = 0; r < m; ++r) out(n * m + r, col) = block(n, col * m + r);
    }
  }
  return out;
}

JointGate gate_V(int k, const ProtocolParams& params) { return JointGate(JointGate::Kind::V, k, params); }
JointGate gate_W(int k, const ProtocolParams& params) { return JointGate(JointGate::Kind::W, k, params); }

Encoder::Encoder(const ProtocolParams& params) : params_(params) {
  params_.validate();
  for (int k = 1; k <= params_.n_qubits; ++k) {
    gates_.push_back(gate_V(k, params_));
    gates_.push_back(gate_W(k, params_));
  }
}

void Encoder::encode_block(CMatrix& block) const {
  for (const auto& gate : gates_) gate.apply(block, false);
}

void Encoder::decode_block(CMatrix& block) const {
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) it->apply(block, true);
}

HybridState Encoder::encode(const CvState& input, Diagnostics* diag) const {
  if (input.dim() != params_.dim) throw DimensionMismatch("input dimension differs from params.dim");
  params_.check_extent(support_radius(input.amps()), diag);
  CMatrix block = CMatrix::Zero(params_.dim, params_.register_dim());
  block.col(0) = input.amps();
  // Before qubit k interacts only columns below 2^(k-1) are populated.
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Eigen::Index width = Eigen::Index{1} << (gates_[i].qubit());
    gates_[i].apply(block.leftCols(width), false);
  }
  check_norm(block, "encode", diag);
  check_edge(block, diag);
  return HybridState(std::move(block), HybridState::Trusted{});
}

HybridState Encoder::decode(const HybridState& state, Diagnostics* diag) const {
  if (state.cv_dim() != params_.dim || state.n_qubits() != params_.n_qubits) {
    throw DimensionMismatch("joint state shape differs from params");
  }
  CMatrix block = state.block();
  decode_block(block);
  check_norm(block, "decode", diag);
  return HybridState(std::move(block), HybridState::Trusted{});
}

namespace {

Tilde0Report compute_tilde0(double lambda, Eigen::Index d) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const double a = std::numbers::pi / (2.0 * lambda);
  // h_n(p) for n < d is below 1e-30 beyond its turning point plus 12.
  const double b = std::min(a, std::sqrt(2.0 * static_cast<double>(d) + 1.0) + 12.0);
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();

  auto integrate = [&](int panels) {
    RVector acc = RVector::Zero(d);
    const double width = 2.0 * b / panels;
    for (int i = 0; i < panels; ++i) {
      const double mid = -b + (i + 0.5) * width;
      const double halfw = 0.5 * width;
      for (std::size_t j = 0; j < abscissa.size(); ++j) {
        const double wj = weights[j] * halfw;
        acc += wj * hermite_functions(d - 1, mid + halfw * abscissa[j]);
        if (abscissa[j] != 0.0) acc += wj * hermite_functions(d - 1, mid - halfw * abscissa[j]);
      }
    }
    return acc;
  };

  int panels = std::max(8, static_cast<int>(std::ceil(2.0 * b / 0.5)));
  RVector prev = integrate(panels);
  double change = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 6; ++round) {
    panels *= 2;
    RVector next = integrate(panels);
    change = (next - prev).cwiseAbs().maxCoeff();
    prev = std::move(next);
    if (change < 1e-13) break;
  }
  if (!(change <= kTilde0Tolerance)) {
    throw ConvergenceError("sinc projection quadrature did not converge", change);
  }
  CVector amps = CVector::Zero(d);
  const double scale = std::sqrt(lambda / std::numbers::pi);
  for (Eigen::Index n = 0; n < d; n += 2) amps[n] = ((n / 2) % 2 == 0 ? 1.0 : -1.0) * scale * prev[n];
  Tilde0Report report{CvState(amps), amps.squaredNorm(), change, panels};
  return report;
}

}  // namespace

const Tilde0Report& tilde0_sinc(double lambda, Eigen::Index d) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive and finite");
  if (d < 2) throw InvalidDimension("truncation dimension must be >= 2");
  static std::mutex mutex;
  static std::map<std::pair<double, Eigen::Index>, std::unique_ptr<Tilde0Report>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{lambda, d}];
  if (!slot) slot = std::make_unique<Tilde0Report>(compute_tilde0(lambda, d));
  return *slot;
}

CMatrix tilde0_iterated_density(const ProtocolParams& params) {
  // Reusing one qubit, reset to |0> after each pair, leaves the CV mode in
  // the same state as N fresh qubits that are never touched again, so the
  // density is Tr_reg of the N-qubit encoding of vacuum.
  const Encoder enc(params);
  const HybridState s = enc.encode(fock(params.dim, 0));
  return s.block() * s.block().adjoint();
}

CvState tilde0(const ProtocolParams& params, Tilde0Method method, Diagnostics* diag) {
  params.validate();
  switch (method) {
    case Tilde0Method::SincProjection: {
      const auto& rep = tilde0_sinc(params.lambda, params.dim);
      // The ideal state has 1/q position tails, so some norm is always lost.
      if (1.0 - rep.captured_norm > 1e-2) {
        warn_to(diag, "tilde0-captured", "pointer state only partly fits the Fock basis", rep.captured_norm);
      }
      return rep.state;
    }
    case Tilde0Method::IteratedEncode: {
      const CMatrix rho = tilde0_iterated_density(params);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
      CVector top = es.eigenvectors().col(es.eigenvectors().cols() - 1);
      if (std::abs(top[0]) > 0.0) top *= std::conj(top[0]) / std::abs(top[0]);
      return CvState(std::move(top));
    }
    case Tilde0Method::Squeezed:
      return squeezed_vacuum(params.dim, std::log(1.12 / params.lambda));
  }
  throw InvalidArgument("unknown construction");
}

CVector project_tilde0(const HybridState& state, const CvState& t0) {
  if (state.cv_dim() != t0.dim()) throw DimensionMismatch("pointer state dimension differs");
  return state.block().transpose() * t0.amps().conjugate();
}

double epsilon(const HybridState& encoded, const ProtocolParams& params, Diagnostics* diag) {
  const CvState t0 = tilde0(params, Tilde0Method::SincProjection, diag);
  const double eps = 1.0 - project_tilde0(encoded, t0).squaredNorm();
  if (eps < 0.0) {
    warn_to(diag, "clamped", "negative epsilon from round-off", eps);
    return 0.0;
  }
  return eps;
}

double epsilon(const CvState& input, const ProtocolParams& params, Diagnostics* diag) {
  const Encoder enc(params);
  return epsilon(enc.encode(input, diag), params, diag);
}

ResetResult reset_cv(const HybridState& state, const ProtocolParams& params) {
  const CMatrix& s = state.block();
  const CMatrix rho = s.transpose() * s.conjugate();
  return ResetResult{tilde0(params, Tilde0Method::SincProjection), BranchEnsemble::from_density(rho)};
}

Recovery recover(const CvState& input, const ProtocolParams& params, const KrausChannel* channel,
                 DecodeMode mode) {
  Recovery out;
  const Encoder enc(params);
  const HybridState encoded = enc.encode(input, &out.diagnostics);
  const CvState t0 = tilde0(params, Tilde0Method::SincProjection, &out.diagnostics);
  const CVector g = project_tilde0(encoded, t0);
  out.epsilon = std::max(0.0, 1.0 - g.squaredNorm());

  BranchEnsemble ens = reset_cv(encoded, params).reg;
  if (channel) {
    ens = apply_to_register(ens, *channel, kAllQubits).compressed(static_cast<std::size_t>(params.register_dim()));
  }
  out.branches = static_cast<int>(ens.size());

  double overlap_route = 0.0;
  for (const auto& br : ens.branches()) overlap_route += br.weight * std::norm(g.dot(br.amps));

  if (mode == DecodeMode::Overlap) {
    out.fidelity = overlap_route;
    out.fidelity_dual = std::numeric_limits<double>::quiet_NaN();
  } else {
    const Eigen::Index m = params.register_dim();
    const Eigen::Index count = static_cast<Eigen::Index>(ens.size());
    CMatrix block(params.dim, count * m);
    for (Eigen::Index j = 0; j < count; ++j) {
      const auto& br = ens.branches()[static_cast<std::size_t>(j)];
      block.middleCols(j * m, m) = t0.amps() * br.amps.transpose();
    }
    enc.decode_block(block);
    double full_route = 0.0;
    for (Eigen::Index j = 0; j < count; ++j) {
      const double p = ens.branches()[static_cast<std::size_t>(j)].weight;
      full_route += p * std::norm(input.amps().dot(block.col(j * m)));
      block.middleCols(j * m, m) *= std::sqrt(p);
    }
    CMatrix rho = block * block.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    out.cv_density = std::move(rho);
    out.fidelity = full_route;
    out.fidelity_dual = overlap_route;
  }
  if (out.fidelity > 1.0) {
    warn_to(&out.diagnostics, "clamped", "fidelity above one from round-off", out.fidelity - 1.0);
    out.fidelity = 1.0;
  }
  return out;
}

double recovered_fidelity(const CvState& input, const ProtocolParams& params, const KrausChannel* channel) {
  return recover(input, params, channel, DecodeMode::Full).fidelity;
}

LambdaOptimum optimize_lambda(const std::function<double(double)>& eps_of_lambda, const LambdaSearch& search) {
  if (!(search.lo > 0.0) || !(search.hi > search.lo) || search.coarse_points < 3) {
    throw InvalidArgument("lambda search needs 0 < lo < hi and at least 3 coarse points");
  }
  LambdaOptimum best{0.0, std::numeric_limits<double>::infinity(), 0};
  auto eval = [&](double lam) {
    const double e = eps_of_lambda(lam);
    ++best.evaluations;
    if (e < best.epsilon) {
      best.epsilon = e;
      best.lambda = lam;
    }
    return e;
  };
  const int n = search.coarse_points;
  const double ratio = std::pow(search.hi / search.lo, 1.0 / (n - 1));
  std::vector<double> grid(static_cast<std::size_t>(n));
  int arg = 0;
  double arg_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = (i == n - 1) ? search.hi : search.lo * std::pow(ratio, i);
    const double e = eval(grid[static_cast<std::size_t>(i)]);
    if (e < arg_val) {
      arg_val = e;
      arg = i;
    }
  }
  double a = grid[static_cast<std::size_t>(std::max(0, arg - 1))];
  double b = grid[static_cast<std::size_t>(std::min(n - 1, arg + 1))];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > search.tolerance * best.lambda) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eval(x2);
    }
  }
  return best;
}

}  // namespace cvqt
