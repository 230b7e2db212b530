#include "cvqt/grid_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvqt/errors.hpp"
#include "cvqt/hilbert.hpp"

namespace cvqt {
namespace {

double sinc_pi(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x * std::numbers::pi * std::numbers::pi / 6.0;
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

struct Walker {
  int n_qubits;
  int m;  // grid points per lambda
  double h;
  const CVector* kernel;  // h * sinc(pi q/2 lambda)/sqrt(2 lambda)
  // factors[2(k-1) + b] = cos(pi/4 + s v_k q) with s = +1 (b = 0) or -1 (b = 1)
  std::vector<RVector> factors;
  std::vector<CVector> levels;
  CVector* out;
  double leakage = 0.0;

  void descend(int k, Eigen::Index index) {
    const CVector& chi = levels[static_cast<std::size_t>(k - 1)];
    if (k > n_qubits) {
      (*out)[index] = chi.cwiseProduct(*kernel).sum();
      return;
    }
    const Eigen::Index n = chi.size();
    const Eigen::Index shift = static_cast<Eigen::Index>(m) << (k - 1);
    CVector& next = levels[static_cast<std::size_t>(k)];
    for (int b = 0; b < 2; ++b) {
      const int sgn = b == 0 ? 1 : -1;
      const RVector& f = factors[static_cast<std::size_t>(2 * (k - 1) + b)];
      // |+> branch of W_k (k < N) maps chi(q) to chi(q + w); flipped at k = N.
      const Eigen::Index disp = (k < n_qubits ? 1 : -1) * sgn * shift;
      const Eigen::Index len = n - std::abs(disp);
      next.setZero();
      if (disp >= 0) {
        next.head(len) = f.segment(disp, len).cwiseProduct(chi.segment(disp, len));
        leakage += h * f.head(disp).cwiseProduct(chi.head(disp)).squaredNorm();
      } else {
        next.tail(len) = f.head(len).cwiseProduct(chi.head(len));
        leakage += h * f.tail(-disp).cwiseProduct(chi.tail(-disp)).squaredNorm();
      }
      descend(k + 1, index | (Eigen::Index{b} << (k - 1)));
    }
  }
};

}  // namespace

GridProjection grid_project(const CVector& fock_amps, double lambda, int n_qubits, int oversample) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (n_qubits < 2 || n_qubits > 16) throw InvalidArgument("grid engine supports 2..16 qubits");
  if (oversample < 2) throw InvalidArgument("oversample must be >= 2");
  Eigen::Index top = fock_amps.size() - 1;
  while (top > 0 && std::norm(fock_amps[top]) < 1e-14) --top;
  const double radius = std::sqrt(2.0 * static_cast<double>(top) + 1.0) + 8.0;
  // Band limit: pointer state pi/(2 lambda), accumulated cosines another
  // pi/(2 lambda), input momentum support `radius`. Nyquist pi/h must cover it.
  const int m = std::max(oversample, static_cast<int>(std::ceil(1.0 + radius * lambda / std::numbers::pi)) + 1);
  const double h = lambda / m;
  const double half = lambda * (std::ldexp(1.0, n_qubits) - 1.0) + radius;
  const Eigen::Index side = static_cast<Eigen::Index>(std::ceil(half / h));
  const Eigen::Index n = 2 * side + 1;

  std::vector<double> q(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = static_cast<double>(i - side) * h;
  CVector kernel(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kernel[i] = h * sinc_pi(q[static_cast<std::size_t>(i)] / (2.0 * lambda)) / std::sqrt(2.0 * lambda);
  }

  GridProjection out;
  out.spacing = h;
  out.points = n;
  out.amps = CVector::Zero(Eigen::Index{1} << n_qubits);

  Walker walker{n_qubits, m, h, &kernel, {}, {}, &out.amps};
  for (int k = 1; k <= n_qubits; ++k) {
    const double v = std::numbers::pi / (2.0 * std::ldexp(lambda, k));
    for (int sgn : {1, -1}) {
      RVector f(n);
      for (Eigen::Index i = 0; i < n; ++i) f[i] = std::cos(std::numbers::pi / 4.0 + sgn * v * q[static_cast<std::size_t>(i)]);
      walker.factors.push_back(std::move(f));
    }
  }
  walker.levels.assign(static_cast<std::size_t>(n_qubits + 1), CVector::Zero(n));
  const CVector amps = fock_amps.head(top + 1);
  CVector& psi = walker.levels[0];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double qi = q[static_cast<std::size_t>(i)];
    psi[i] = std::abs(qi) > radius + 4.0 ? cplx{0.0} : (amps.array() * hermite_functions(top, qi).array()).sum();
  }
  // The sampled input norm differs from 1 by the trapezoid error only.
  walker.descend(1, 0);
  out.leakage = walker.leakage;
  out.epsilon = std::max(0.0, 1.0 - out.amps.squaredNorm());
  return out;
}

}  // namespace cvqt
