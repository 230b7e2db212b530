#include "cvqt/oracle.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cvqt/errors.hpp"

namespace cvqt {
namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive and finite");
}

constexpr double kOverlapC = std::numbers::pi / (2.0 * std::numbers::sqrt2);

}  // namespace

void OracleConfig::validate() const {
  require_lambda(lambda);
  if (n_qubits < 2) throw InvalidArgument("oracle needs N >= 2");
}

double cos_product(double q, double lambda, int n_qubits) {
  require_lambda(lambda);
  double prod = 1.0;
  for (int k = 1; k <= n_qubits; ++k) prod *= std::cos(std::numbers::pi * q / (2.0 * std::ldexp(lambda, k)));
  return prod;
}

double sinc_kernel(double q, double lambda) {
  require_lambda(lambda);
  const double x = std::numbers::pi * q / (2.0 * lambda);
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

EncodedAmplitudes encoded_amplitudes(const CVector& fock_amps, double lambda, int n_qubits) {
  require_lambda(lambda);
  if (n_qubits < 2 || n_qubits > 24) throw InvalidArgument("oracle supports 2..24 qubits");
  const Eigen::Index m = Eigen::Index{1} << n_qubits;
  std::vector<double> grid(static_cast<std::size_t>(m));
  std::vector<int> signs(static_cast<std::size_t>(m));
  for (Eigen::Index idx = 0; idx < m; ++idx) {
    const SignVector s = SignVector::from_index(static_cast<std::uint64_t>(idx), n_qubits);
    grid[static_cast<std::size_t>(idx)] = grid_point(s, lambda);
    signs[static_cast<std::size_t>(idx)] = gamma_sign(s);
  }
  const CVector psi = wavefunction(fock_amps, grid);
  EncodedAmplitudes out;
  out.amps.resize(m);
  for (Eigen::Index idx = 0; idx < m; ++idx) {
    out.amps[idx] = static_cast<double>(signs[static_cast<std::size_t>(idx)]) * std::sqrt(2.0 * lambda) * psi[idx];
  }
  out.raw_norm = out.amps.norm();
  if (out.raw_norm > 0.0) out.amps /= out.raw_norm;
  return out;
}

std::vector<PositionBranch> exact_position_expansion(double q, double lambda, int n_qubits) {
  require_lambda(lambda);
  if (n_qubits < 2 || n_qubits > 5) throw InvalidArgument("brute-force expansion limited to 2..5 qubits");
  std::vector<PositionBranch> out;
  const std::uint64_t count = std::uint64_t{1} << n_qubits;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const SignVector s = SignVector::from_index(idx, n_qubits);
    double pos = q;
    double coeff = 1.0;
    for (int k = 1; k <= n_qubits; ++k) {
      const double v = std::numbers::pi / (2.0 * std::ldexp(lambda, k));
      const double w = std::ldexp(lambda, k) / 2.0;
      coeff *= std::cos(std::numbers::pi / 4.0 + s.sign(k) * v * pos);
      // exp(i w p)|q> = |q - w>
      pos += (k < n_qubits ? -1.0 : 1.0) * s.sign(k) * w;
    }
    out.push_back(PositionBranch{s, coeff, pos});
  }
  return out;
}

int branch_sign(const PositionBranch& branch, double lambda) {
  const double ratio = branch.coefficient / cos_product(branch.position, lambda, branch.s.size());
  if (!std::isfinite(ratio) || ratio == 0.0) return 0;
  return ratio > 0.0 ? 1 : -1;
}

double squeezed_overlap_u(double u) {
  if (!(u > 0.0)) throw InvalidArgument("lambda e^r must be positive");
  const double e = std::erf(kOverlapC / u);
  return 2.0 / std::sqrt(std::numbers::pi) * u * e * e;
}

double squeezed_overlap(double lambda, double r) {
  require_lambda(lambda);
  return squeezed_overlap_u(lambda * std::exp(r));
}

double squeezed_overlap_numeric(double lambda, double r) {
  require_lambda(lambda);
  const double er = std::exp(r);
  const double norm = std::sqrt(std::sqrt(er * er / std::numbers::pi));
  auto integrand = [&](double q) {
    const double x = q * er;
    return norm * std::exp(-0.5 * x * x) * sinc_kernel(q, lambda) / std::sqrt(2.0 * lambda);
  };
  // The Gaussian is below 1e-20 beyond 9.6 widths; integrate over 12.
  const double half = 12.0 / er;
  const int panels = 64;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = -half + 2.0 * half * i / panels;
    const double b = -half + 2.0 * half * (i + 1) / panels;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 10, 1e-15);
  }
  return total * total;
}

OverlapOptimum squeezed_overlap_optimum() {
  // dF/du is proportional to g(u) = erf(c/u) - 4c/(sqrt(pi) u) exp(-c^2/u^2).
  auto g = [](double u) {
    const double x = kOverlapC / u;
    return std::erf(x) - 4.0 * x / std::sqrt(std::numbers::pi) * std::exp(-x * x);
  };
  double lo = 0.3;
  double hi = 5.0;
  if (!(g(lo) > 0.0 && g(hi) < 0.0)) throw ConvergenceError("overlap optimum not bracketed", hi - lo);
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double u = 0.5 * (lo + hi);
  return {u, squeezed_overlap_u(u)};
}

double l2_distance_up_to_phase(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vectors of different length");
  const CVector na = a / a.norm();
  const CVector nb = b / b.norm();
  const cplx ov = nb.dot(na);
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx{1.0};
  return (na - phase * nb).norm();
}

}  // namespace cvqt
