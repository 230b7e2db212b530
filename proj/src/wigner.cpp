#include <cmath>
#include <numbers>

#include "cvqt/hilbert.hpp"

namespace cvqt {
namespace {

// Largest index carrying weight on the diagonal, plus one.
Eigen::Index effective_dim(const CMatrix& rho) {
  Eigen::Index d = rho.rows();
  while (d > 1 && std::abs(rho(d - 1, d - 1)) < 1e-16) --d;
  return d;
}

// g_n^(k)(x) = sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^(k)(x) for n = 0..count-1,
// by the upward three-term recurrence with a running log scale.
void normalized_laguerre(int k, double x, int count, double* out) {
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);
  double log_scale = -0.5 * x - 0.5 * std::lgamma(k + 1.0);
  if (k > 0) log_scale += (x > 0.0) ? 0.5 * k * std::log(x) : -INFINITY;
  // Start values are kept at O(1) and the true magnitude lives in log_scale.
  double factor = std::exp(log_scale);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = factor;
  if (count == 1) return;
  double next = (1.0 + k - x) / std::sqrt(k + 1.0);
  prev = cur;
  cur = next;
  out[1] = cur * factor;
  for (int n = 2; n < count; ++n) {
    const double nd = n;
    next = (2.0 * nd - 1.0 + k - x) / std::sqrt(nd * (nd + k)) * cur -
           std::sqrt((nd - 1.0) * (nd - 1.0 + k) / (nd * (nd + k))) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += log_rescale;
      factor = std::exp(log_scale);
    }
    out[n] = cur * factor;
  }
}

}  // namespace

RMatrix wigner(const CvDensity& rho, std::span<const double> qgrid, std::span<const double> pgrid) {
  const CMatrix& m = rho.mat();
  const Eigen::Index d = effective_dim(m);
  // diag_k[n] = (-1)^n rho(n+k, n)
  std::vector<std::vector<cplx>> diags(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    auto& v = diags[static_cast<std::size_t>(k)];
    v.resize(static_cast<std::size_t>(d - k));
    for (Eigen::Index n = 0; n + k < d; ++n) {
      v[static_cast<std::size_t>(n)] = ((n & 1) ? -1.0 : 1.0) * m(n + k, n);
    }
  }
  std::vector<double> lag(static_cast<std::size_t>(d));
  RMatrix w(static_cast<Eigen::Index>(qgrid.size()), static_cast<Eigen::Index>(pgrid.size()));
  for (std::size_t i = 0; i < qgrid.size(); ++i) {
    for (std::size_t j = 0; j < pgrid.size(); ++j) {
      const double q = qgrid[i];
      const double p = pgrid[j];
      const double x = 2.0 * (q * q + p * p);
      const double theta = std::atan2(p, q);
      double total = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const int count = static_cast<int>(d - k);
        normalized_laguerre(static_cast<int>(k), x, count, lag.data());
        cplx acc = 0.0;
        const auto& v = diags[static_cast<std::size_t>(k)];
        for (int n = 0; n < count; ++n) acc += v[static_cast<std::size_t>(n)] * lag[static_cast<std::size_t>(n)];
        if (k == 0) {
          total += acc.real();
        } else {
          total += 2.0 * std::real(std::polar(1.0, -static_cast<double>(k) * theta) * acc);
        }
      }
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = total / std::numbers::pi;
    }
  }
  return w;
}

RMatrix wigner(const CvState& state, std::span<const double> qgrid, std::span<const double> pgrid) {
  return wigner(CvDensity::pure(state), qgrid, pgrid);
}

}  // namespace cvqt
