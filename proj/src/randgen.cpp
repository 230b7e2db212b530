#include "cvqt/randgen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cvqt/errors.hpp"

namespace cvqt {
namespace {

constexpr double kKappaMax = 50.0;

// Uniform on [0, 1) from the top 53 bits; independent of library distributions.
double uniform53(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

void RandomStateSpec::validate() const {
  if (n_terms < 2) throw InvalidArgument("n_terms must be >= 2");
  if (n_terms > dim) throw InvalidArgument("n_terms exceeds the truncation dimension");
  if (!(target_nbar > 0.0) || !(target_nbar < n_terms / 2.0)) {
    throw InvalidArgument("target mean photon number must lie in (0, n_terms/2)");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CVector draw_coefficients(int n_terms, std::uint64_t seed) {
  if (n_terms < 1) throw InvalidArgument("n_terms must be positive");
  std::mt19937_64 gen(seed);
  CVector c(n_terms);
  for (int m = 0; m < n_terms; ++m) {
    const double amp = uniform53(gen);
    const double phase = 2.0 * std::numbers::pi * uniform53(gen);
    c[m] = std::polar(amp, phase);
  }
  return c;
}

double filtered_mean_photon(const CVector& coeffs, double kappa) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index m = 0; m < coeffs.size(); ++m) {
    const double w = std::norm(coeffs[m]) * std::exp(-2.0 * kappa * static_cast<double>(m));
    num += static_cast<double>(m) * w;
    den += w;
  }
  if (!(den > 0.0)) return 0.0;
  return num / den;
}

double solve_kappa(const CVector& coeffs, double target_nbar) {
  double lo = 0.0;
  double hi = kKappaMax;
  const double at_lo = filtered_mean_photon(coeffs, lo);
  const double at_hi = filtered_mean_photon(coeffs, hi);
  if (!(target_nbar <= at_lo && target_nbar >= at_hi)) {
    const double nearer = target_nbar > at_lo ? at_lo : at_hi;
    throw ConvergenceError("target mean photon " + std::to_string(target_nbar) + " outside reachable range [" +
                               std::to_string(at_hi) + ", " + std::to_string(at_lo) + "] for kappa in [0, 50]",
                           nearer);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (filtered_mean_photon(coeffs, mid) > target_nbar) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double kappa = 0.5 * (lo + hi);
  const double err = std::abs(filtered_mean_photon(coeffs, kappa) - target_nbar);
  if (err > 1e-6) throw ConvergenceError("kappa bisection stalled", err);
  return kappa;
}

RandomState random_state_with_kappa(const RandomStateSpec& spec) {
  spec.validate();
  const CVector coeffs = draw_coefficients(spec.n_terms, spec.seed);
  const double kappa = solve_kappa(coeffs, spec.target_nbar);
  CVector amps = CVector::Zero(spec.dim);
  for (int m = 0; m < spec.n_terms; ++m) amps[m] = coeffs[m] * std::exp(-kappa * m);
  return RandomState{CvState(std::move(amps)), kappa};
}

double mean_photon(const CvState& state) {
  double total = 0.0;
  for (Eigen::Index m = 0; m < state.dim(); ++m) total += static_cast<double>(m) * std::norm(state[m]);
  return total;
}

}  // namespace cvqt
