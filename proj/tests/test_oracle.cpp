#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvqt/errors.hpp"
#include "cvqt/oracle.hpp"
#include "support.hpp"

using namespace cvqt;
using std::numbers::pi;

TEST_CASE("cos product values") {
  CHECK(cos_product(0.0, 0.3, 5) == 1.0);
  // First factor vanishes at q = 2 lambda.
  CHECK(std::abs(cos_product(0.6, 0.3, 4)) < 1e-15);
  CHECK(std::abs(cos_product(0.1, 0.2, 2) - std::cos(pi * 0.1 / 0.8) * std::cos(pi * 0.1 / 1.6)) < 1e-15);
  testing::Gen gen(3);
  for (int i = 0; i < 50; ++i) {
    const double q = gen.uniform(-3.0, 3.0);
    const double lambda = gen.uniform(0.05, 0.5);
    CHECK(cos_product(q, lambda, 6) == doctest::Approx(cos_product(-q, lambda, 6)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(cos_product(0.0, 0.0, 3), InvalidArgument);
}

TEST_CASE("cos product tends to the sinc kernel") {
  // sin(x)/x = prod_k cos(x/2^k); error after N factors is O(x^2 4^-N).
  const double lambda = 0.2;
  double prev = 1.0;
  for (int n : {4, 8, 12, 16, 20}) {
    double err = 0.0;
    for (double q : linspace(-4 * lambda, 4 * lambda, 801)) {
      err = std::max(err, std::abs(cos_product(q, lambda, n) - sinc_kernel(q, lambda)));
    }
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-6);
  CHECK(sinc_kernel(0.0, 0.3) == 1.0);
  CHECK(std::abs(sinc_kernel(0.6, 0.3)) < 1e-15);
}

TEST_CASE("cos product revives at multiples of lambda 2^(N+1)") {
  const double lambda = 0.1;
  const int n = 3;
  const double period = lambda * std::ldexp(2.0, n);
  for (double q : {0.0, 0.05, 0.13}) {
    CHECK(std::abs(std::abs(cos_product(q + period, lambda, n)) - std::abs(cos_product(q, lambda, n))) < 1e-12);
  }
  CHECK(std::abs(std::abs(cos_product(period, lambda, n)) - 1.0) < 1e-12);
}

TEST_CASE("encoded amplitudes") {
  const Eigen::Index d = 30;
  const double lambda = 0.1;
  const int n = 7;
  // Even input: amplitudes of s and -s agree; odd input: they are opposite up to the gamma signs.
  for (int m : {0, 1, 2, 3}) {
    const EncodedAmplitudes e = encoded_amplitudes(fock(d, m), lambda, n);
    CHECK(std::abs(e.amps.norm() - 1.0) < 1e-12);
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t idx = 0; idx <= all; ++idx) {
      const SignVector s = SignVector::from_index(idx, n);
      const SignVector t = SignVector::from_index(all ^ idx, n);
      CHECK(std::abs(grid_point(s, lambda) + grid_point(t, lambda)) < 1e-12);
      const cplx a = e.amps[static_cast<Eigen::Index>(idx)] * static_cast<double>(gamma_sign(s));
      const cplx b = e.amps[static_cast<Eigen::Index>(all ^ idx)] * static_cast<double>(gamma_sign(t));
      CHECK(std::abs(a - ((m % 2) ? -b : b)) < 1e-12);
    }
  }
  // Riemann sum of |psi|^2 with spacing lambda: raw norm tends to 1.
  double prev = 1.0;
  for (double lam : {0.4, 0.2, 0.1}) {
    const double dev = std::abs(encoded_amplitudes(fock(d, 2), lam, 8).raw_norm - 1.0);
    CHECK(dev <= prev + 1e-15);
    prev = dev;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("brute-force branch expansion") {
  testing::Gen gen(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(2, 5);
    const double lambda = gen.uniform(0.05, 0.5);
    const double q = gen.uniform(-2.0, 2.0);
    const auto branches = exact_position_expansion(q, lambda, n);
    REQUIRE(branches.size() == (std::size_t{1} << n));
    double total = 0.0;
    for (const auto& b : branches) {
      // Branch sits at q - q_s.
      CHECK(std::abs(b.position - (q - grid_point(b.s, lambda))) < 1e-12);
      // c_s = (-1)^(gamma_s + N) prod_k cos(v_k (q - q_s)).
      const double expect = (n % 2 ? -1.0 : 1.0) * gamma_sign(b.s) * cos_product(b.position, lambda, n);
      CHECK(std::abs(b.coefficient - expect) < 1e-12);
      if (std::abs(expect) > 1e-6) CHECK(branch_sign(b, lambda) == ((n % 2 ? -1 : 1) * gamma_sign(b.s)));
      total += b.coefficient * b.coefficient;
    }
    // Each V_k splits the weight into cos^2 + sin^2.
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  // N = 2 written out by hand.
  const double lambda = 0.3;
  const double q = 0.17;
  const double v1 = pi / (4 * lambda);
  const double v2 = pi / (8 * lambda);
  for (const auto& b : exact_position_expansion(q, lambda, 2)) {
    const int s1 = b.s.sign(1);
    const int s2 = b.s.sign(2);
    const double q1 = q - s1 * lambda;
    CHECK(std::abs(b.coefficient - std::cos(pi / 4 + s1 * v1 * q) * std::cos(pi / 4 + s2 * v2 * q1)) < 1e-14);
    CHECK(std::abs(b.position - (q1 + s2 * 2 * lambda)) < 1e-14);
  }
  CHECK_THROWS_AS(exact_position_expansion(0.0, 0.1, 6), InvalidArgument);
}

TEST_CASE("squeezed overlap closed form") {
  const OverlapOptimum opt = squeezed_overlap_optimum();
  CHECK(std::abs(opt.u - 1.12) < 0.01);
  CHECK(std::abs(opt.fidelity - 0.89) < 0.005);
  // Depends on lambda and r only through lambda e^r.
  for (double lambda : {0.05, 0.1, 0.2, 0.3}) {
    const double r = std::log(opt.u / lambda);
    CHECK(std::abs(squeezed_overlap(lambda, r) - opt.fidelity) < 1e-12);
    CHECK(squeezed_overlap(lambda, r + 0.1) < opt.fidelity);
    CHECK(squeezed_overlap(lambda, r - 0.1) < opt.fidelity);
  }
  // Large squeezing: the Gaussian is a narrow spike, overlap ~ (2/sqrt(pi)) u.
  CHECK(std::abs(squeezed_overlap_u(0.01) - 2.0 / std::sqrt(pi) * 0.01) < 1e-12);
  // Anti-squeezed limit: erf(c/u) ~ 2c/(sqrt(pi) u), overlap ~ 8 c^2 / (pi^1.5 u).
  const double c = pi / (2.0 * std::numbers::sqrt2);
  CHECK(squeezed_overlap_u(1e4) == doctest::Approx(8.0 * c * c / (std::pow(pi, 1.5) * 1e4)).epsilon(1e-6));
  CHECK_THROWS_AS(squeezed_overlap_u(0.0), InvalidArgument);
}

TEST_CASE("squeezed overlap by quadrature") {
  for (double lambda : {0.05, 0.1, 0.2, 0.3}) {
    for (double r : {std::log(0.5 / lambda), std::log(1.12 / lambda), std::log(2.0 / lambda)}) {
      CHECK(std::abs(squeezed_overlap_numeric(lambda, r) - squeezed_overlap(lambda, r)) < 1e-6);
    }
  }
}

TEST_CASE("phase-insensitive distance") {
  testing::Gen gen(5);
  const CVector a = gen.state(10, 10);
  CHECK(l2_distance_up_to_phase(a, std::polar(3.0, 1.2) * a) < 1e-14);
  const CVector b = gen.state(10, 10);
  const double dist = l2_distance_up_to_phase(a, b);
  CHECK(dist > 0.0);
  CHECK(dist <= std::sqrt(2.0) + 1e-12);
  CHECK_THROWS_AS(l2_distance_up_to_phase(a, gen.state(9, 9)), DimensionMismatch);
}
