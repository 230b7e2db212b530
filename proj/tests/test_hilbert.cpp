#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "cvqt/errors.hpp"
#include "cvqt/hilbert.hpp"
#include "support.hpp"

using namespace cvqt;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

// Operator norm of the interior (lower 80%) block of A - B.
double interior_diff(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index k = a.rows() * 8 / 10;
  return (a - b).topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

double trapezoid(const std::vector<double>& y, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (i == 0 || i + 1 == y.size() ? 0.5 : 1.0) * y[i];
  return s * h;
}

}  // namespace

TEST_CASE("quadrature matrices") {
  const CMatrix q2 = quadrature_q(2).mat;
  CHECK(std::abs(q2(0, 1) - 1.0 / sqrt2) < 1e-15);
  CHECK(std::abs(q2(1, 0) - 1.0 / sqrt2) < 1e-15);
  CHECK(std::abs(q2(0, 0)) == 0.0);
  CHECK(std::abs(quadrature_q(3).mat(1, 2) - 1.0) < 1e-15);

  const CMatrix p2 = quadrature_p(2).mat;
  CHECK(std::abs(p2(0, 1) - cplx(0, -1.0 / sqrt2)) < 1e-15);
  CHECK(std::abs(p2(1, 0) - cplx(0, 1.0 / sqrt2)) < 1e-15);

  for (Eigen::Index d : {3, 10, 50}) {
    const CMatrix q = quadrature_q(d).mat;
    const CMatrix p = quadrature_p(d).mat;
    CHECK(testing::max_abs(q - q.adjoint()) < 1e-12);
    CHECK(testing::max_abs(p - p.adjoint()) == 0.0);
    const CMatrix comm = q * p - p * q;
    CHECK(testing::max_abs(comm.topLeftCorner(d - 1, d - 1) - kI * CMatrix::Identity(d - 1, d - 1)) < 1e-12);
    CHECK(std::abs((p * p)(0, 0) - 0.5) < 1e-12);
  }
  CHECK_THROWS_AS(quadrature_q(1), InvalidDimension);
  CHECK_THROWS_AS(quadrature_p(0), InvalidDimension);
}

TEST_CASE("expm agrees with an independent matrix exponential") {
  testing::Gen gen(11);
  for (double scale : {1e-3, 0.1, 0.8, 1.9, 4.0, 30.0}) {
    const CMatrix a = gen.matrix(12, 12) * (scale / 12.0);
    const CMatrix ours = expm(a);
    const CMatrix ref = a.exp();
    CHECK(testing::max_abs(ours - ref) < 1e-10 * std::max(1.0, testing::max_abs(ref)));
  }
  // Anti-Hermitian generator gives a unitary.
  const CMatrix h = gen.matrix(20, 20);
  const CMatrix u = expm(kI * (h + h.adjoint()));
  CHECK(testing::max_abs(u * u.adjoint() - CMatrix::Identity(20, 20)) < 1e-10);
}

TEST_CASE("displacement") {
  const Eigen::Index d = 100;
  CHECK(testing::max_abs(displacement(d, 0.0).mat - CMatrix::Identity(d, d)) < 1e-14);
  for (cplx beta : {cplx(1.5, 0), cplx(0.3, -1.1), cplx(-2.0, 0.0), cplx(1.2, 1.4)}) {
    const CMatrix dp = displacement(d, beta).mat;
    const CMatrix dm = displacement(d, -beta).mat;
    CHECK(interior_diff(dp * dm, CMatrix::Identity(d, d)) < 1e-8);
    CHECK(std::abs(dp(0, 0) - std::exp(-std::norm(beta) / 2.0)) < 1e-8);
  }
  Diagnostics diag;
  displacement(16, 2.0, &diag);
  CHECK(diag.has("displacement-range"));
  Diagnostics quiet;
  displacement(16, 0.5, &quiet);
  CHECK(quiet.empty());
}

TEST_CASE("displacement composition carries the expected phase") {
  testing::Gen gen(5);
  const Eigen::Index d = 150;
  for (int trial = 0; trial < 6; ++trial) {
    const cplx b1 = std::polar(gen.uniform(0, 2), gen.uniform(0, 2 * pi));
    const cplx b2 = std::polar(gen.uniform(0, 2), gen.uniform(0, 2 * pi));
    const CMatrix lhs = displacement(d, b1).mat * displacement(d, b2).mat;
    const CMatrix rhs = std::polar(1.0, std::imag(b1 * std::conj(b2))) * displacement(d, b1 + b2).mat;
    // Low Fock inputs stay far from the truncation edge.
    CHECK((lhs - rhs).topLeftCorner(60, 20).operatorNorm() < 1e-6);
  }
}

TEST_CASE("spectral quadrature exponentials match Pade displacements") {
  const Eigen::Index d = 120;
  const auto spec = QuadratureSpectrum::get(d);
  CHECK(spec.get() == QuadratureSpectrum::get(d).get());
  for (double t : {0.4, -1.3, 2.2}) {
    // exp(i t q) = D(i t / sqrt2), exp(i t p) = D(-t / sqrt2)
    const CMatrix eq = spec->exp_iq(t);
    const CMatrix ep = spec->exp_ip(t);
    CHECK(testing::max_abs(eq * eq.adjoint() - CMatrix::Identity(d, d)) < 1e-12);
    CHECK(testing::max_abs(ep * ep.adjoint() - CMatrix::Identity(d, d)) < 1e-12);
    CHECK(interior_diff(eq, displacement(d, cplx(0, t / sqrt2)).mat) < 1e-8);
    CHECK(interior_diff(ep, displacement(d, -t / sqrt2).mat) < 1e-8);
    // exp(i t p) moves <q> by -t on vacuum.
    const CVector vac = fock(d, 0).amps();
    const CVector moved = ep * vac;
    CHECK(std::abs(std::real(moved.dot(quadrature_q(d).mat * moved)) + t) < 1e-10);
  }
}

TEST_CASE("standard states") {
  const CvState f0 = fock(10, 0);
  CHECK(f0[0] == cplx(1.0));
  CHECK(f0.amps().tail(9).norm() == 0.0);
  CHECK_THROWS_AS(fock(10, 10), InvalidArgument);

  CHECK((squeezed_vacuum(40, 0.0).amps() - fock(40, 0).amps()).norm() < 1e-15);
  // Squeezing narrows q: analytic wavefunction (e^r/sqrt(pi))^{1/2} exp(-(q e^r)^2/2).
  const double r = 0.7;
  const CvState sq = squeezed_vacuum(200, r);
  for (double q : {0.0, 0.2, -0.5, 1.0}) {
    const double expect = std::sqrt(std::sqrt(std::exp(2 * r) / pi)) * std::exp(-0.5 * q * q * std::exp(2 * r));
    const std::vector<double> g{q};
    CHECK(std::abs(wavefunction(sq, g)[0] - expect) < 1e-10);
  }

  const cplx alpha(1.1, -0.4);
  const CvState coh = coherent(100, alpha);
  const CVector via_d = displacement(100, alpha).mat * fock(100, 0).amps();
  CHECK((coh.amps() - via_d).norm() < 1e-10);

  const CvState c = cat(150, 2.0);
  CHECK(std::abs(expectation(c, quadrature_q(150))) < 1e-10);
  const auto grid = linspace(0.0, 5.0, 501);
  const CVector psi = wavefunction(c, grid);
  Eigen::Index peak = 0;
  psi.cwiseAbs2().maxCoeff(&peak);
  CHECK(std::abs(grid[static_cast<std::size_t>(peak)] - 2.0 * sqrt2) < 0.05);

  try {
    cat(20, 4.0);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.leakage() > 1e-6);
    CHECK(std::abs(e.leakage() - coherent_tail(20, 4.0)) < 1e-15);
  }
  CHECK_THROWS_AS(squeezed_vacuum(50, 2.5), TruncationError);
  CHECK(edge_weight(fock(100, 95).amps()) == 1.0);
  CHECK(edge_weight(fock(100, 5).amps()) == 0.0);
}

TEST_CASE("coherent and squeezed tails against direct sums") {
  const double mean = 9.0;
  double tail = 0.0;
  double term = std::exp(-mean);
  for (int n = 0; n < 400; ++n) {
    if (n >= 30) tail += term;
    term *= mean / (n + 1);
  }
  CHECK(std::abs(coherent_tail(30, 3.0) - tail) < 1e-14);
  const CvState big = squeezed_vacuum(400, 1.0);
  CHECK(std::abs(squeezed_tail(60, 1.0) - big.amps().tail(340).squaredNorm()) < 1e-12);
}

TEST_CASE("hermite functions against the standard library") {
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    const RVector h = hermite_functions(20, x);
    for (unsigned n = 0; n <= 20; ++n) {
      const double norm = std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(pi));
      const double ref = std::hermite(n, x) * std::exp(-x * x / 2) / norm;
      CHECK(std::abs(h[n] - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
  // Far outside the classically allowed region the recurrence neither over- nor underflows early.
  const RVector far = hermite_functions(400, 35.0);
  CHECK(std::isfinite(far[400]));
  CHECK(far[400] > 0.0);
}

TEST_CASE("wavefunctions") {
  const std::vector<double> zero{0.0};
  CHECK(std::abs(wavefunction(fock(10, 0), zero)[0] - std::pow(pi, -0.25)) < 1e-15);
  CHECK(std::abs(wavefunction(fock(10, 1), zero)[0]) < 1e-15);
  const auto grid = linspace(-12.0, 12.0, 2401);
  for (const CvState& s : {fock(60, 5), cat(100, 1.5), squeezed_vacuum(100, 0.5)}) {
    const CVector psi = wavefunction(s, grid);
    std::vector<double> dens(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) dens[i] = std::norm(psi[static_cast<Eigen::Index>(i)]);
    CHECK(std::abs(trapezoid(dens, 0.01) - 1.0) < 1e-6);
  }
}

TEST_CASE("wigner function values") {
  const std::vector<double> zero{0.0};
  CHECK(std::abs(wigner(fock(30, 0), zero, zero)(0, 0) - 1.0 / pi) < 1e-8);
  CHECK(std::abs(wigner(fock(30, 1), zero, zero)(0, 0) + 1.0 / pi) < 1e-6);

  // Fock states: W = (-1)^n / pi * L_n(2 r^2) e^{-r^2}.
  const std::vector<double> qs{0.3, -1.2, 2.0};
  const std::vector<double> ps{0.0, 0.8, -2.4};
  for (unsigned n : {2u, 3u, 7u, 20u}) {
    const RMatrix w = wigner(fock(40, n), qs, ps);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const double r2 = qs[i] * qs[i] + ps[j] * ps[j];
        const double ref = (n % 2 ? -1.0 : 1.0) / pi * std::laguerre(n, 2 * r2) * std::exp(-r2);
        CHECK(std::abs(w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref) < 1e-12);
      }
    }
  }

  // Coherent state: Gaussian centred at (sqrt2 Re a, sqrt2 Im a).
  const cplx a(0.9, -0.6);
  const RMatrix wc = wigner(coherent(80, a), qs, ps);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const double dq = qs[i] - sqrt2 * a.real();
      const double dp = ps[j] - sqrt2 * a.imag();
      CHECK(std::abs(wc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - std::exp(-dq * dq - dp * dp) / pi) <
            1e-8);
    }
  }

  // Off-diagonal term |1><0| + |0><1| of a superposition, against its closed form.
  CVector amps = CVector::Zero(10);
  amps[0] = 1.0;
  amps[1] = cplx(0.0, 1.0);
  const CvState sup(amps);
  const RMatrix ws = wigner(sup, qs, ps);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const double q = qs[i];
      const double p = ps[j];
      const double r2 = q * q + p * p;
      const double w00 = std::exp(-r2) / pi;
      const double w11 = -(1.0 - 2.0 * r2) * std::exp(-r2) / pi;
      // rho_10 = i/2: contribution 2 Re(rho_10 * sqrt2 (q - i p) e^{-r^2} / pi)
      const double cross = 2.0 * std::real(cplx(0.0, 0.5) * sqrt2 * cplx(q, -p)) * std::exp(-r2) / pi;
      const double ref = 0.5 * w00 + 0.5 * w11 + cross;
      CHECK(std::abs(ws(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref) < 1e-12);
    }
  }

  const auto grid = linspace(-5.0, 5.0, 201);
  CHECK(wigner(cat(150, 2.0), grid, std::vector<double>{0.0, 0.3, 0.6}).minCoeff() < 0.0);
}

TEST_CASE("wigner integrates to one for random densities") {
  testing::Gen gen(3);
  const auto grid = linspace(-6.0, 6.0, 121);
  const double h = grid[1] - grid[0];
  for (int trial = 0; trial < 3; ++trial) {
    const CMatrix x = gen.matrix(8, 3);
    CMatrix rho = CMatrix::Zero(20, 20);
    rho.topLeftCorner(8, 8) = x * x.adjoint();
    rho /= rho.trace().real();
    const RMatrix w = wigner(CvDensity(rho), grid, grid);
    CHECK(std::abs(w.sum() * h * h - 1.0) < 1e-4);
  }
}

TEST_CASE("density validation and fidelities") {
  CMatrix bad = CMatrix::Identity(3, 3) / 3.0;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(CvDensity{bad}, InvalidArgument);
  CHECK_THROWS_AS(CvDensity{CMatrix(CMatrix::Identity(3, 3))}, InvalidArgument);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK_THROWS_AS(CvDensity{neg}, InvalidArgument);

  testing::Gen gen(9);
  const CvState x(gen.state(30, 30));
  CHECK(std::abs(fidelity_pure(x, x) - 1.0) < 1e-12);
  CHECK(fidelity_pure(fock(30, 2), fock(30, 5)) == 0.0);
  CHECK(std::abs(fidelity_mixed(x, CvDensity::pure(x)) - 1.0) < 1e-12);
  CHECK_THROWS_AS(fidelity_pure(fock(10, 0), fock(11, 0)), DimensionMismatch);
  CHECK(std::abs(CvState(gen.state(30, 10) * 3.0).amps().norm() - 1.0) < 1e-10);
}
