#include <doctest.h>

#include <cmath>

#include "cvqt/errors.hpp"
#include "cvqt/noise.hpp"
#include "cvqt/protocol.hpp"
#include "support.hpp"

using namespace cvqt;

namespace {

CMatrix random_density(testing::Gen& gen, Eigen::Index dim, int rank) {
  const CMatrix a = gen.matrix(dim, rank);
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

BranchEnsemble ensemble_of(testing::Gen& gen, int n, int count) {
  std::vector<Branch> branches;
  double total = 0.0;
  for (int j = 0; j < count; ++j) {
    const double w = gen.uniform(0.1, 1.0);
    total += w;
    branches.push_back({w, gen.state(Eigen::Index{1} << n, Eigen::Index{1} << n)});
  }
  for (auto& b : branches) b.weight /= total;
  return BranchEnsemble(n, std::move(branches));
}

}  // namespace

TEST_CASE("channel constructors") {
  const KrausChannel deph = KrausChannel::dephasing(0.1);
  REQUIRE(deph.ops().size() == 2);
  CHECK(deph.completeness_error() < 1e-15);
  CHECK(deph.label() == "dephasing(0.1)");
  Matrix2c plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  const Matrix2c out = deph.apply(plus);
  // Coherence shrinks by 1 - 2p.
  CHECK(std::abs(out(0, 1) - 0.4) < 1e-15);
  CHECK(std::abs(out(0, 0) - 0.5) < 1e-15);

  const KrausChannel ad = KrausChannel::amplitude_damping(0.3);
  CHECK(ad.completeness_error() < 1e-15);
  Matrix2c one = Matrix2c::Zero();
  one(1, 1) = 1.0;
  const Matrix2c decayed = ad.apply(one);
  CHECK(std::abs(decayed(0, 0) - 0.3) < 1e-15);
  CHECK(std::abs(decayed(1, 1) - 0.7) < 1e-15);
  const Matrix2c coh = ad.apply(plus);
  CHECK(std::abs(coh(0, 1) - 0.5 * std::sqrt(0.7)) < 1e-15);

  CHECK(KrausChannel::identity().ops().size() == 1);
  CHECK(KrausChannel::identity().apply(plus).isApprox(plus));
  CHECK_THROWS_AS(KrausChannel::dephasing(-0.1), InvalidArgument);
  CHECK_THROWS_AS(KrausChannel::dephasing(1.5), InvalidArgument);
  CHECK_THROWS_AS(KrausChannel::amplitude_damping(1.1), InvalidArgument);
}

TEST_CASE("branch channel equals the superoperator") {
  testing::Gen gen(17);
  for (int n = 1; n <= 3; ++n) {
    for (const KrausChannel& ch : {KrausChannel::dephasing(gen.uniform(0.0, 0.5)),
                                   KrausChannel::amplitude_damping(gen.uniform(0.0, 1.0))}) {
      const BranchEnsemble e = ensemble_of(gen, n, 3);
      for (int k = 1; k <= n; ++k) {
        const CMatrix direct = apply_channel_to_density(e.density(), ch, k);
        CHECK(testing::max_abs(apply_to_register(e, ch, k).density() - direct) < 1e-12);
      }
      CMatrix all = e.density();
      for (int k = 1; k <= n; ++k) all = apply_channel_to_density(all, ch, k);
      const BranchEnsemble out = apply_to_register(e, ch);
      CHECK(testing::max_abs(out.density() - all) < 1e-12);
      CHECK(std::abs(out.total_weight() - 1.0) < 1e-12);
      for (const auto& b : out.branches()) CHECK(std::abs(b.amps.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("trace preservation on random densities") {
  testing::Gen gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = gen.integer(1, 4);
    const CMatrix rho = random_density(gen, Eigen::Index{1} << n, 2);
    const KrausChannel ch = trial % 2 ? KrausChannel::dephasing(gen.uniform()) : KrausChannel::amplitude_damping(gen.uniform());
    const CMatrix out = apply_channel_to_density(rho, ch, gen.integer(1, n));
    CHECK(std::abs(out.trace() - 1.0) < 1e-12);
    CHECK(testing::max_abs(out - out.adjoint()) < 1e-13);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(out);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("branch counts") {
  const int n = 6;
  CVector amps = CVector::Constant(64, 1.0 / 8.0);
  const BranchEnsemble pure = BranchEnsemble::pure(amps);
  CHECK(apply_to_register(pure, KrausChannel::dephasing(0.05)).size() == 64);
  // No splitting without noise.
  CHECK(apply_to_register(pure, KrausChannel::dephasing(0.0)).size() == 1);
  // The decay branch of |0> has zero weight and is pruned.
  CVector ground = CVector::Zero(64);
  ground[0] = 1.0;
  CHECK(apply_to_register(BranchEnsemble::pure(ground), KrausChannel::amplitude_damping(0.2)).size() == 1);
  CHECK_THROWS_AS(apply_to_register(pure, KrausChannel::dephasing(0.1), n + 1), InvalidArgument);
}

TEST_CASE("spectral compression keeps the density") {
  testing::Gen gen(9);
  const BranchEnsemble e = ensemble_of(gen, 2, 12);
  const BranchEnsemble c = e.compressed(4);
  CHECK(c.size() <= 4);
  CHECK(testing::max_abs(c.density() - e.density()) < 1e-12);
  for (std::size_t j = 1; j < c.size(); ++j) CHECK(c.branches()[j - 1].weight >= c.branches()[j].weight);
  CHECK(e.compressed(100).size() == 12);
}

TEST_CASE("recovered fidelity decreases with noise") {
  const Eigen::Index d = 100;
  const ProtocolParams p{0.15, 4, d};
  const CvState in = fock(d, 1);
  const double clean = recovered_fidelity(in, p);
  for (bool dephase : {true, false}) {
    double prev = clean;
    for (double x : {0.0, 0.02, 0.05, 0.1, 0.2}) {
      const KrausChannel ch = dephase ? KrausChannel::dephasing(x) : KrausChannel::amplitude_damping(x);
      const double f = recovered_fidelity(in, p, &ch);
      if (x == 0.0) CHECK(std::abs(f - clean) < 1e-12);
      CHECK(f <= prev + 1e-12);
      prev = f;
    }
    CHECK(prev < clean);
  }
}
