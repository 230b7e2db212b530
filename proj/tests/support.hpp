#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "cvqt/hilbert.hpp"

namespace testing {

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  cvqt::cplx gaussian_c() {
    std::normal_distribution<double> n;
    return {n(rng_), n(rng_)};
  }
  // Random normalized vector over the first `support` levels of a d-level space.
  cvqt::CVector state(Eigen::Index d, Eigen::Index support) {
    cvqt::CVector v = cvqt::CVector::Zero(d);
    for (Eigen::Index n = 0; n < support; ++n) v[n] = gaussian_c();
    return v / v.norm();
  }
  cvqt::CMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
    cvqt::CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian_c();
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

inline double max_abs(const cvqt::CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
