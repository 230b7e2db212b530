#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cvqt {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

/// exp(A) by scaling and squaring with a [m/m] Padé approximant, m chosen
/// from {3,5,7,9,13} by the 1-norm of A (Higham 2005 thresholds).
CMatrix expm(const CMatrix& a);

/// Y <- A * Y for real A and complex Y, done as two real products.
void apply_real(const RMatrix& a, CMatrix& y);
/// Y <- A^T * Y for real A and complex Y.
void apply_real_transposed(const RMatrix& a, CMatrix& y);

}  // namespace cvqt
