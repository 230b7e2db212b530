#include <array>
#include <cmath>

#include "cvqt/linalg.hpp"

namespace cvqt {
namespace {

// Backward-error thresholds for double precision.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};

// U = A * sum_{j odd} b_j A^{j-1}, V = sum_{j even} b_j A^j; N is even.
template <std::size_t N>
void pade_low(const CMatrix& a, const std::array<double, N>& b, CMatrix& u, CMatrix& v) {
  const Eigen::Index n = a.rows();
  const CMatrix a2 = a * a;
  CMatrix odd = b[N - 1] * CMatrix::Identity(n, n);
  CMatrix even = b[N - 2] * CMatrix::Identity(n, n);
  for (int j = static_cast<int>(N) - 3; j >= 1; j -= 2) {
    odd = (a2 * odd).eval();
    odd.diagonal().array() += b[j];
    even = (a2 * even).eval();
    even.diagonal().array() += b[j - 1];
  }
  u.noalias() = a * odd;
  v = even;
}

void pade13(const CMatrix& a, CMatrix& u, CMatrix& v) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const Eigen::Index n = a.rows();
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  CMatrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  CMatrix uinner = a6 * tmp;
  uinner += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u.noalias() = a * uinner;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * tmp;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  CMatrix u(n, n);
  CMatrix v(n, n);
  int squarings = 0;
  if (norm1 <= kTheta[0]) {
    pade_low<4>(a, {120.0, 60.0, 12.0, 1.0}, u, v);
  } else if (norm1 <= kTheta[1]) {
    pade_low<6>(a, {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}, u, v);
  } else if (norm1 <= kTheta[2]) {
    pade_low<8>(a, {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0},
                u, v);
  } else if (norm1 <= kTheta[3]) {
    pade_low<10>(a,
                 {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                  2162160.0, 110880.0, 3960.0, 90.0, 1.0},
                 u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta[4]))));
    const CMatrix scaled = a * std::ldexp(1.0, -squarings);
    pade13(scaled, u, v);
  }
  CMatrix result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

void apply_real(const RMatrix& a, CMatrix& y) {
  const RMatrix re = a * y.real();
  const RMatrix im = a * y.imag();
  y.real() = re;
  y.imag() = im;
}

void apply_real_transposed(const RMatrix& a, CMatrix& y) {
  const RMatrix re = a.transpose() * y.real();
  const RMatrix im = a.transpose() * y.imag();
  y.real() = re;
  y.imag() = im;
}

}  // namespace cvqt
