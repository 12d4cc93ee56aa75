#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace qcs {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr int kMaxDim = 64;  // desk-scale cap on Hilbert space dimension

inline double hermiticity_error(const Mat& m) {
  return (m - m.adjoint()).norm();
}

inline Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

/// Eigendecomposition of a Hermitian matrix (ascending eigenvalues).
struct Eigh {
  RVec values;
  Mat vectors;
};

inline Eigh eigh(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double trace_norm(const Mat& h) {
  return eigh(hermitize(h)).values.cwiseAbs().sum();
}

inline double operator_norm(const Mat& h) {
  return eigh(hermitize(h)).values.cwiseAbs().maxCoeff();
}

inline double frobenius_norm(const Mat& m) { return m.norm(); }

// Isometric vectorization of Hermitian matrices into R^{n^2}:
// diagonal entries, then (sqrt2*Re, sqrt2*Im) of the upper triangle.
inline RVec hvec(const Mat& h) {
  const int n = static_cast<int>(h.rows());
  RVec v(n * n);
  int k = 0;
  for (int i = 0; i < n; ++i) v[k++] = h(i, i).real();
  const double s = std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      v[k++] = s * h(i, j).real();
      v[k++] = s * h(i, j).imag();
    }
  return v;
}

inline Mat unhvec(const RVec& v) {
  const int n = static_cast<int>(std::lround(std::sqrt(double(v.size()))));
  if (n * n != v.size()) throw std::invalid_argument("unhvec: size not a square");
  Mat h(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) h(i, i) = v[k++];
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double re = v[k++] * s;
      const double im = v[k++] * s;
      h(i, j) = cxd(re, im);
      h(j, i) = cxd(re, -im);
    }
  return h;
}

/// splitmix64 step, used to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

inline double gaussian(Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(rng);
}

inline cxd complex_gaussian(Rng& rng) {
  const double re = gaussian(rng), im = gaussian(rng);
  return cxd(re, im) / std::sqrt(2.0);
}

inline Mat gaussian_matrix(int rows, int cols, Rng& rng) {
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = complex_gaussian(rng);
  return g;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Haar-random unitary via QR of a Ginibre matrix with phase-fixed R diagonal.
inline Mat random_unitary(int n, Rng& rng) {
  Mat g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    cxd d = r(j, j);
    q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : cxd(1, 0);
  }
  return q;
}

}  // namespace qcs
