#include "qcs/states.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace qcs {

DensityMatrix::DensityMatrix(Mat rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
    throw std::invalid_argument("DensityMatrix: not square");
  if (rho_.rows() > kMaxDim) throw std::invalid_argument("DensityMatrix: dim beyond cap");
  if (hermiticity_error(rho_) > 1e-12)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  const auto es = eigh(rho_);
  if (es.values.minCoeff() < -1e-10)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  if (std::abs(rho_.trace().real() - 1.0) > 1e-10 || std::abs(rho_.trace().imag()) > 1e-12)
    throw std::invalid_argument("DensityMatrix: trace != 1");
}

int DensityMatrix::rank(double rank_tol) const {
  const auto es = eigh(rho_);
  const double cut = rank_tol * es.values.cwiseAbs().maxCoeff();
  int r = 0;
  for (int i = 0; i < es.values.size(); ++i)
    if (std::abs(es.values[i]) > cut) ++r;
  return r;
}

DensityMatrix random_rank_r_state(int n, int r, std::uint64_t seed) {
  if (n < 1 || r < 1 || r > n) throw std::invalid_argument("random_rank_r_state: bad n or r");
  Rng rng(seed);
  Mat g = gaussian_matrix(n, r, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitize(rho));
}

Mat sign_matrix(const Mat& h, double rank_tol) {
  if (hermiticity_error(h) > 1e-10) throw std::invalid_argument("sign_matrix: not Hermitian");
  const auto es = eigh(h);
  const double cut = rank_tol * std::max(es.values.cwiseAbs().maxCoeff(), 0.0);
  RVec s(es.values.size());
  for (int i = 0; i < s.size(); ++i) {
    const double v = es.values[i];
    s[i] = (std::abs(v) <= cut) ? 0.0 : (v > 0 ? 1.0 : -1.0);
  }
  return es.vectors * s.asDiagonal() * es.vectors.adjoint();
}

TangentProjector::TangentProjector(Mat range_basis, int ambient_dim)
    : basis_(std::move(range_basis)), n_(ambient_dim) {
  if (basis_.rows() != n_ || basis_.cols() < 1 || basis_.cols() > n_)
    throw std::invalid_argument("TangentProjector: bad basis shape");
}

Mat TangentProjector::apply(const Mat& sigma) const {
  // sigma - (1-Pi) sigma (1-Pi), organized to avoid forming 1-Pi.
  Mat bs = basis_.adjoint() * sigma;            // q x n
  Mat pi_s = basis_ * bs;                       // Pi sigma
  Mat s_pi = (sigma * basis_) * basis_.adjoint();
  Mat pi_s_pi = basis_ * (bs * basis_) * basis_.adjoint();
  return pi_s + s_pi - pi_s_pi;
}

std::vector<Mat> TangentProjector::hermitian_basis() const {
  const int q = rank();
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(tangent_dim()));
  // Orthonormal basis of the range complement from the projector's spectrum.
  Mat proj = Mat::Identity(n_, n_) - basis_ * basis_.adjoint();
  const auto es = eigh(proj);
  Mat bperp(n_, n_ - q);
  int k = 0;
  for (int i = 0; i < n_; ++i)
    if (es.values[i] > 0.5) bperp.col(k++) = es.vectors.col(i);
  if (k != n_ - q) throw std::runtime_error("TangentProjector: complement extraction failed");

  const double s = 1.0 / std::sqrt(2.0);
  auto push = [&out](Mat m) { out.push_back(std::move(m)); };
  // Range-range block.
  for (int i = 0; i < q; ++i) push(basis_.col(i) * basis_.col(i).adjoint());
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      Mat e = basis_.col(i) * basis_.col(j).adjoint();
      push(s * (e + e.adjoint()));
      push(cxd(0, 1) * s * (e - e.adjoint()));
    }
  // Range-complement blocks.
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < n_ - q; ++j) {
      Mat e = basis_.col(i) * bperp.col(j).adjoint();
      push(s * (e + e.adjoint()));
      push(cxd(0, 1) * s * (e - e.adjoint()));
    }
  return out;
}

TangentProjector tangent_projector(const Mat& h, double rank_tol) {
  const auto es = eigh(h);
  const double cut = rank_tol * es.values.cwiseAbs().maxCoeff();
  const int n = static_cast<int>(h.rows());
  int q = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(es.values[i]) > cut) ++q;
  if (q == 0) throw std::invalid_argument("tangent_projector: zero matrix");
  Mat basis(n, q);
  int k = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(es.values[i]) > cut) basis.col(k++) = es.vectors.col(i);
  return TangentProjector(std::move(basis), n);
}

SpectralTruncation truncate_to_rank(const Mat& h, int q) {
  const int n = static_cast<int>(h.rows());
  if (q < 1 || q > n) throw std::invalid_argument("truncate_to_rank: bad q");
  const auto es = eigh(h);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Stable descending sort by |eigenvalue|.
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(es.values[a]) > std::abs(es.values[b]);
  });
  SpectralTruncation out;
  out.q = q;
  out.matrix = Mat::Zero(n, n);
  double discarded = 0.0;
  for (int k = 0; k < n; ++k) {
    const int i = idx[k];
    if (k < q)
      out.matrix += es.values[i] * (es.vectors.col(i) * es.vectors.col(i).adjoint());
    else
      discarded += es.values[i] * es.values[i];
  }
  out.frobenius_error = std::sqrt(discarded);
  return out;
}

double fock_truncation_error(double n_mean, int n_cut) {
  if (n_mean < 0) throw std::invalid_argument("fock_truncation_error: negative N_mean");
  if (n_cut + 1 < n_mean)
    throw std::invalid_argument("fock_truncation_error: requires N+1 >= N_mean");
  return 3.0 * std::sqrt(n_mean / (n_cut + 1));
}

}  // namespace qcs
