#pragma once

#include "qcs/linalg.hpp"

namespace qcs {

/// Validated density matrix: Hermitian, PSD, unit trace.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument unless hermiticity error <= 1e-12,
  /// min eigenvalue >= -1e-10 and |trace - 1| <= 1e-10.
  explicit DensityMatrix(Mat rho);

  const Mat& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  /// Numerical rank at the given relative eigenvalue tolerance.
  int rank(double rank_tol = 1e-8) const;

 private:
  Mat rho_;
};

/// rho = GG^dag / tr(GG^dag) with G an n x r complex Gaussian matrix.
DensityMatrix random_rank_r_state(int n, int r, std::uint64_t seed);

/// Matrix sign function with eigenvalues inside rank_tol*max|eig| zeroed.
Mat sign_matrix(const Mat& h, double rank_tol = 1e-8);

/// Projector onto the tangent space T of the low-rank manifold at a
/// Hermitian reference point: sigma |-> sigma - (1-Pi) sigma (1-Pi),
/// Pi the orthogonal projector onto the reference's range.
class TangentProjector {
 public:
  TangentProjector(Mat range_basis, int ambient_dim);

  Mat apply(const Mat& sigma) const;
  Mat apply_complement(const Mat& sigma) const { return sigma - apply(sigma); }

  int rank() const { return static_cast<int>(basis_.cols()); }
  int ambient_dim() const { return n_; }
  /// Real dimension of T: 2nq - q^2.
  int tangent_dim() const { return 2 * n_ * rank() - rank() * rank(); }

  const Mat& range_basis() const { return basis_; }
  /// Orthonormal Hermitian basis of T (each element unit Frobenius norm).
  std::vector<Mat> hermitian_basis() const;

 private:
  Mat basis_;  // n x q, orthonormal columns
  int n_;
};

TangentProjector tangent_projector(const Mat& h, double rank_tol = 1e-8);

/// Best rank-q spectral truncation of a Hermitian matrix.
struct SpectralTruncation {
  Mat matrix;              // rank <= q
  int q = 0;
  double frobenius_error = 0.0;  // 2-norm of the discarded spectral part
};

SpectralTruncation truncate_to_rank(const Mat& h, int q);

/// Trace-norm error bound 3*sqrt(N_mean/(N+1)) for truncating a state of mean
/// photon number N_mean at Fock level N. Requires N+1 >= N_mean.
double fock_truncation_error(double n_mean, int n_cut);

}  // namespace qcs
