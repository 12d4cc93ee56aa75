#pragma once

#include <vector>

#include "qcs/frames.hpp"
#include "qcs/linalg.hpp"
#include "qcs/states.hpp"

namespace qcs {

/// Hermite oscillator eigenfunctions psi_0..psi_nmax at x (normalized
/// three-term recurrence; vacuum is pi^{-1/4} e^{-x^2/2}).
RVec hermite_functions(int n_max, double x);

/// <k|D(alpha)|l> for D(alpha) = exp(alpha a^dag - conj(alpha) a), via the
/// finite sum with factorial ratios accumulated in log space.
cxd displacement_matrix_element(int k, int l, cxd alpha);

/// Displacement operator truncated to the span of |0..N>.
struct TruncatedDisplacement {
  int cutoff = 0;  // N; matrix is (N+1) x (N+1)
  cxd alpha;
  Mat matrix;
  bool scaled = false;   // true when the sqrt(2) sigma e^{|alpha|^2/(4 sigma^2)} factor is applied
  double sigma = 0.0;
};

TruncatedDisplacement truncated_displacement(int n_cut, cxd alpha, bool scaled = false,
                                             double sigma = 0.0);

/// Width of the Gaussian displacement-frame law: sqrt(2N log(1+4N)).
double displacement_frame_sigma(int n_cut);

/// Gaussian-law displacement frame on dim n = N+1 (w = scaled D/(N+1),
/// Hermitized by a fair coin over the pair (w+w^dag)/sqrt2, i(w-w^dag)/sqrt2).
FrameDescriptor displacement_frame(int n_cut);

/// Uniform-law variant: |alpha| ~ U[0, alpha_max], phase uniform, unscaled
/// displacement, Hermitized then normalized to unit Frobenius norm.
FrameDescriptor displacement_uniform_frame(int n_cut, double alpha_max);

/// W_{|l><k|}(x, p): Wigner function of |l><k| in the (x,p) convention whose
/// vacuum value is pi^{-1} e^{-x^2-p^2}; closed form from the generating
/// function expansion, log-space factorials.
cxd wigner_matrix_element(int k, int l, double x, double p);

/// Matrix of Pi_N sqrt(2 pi)(2/pi) D(alpha)(-1)^{n} D^dag(alpha) Pi_N, scaled
/// by exp(log_scale); exact via the Wigner closed form.
Mat truncated_parity_observable(int n_cut, cxd alpha, double log_scale = 0.0);

/// Pointwise-Wigner frame: sigma = sqrt(n) log n, alpha ~ P_G, observable
/// n^{-1} P_G(alpha)^{-1/2} Pi_N w_alpha Pi_N. Resolves to ~2x identity with
/// the stated prefactor; the constant is reported, not rescaled away.
FrameDescriptor pointwise_wigner_frame(int n_cut);

/// Quadrature distribution P_theta(x) = sum_kl rho_kl e^{i(l-k)theta}
/// psi_k(x) psi_l(x) on the grid.
RVec quadrature_distribution(const Mat& rho, double theta, const RVec& x_grid);
RVec quadrature_distribution(const DensityMatrix& rho, double theta, const RVec& x_grid);

/// i.i.d. homodyne samples at angle theta via inverse-CDF on a dense grid.
std::vector<double> homodyne_sample(const Mat& rho, double theta, int shots, std::uint64_t seed);

struct HomodyneSetting {
  double theta = 0.0;
  RVec zeta_grid;
};

struct CharacteristicSlice {
  HomodyneSetting setting;
  Vec values;     // complex values on the zeta grid
  long shots = 0; // 0 marks an exact slice
};

/// Displacement argument realizing the slice identification
/// P~_theta(zeta) = Tr(D(alpha) rho): alpha = -i zeta e^{i theta} / sqrt(2)
/// (the sign/scale making the Fourier cross-check with
/// quadrature_distribution exact in this module's quadrature convention).
cxd slice_alpha(double zeta, double theta);

/// Exact characteristic-function slice of a truncated state.
CharacteristicSlice characteristic_slice_exact(const Mat& rho, const HomodyneSetting& setting);

/// Empirical slice from homodyne samples: value(zeta) = mean of e^{-i zeta x}.
CharacteristicSlice characteristic_slice_estimate(const std::vector<double>& xs,
                                                  const HomodyneSetting& setting);

/// Detection-loss compensation: divide by the envelope e^{-(1-eta) zeta^2 / (4 eta)}.
/// Rejects eta <= eta_min (default floor 0.5).
CharacteristicSlice loss_compensation(const CharacteristicSlice& slice, double eta,
                                      double eta_min = 0.5);

/// Generalized homodyne frame: settings are per-mode angles theta ~ U[0, pi);
/// one setting contributes the complex slice values over the joint zeta grid,
/// encoded as Hermitian Re/Im observables per +-zeta orbit.
struct HomodyneFrame {
  std::vector<int> mode_dims;  // per-mode dimension N+1
  RVec zeta_grid;              // per-mode grid, symmetric about 0, strictly increasing

  int dim() const {
    int d = 1;
    for (int m : mode_dims) d *= m;
    return d;
  }
  int modes() const { return static_cast<int>(mode_dims.size()); }
};

/// Default grid: `points` uniform values on [-2 sqrt(2n), 2 sqrt(2n)].
RVec default_zeta_grid(int dim, int points = 64);

HomodyneFrame homodyne_frame(int n_cut, RVec zeta_grid);
HomodyneFrame multimode_homodyne_frame(std::vector<int> mode_dims, RVec zeta_grid);

/// Observable list of one measurement setting (one angle per mode).
std::vector<HermitianObservable> homodyne_setting_observables(const HomodyneFrame& frame,
                                                              const std::vector<double>& thetas);

/// Discretized characteristic-slice superoperator Q_theta on the grid with
/// trapezoid and polar-Jacobian |zeta|/2 weights, normalized so the resolution
/// (1/pi) int Q_theta dtheta = identity / n^2 holds; complex n^2 x n^2 matrix
/// in the vec convention. Single-mode frames only.
Mat q_theta_superop(const HomodyneFrame& frame, double theta);

}  // namespace qcs
