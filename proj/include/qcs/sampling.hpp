#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qcs/cv.hpp"
#include "qcs/frames.hpp"
#include "qcs/states.hpp"

namespace qcs {

// Measurement noise: exact expectation values, additive Gaussian on the
// scaled record, or finite-shot eigenvalue sampling per observable.
struct NoiseModel {
  enum class Kind { kExact, kGaussian, kShots };
  Kind kind = Kind::kExact;
  double std_dev = 0.0;
  long shots = 0;

  static NoiseModel exact() { return {}; }
  static NoiseModel gaussian(double std_dev);
  static NoiseModel with_shots(long count);
  std::string name() const;
};

struct MeasurementRecord {
  RVec values;  // length m, A-convention scaling
  NoiseModel noise;
  std::uint64_t seed = 0;
};

// An ordered list of m observables together with the two scale conventions:
// (A sigma)_i = (n/sqrt(m)) (w_i, sigma)  and  R = A^dagger A = (n^2/m) sum P_{w_i}.
class SamplingOperator {
 public:
  SamplingOperator(int dim, std::vector<HermitianObservable> observables);

  int dim() const { return dim_; }
  int m() const { return static_cast<int>(observables_.size()); }
  const std::vector<HermitianObservable>& observables() const { return observables_; }

  // m x n^2; row i is (n/sqrt(m)) hvec(w_i)^T, so b = a_matrix() * hvec(sigma).
  const RMat& a_matrix() const { return a_; }
  double r_prefactor() const;
  double a_prefactor() const;

  // Orthonormal basis of span{hvec(w_i)} (columns), built on first use.
  const RMat& range_basis() const;
  int range_rank() const { return static_cast<int>(range_basis().cols()); }

 private:
  int dim_;
  std::vector<HermitianObservable> observables_;
  RMat a_;
  struct RangeCache {
    std::once_flag flag;
    RMat q;
  };
  std::shared_ptr<RangeCache> range_;
};

SamplingOperator draw_sampling_operator(const FrameDescriptor& frame, int m, std::uint64_t seed);
// Homodyne: draws `settings` quadrature phase tuples uniformly on [0, pi) per
// mode; the record length is settings * (grid points)^modes.
SamplingOperator draw_sampling_operator(const HomodyneFrame& frame, int settings,
                                        std::uint64_t seed);

Mat apply_R(const SamplingOperator& op, const Mat& sigma);
RVec apply_A(const SamplingOperator& op, const Mat& sigma);
Mat apply_A_adjoint(const SamplingOperator& op, const RVec& v);
// Orthogonal projection onto span{w_i} in the Hermitian Hilbert-Schmidt space.
Mat apply_range_projector(const SamplingOperator& op, const Mat& sigma);

MeasurementRecord simulate_measurement(const SamplingOperator& op, const DensityMatrix& rho,
                                       const NoiseModel& noise, std::uint64_t seed);

struct ProjectedNorms {
  double c3;             // ||P_T R P_T - P_T|| restricted to T
  double lower_spectral;  // smallest eigenvalue of P_T P_range P_T on T
};
ProjectedNorms projected_operator_norms(const SamplingOperator& op, const TangentProjector& pt);

}  // namespace qcs
