#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcs/linalg.hpp"
#include "qcs/states.hpp"

namespace qcs {

struct HermitianObservable {
  Mat matrix;
  std::string label;
};

enum class FrameKind {
  kPauli,
  kHaarHermitian,
  kMatrixEntry,
  kTensorProduct,
  kDisplacementGaussian,  // Gaussian-law scaled displacement observables
  kDisplacementUniform,   // |alpha| ~ U[0, alpha_max], 2-norm normalized
  kWignerPoint,
};

/// Immutable description of an observable ensemble ("frame"). Draws are
/// Hermitian; `normalized` marks ensembles whose every draw has unit
/// Frobenius norm; `claims_tight` marks those asserting the resolution
/// E[n^2 P_w] = resolution_scale * identity.
struct FrameDescriptor {
  FrameKind kind = FrameKind::kPauli;
  int dim = 2;
  bool normalized = false;
  bool claims_tight = true;
  double resolution_scale = 1.0;  // constant c in E[n^2 P_w] = c * 1

  int qubits = 1;                        // pauli
  std::shared_ptr<FrameDescriptor> local;  // tensor product
  int copies = 1;                        // tensor product
  int cutoff = 0;                        // CV frames: Fock cutoff N, dim = N+1
  double sigma = 0.0;                    // CV frames: Gaussian width
  double alpha_max = 0.0;                // displacement_uniform
};

/// Uniform ensemble over the 4^k Pauli strings scaled to unit Frobenius norm.
FrameDescriptor pauli_frame(int qubits);

/// GUE matrix normalized to unit Frobenius norm (Haar-rotation invariant).
FrameDescriptor haar_hermitian_frame(int dim);

/// Uniform ensemble over the n^2 Hermitian matrix-unit basis elements.
FrameDescriptor matrix_entry_frame(int dim);

/// k-fold tensor product of independent draws from a local frame.
FrameDescriptor tensor_product_frame(const FrameDescriptor& local, int copies);

std::string frame_kind_name(FrameKind kind);
std::string describe(const FrameDescriptor& frame);

/// One draw from the ensemble.
HermitianObservable sample_observable(const FrameDescriptor& frame, Rng& rng);

/// One draw, expanded into its exactly-weighted atoms (for ensembles built
/// from a fair Hermitization coin both coin faces are returned with weight
/// 1/2 each; otherwise a single atom of weight 1). Used by the Monte Carlo
/// resolution check, which marginalizes the coin analytically.
struct WeightedObservable {
  HermitianObservable obs;
  double weight = 1.0;
};
std::vector<WeightedObservable> sample_resolution_atoms(const FrameDescriptor& frame, Rng& rng);

/// Full element list with probability weights for finite ensembles
/// (pauli, matrix_entry, tensor products of finite frames); nullopt otherwise.
std::optional<std::vector<WeightedObservable>> finite_elements(const FrameDescriptor& frame);

/// Result of a tight-frame resolution check: `deviation` is the superoperator
/// norm of S/c - 1 where S is the (exact or empirical) mean of n^2 P_w and c
/// the frame's resolution scale; `fitted_scale` is tr(S)/n^2.
struct ResolutionCheck {
  double deviation = 0.0;
  double fitted_scale = 0.0;
  bool exact = false;
};

ResolutionCheck tight_frame_check_exact(const FrameDescriptor& frame);
ResolutionCheck tight_frame_check_mc(const FrameDescriptor& frame, int draws, std::uint64_t seed);

/// Empirical mean of ||w||_2^2.
double mean_square_norm(const FrameDescriptor& frame, int draws, std::uint64_t seed);

/// Operator norm of a real symmetric matrix (dense solve for d <= 1024,
/// else power iteration: 200 iterations, tol 1e-8).
double sym_operator_norm(const RMat& s);

struct StatSummary {
  double max = 0.0;
  double mean = 0.0;
  double tail_fraction = 0.0;  // fraction of draws above the threshold
  double threshold = 0.0;
};

/// Empirical incoherence diagnostics of a frame against a reference state:
/// operator-norm^2, tangent-space overlap, sign-matrix overlap and 1-norm of
/// sampled observables, with the low-rank incoherence thresholds.
struct IncoherenceReport {
  int dim = 0;
  int rank = 0;
  double nu = 0.0;
  int samples = 0;
  StatSummary op_norm_sq;       // threshold nu / n
  StatSummary tangent_overlap;  // ||P_T w||_2^2, threshold 2 nu r / n
  StatSummary sign_overlap;     // (w, sgn rho)^2, threshold nu r / n^2
  StatSummary one_norm;         // threshold nu * log2(n)^2 (diagnostic only)
};

IncoherenceReport incoherence_report(const FrameDescriptor& frame, const DensityMatrix& rho,
                                     double nu, int samples, std::uint64_t seed);

}  // namespace qcs
