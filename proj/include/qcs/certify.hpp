#pragma once

#include <optional>
#include <stdexcept>

#include "qcs/sampling.hpp"
#include "qcs/solvers.hpp"

namespace qcs {

// Raised when the frame restricted to the candidate tangent space is
// numerically zero, i.e. the number of measurements is far too small to even
// set up the dual certificate.
class CertificateUnbuildable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CertificateVariant {
  kStrict,           // dimension-penalized sufficient condition
  kNormalizedFrame,  // weakened constant, needs unit-norm frame elements
  kRelaxed,          // numerical conditions: c1 ~ 0 and c2 < 1
  kNoisy,            // c2 <= 1/2 plus spectral floor, yields robustness bound
};

const char* certificate_variant_name(CertificateVariant v);
// Accepts the CLI tokens: eq6, eq10, relaxed, noisy (plus the names above).
CertificateVariant parse_certificate_variant(const std::string& token);

struct CertificateReport {
  double c1 = 0.0;  // ||P_T' Y - sgn sigma*_q||_2
  double c2 = 0.0;  // ||P_T'perp Y|| operator norm
  double c3 = 0.0;  // ||P_T' R P_T' - P_T'|| on T'
  CertificateVariant condition_variant = CertificateVariant::kRelaxed;
  bool valid = false;
  double trace_norm_of_solution = 0.0;
  bool trace_within_tol = false;      // | ||sigma*||_1 - 1 | <= trace_tol
  double spectral_lower = 0.0;        // lambda_min of P_T' P_range P_T' on T'
  bool tangent_rank_deficient = false;  // restricted map singular at pinv cutoff
  std::optional<double> robustness_bound;
  int q = 0;                          // truncation rank the report refers to
  double truncation_error = 0.0;      // Frobenius norm of the discarded part
  bool oversampling_warning = false;  // m >= n^2/2 side condition tripped
};

struct CertifyTolerances {
  double c1_zero_tol = 1e-6;
  double trace_tol = 1e-6;
  // a certificate built at rank q is a statement about the truncation, so
  // the noiseless variants refuse when the discarded part is not negligible
  double truncation_tol = 1e-6;
};

// Y = R P_T' (P_T' R P_T')^+ sgn(sigma_q); singular values of the restricted
// map below 1e-10 of the largest are treated as zero.
Mat build_certificate(const SamplingOperator& op, const SpectralTruncation& sigma_q);

CertificateReport evaluate_certificate(const SamplingOperator& op,
                                       const ReconstructionResult& solution, int q,
                                       CertificateVariant variant,
                                       const CertifyTolerances& tol = {});

// q = 1..q_max, first valid report wins; nullopt signals exhaustion (not
// enough measurements). Unbuildable certificates count as invalid.
std::optional<CertificateReport> certify_sweep(const SamplingOperator& op,
                                               const ReconstructionResult& solution, int q_max,
                                               CertificateVariant variant = CertificateVariant::kRelaxed,
                                               const CertifyTolerances& tol = {});

// Noisy-data validity: valid iff c2 <= 1/2 and spectral_lower >= p/2 with
// p = m/n^2; on success fills in the error bound
// (4 sqrt((2+p) n / p) + 2) (2 delta + eps), eps = truncation error.
CertificateReport noisy_validity(const SamplingOperator& op, const SpectralTruncation& sigma_q,
                                 CertificateReport report, double delta);

struct RipProbe {
  double delta_min = 0.0;  // smallest ||A sigma||_2 over unit-Frobenius tests
  double delta_max = 0.0;  // largest
};
RipProbe rip_probe(const SamplingOperator& op, int rank, int trials, std::uint64_t seed);

}  // namespace qcs
