#include "qcs/certify.hpp"

#include <cmath>

namespace qcs {

const char* certificate_variant_name(CertificateVariant v) {
  switch (v) {
    case CertificateVariant::kStrict: return "strict";
    case CertificateVariant::kNormalizedFrame: return "normalized_frame";
    case CertificateVariant::kRelaxed: return "relaxed";
    case CertificateVariant::kNoisy: return "noisy";
  }
  return "unknown";
}

CertificateVariant parse_certificate_variant(const std::string& token) {
  if (token == "eq6" || token == "strict") return CertificateVariant::kStrict;
  if (token == "eq10" || token == "normalized_frame") return CertificateVariant::kNormalizedFrame;
  if (token == "relaxed" || token == "relaxed_a_b") return CertificateVariant::kRelaxed;
  if (token == "noisy") return CertificateVariant::kNoisy;
  throw std::invalid_argument("unknown certificate variant: " + token);
}

namespace {

struct CertificateParts {
  Mat y;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double spectral_lower = 0.0;
  bool tangent_rank_deficient = false;
  double truncation_error = 0.0;
};

CertificateParts build_parts(const SamplingOperator& op, const SpectralTruncation& sq) {
  if (sq.matrix.size() == 0 || sq.matrix.norm() == 0.0)
    throw std::invalid_argument("certificate: truncated solution is zero");
  if (sq.matrix.rows() != op.dim())
    throw std::invalid_argument("certificate: dim mismatch");

  const TangentProjector pt = tangent_projector(sq.matrix);
  const Mat sgn = sign_matrix(sq.matrix);
  const auto basis = pt.hermitian_basis();
  const int t = static_cast<int>(basis.size());
  const int d = op.dim() * op.dim();
  RMat tb(d, t);
  for (int a = 0; a < t; ++a) tb.col(a) = hvec(basis[a]);
  const RVec s_coords = tb.transpose() * hvec(sgn);

  const RMat w = op.a_matrix() * tb;            // m x t
  const RMat m_rep = w.transpose() * w;         // (t_a, R t_b)
  Eigen::SelfAdjointEigenSolver<RMat> es(m_rep);
  const RVec& lam = es.eigenvalues();
  const double lam_max = lam.cwiseAbs().maxCoeff();
  if (!(lam_max > 0.0))
    throw CertificateUnbuildable("sampling operator vanishes on the tangent space");
  const double cutoff = 1e-10 * lam_max;

  const RVec proj = es.eigenvectors().transpose() * s_coords;
  RVec inv_proj(t), range_proj(t);
  bool rank_deficient = false;
  for (int i = 0; i < t; ++i) {
    const bool keep = lam[i] > cutoff;
    rank_deficient |= !keep;
    inv_proj[i] = keep ? proj[i] / lam[i] : 0.0;
    range_proj[i] = keep ? proj[i] : 0.0;
  }
  const RVec z_coords = es.eigenvectors() * inv_proj;
  const RVec mmps = es.eigenvectors() * range_proj;  // M M^+ s

  CertificateParts parts;
  parts.tangent_rank_deficient = rank_deficient;
  parts.c1 = (mmps - s_coords).norm();
  parts.c3 = (lam.array() - 1.0).abs().maxCoeff();
  const RVec y_h = op.a_matrix().transpose() * (op.a_matrix() * (tb * z_coords));
  parts.y = unhvec(y_h);
  parts.c2 = operator_norm(parts.y - pt.apply(parts.y));

  const RMat br = op.range_basis().transpose() * tb;
  Eigen::SelfAdjointEigenSolver<RMat> gs(RMat(br.transpose() * br));
  parts.spectral_lower = gs.eigenvalues().minCoeff();
  parts.truncation_error = sq.frobenius_error;
  return parts;
}

bool variant_valid(CertificateVariant variant, const CertificateParts& p,
                   const SamplingOperator& op, const CertifyTolerances& tol) {
  const double n = op.dim();
  const double m = op.m();
  // The certificate is built from the rank-q truncation, so the noiseless
  // variants certify the truncation, not the full solution. If the
  // discarded part is not numerically negligible the report would be about
  // a different matrix; refuse. (The noisy variant instead carries the
  // truncation error into its robustness bound.)
  const bool about_solution = p.truncation_error <= tol.truncation_tol;
  switch (variant) {
    case CertificateVariant::kStrict:
      return about_solution && p.c2 < 1.0 && p.c3 < 1.0 &&
             (1.0 - p.c2) * std::sqrt((1.0 - p.c3) / m) / (n * n * n) - p.c1 > 0.0;
    case CertificateVariant::kNormalizedFrame: {
      bool normalized = true;
      for (const auto& w : op.observables())
        if (std::abs(w.matrix.norm() - 1.0) > 1e-10) {
          normalized = false;
          break;
        }
      return about_solution && normalized && p.c2 < 1.0 && p.c3 < 1.0 &&
             (1.0 - p.c2) * std::sqrt((1.0 - p.c3) / m) / n - p.c1 > 0.0;
    }
    case CertificateVariant::kRelaxed:
      // c1 = 0 through a pseudo-inverse proves nothing when the restricted
      // map is singular: a kernel direction in T' is feasible at no
      // trace-norm cost, so uniqueness needs the full tangent rank as well
      return about_solution && p.c1 <= tol.c1_zero_tol && p.c2 < 1.0 &&
             !p.tangent_rank_deficient;
    case CertificateVariant::kNoisy: {
      const double pr = m / (n * n);
      return p.c2 <= 0.5 && p.spectral_lower >= pr / 2.0;
    }
  }
  return false;
}

}  // namespace

Mat build_certificate(const SamplingOperator& op, const SpectralTruncation& sigma_q) {
  return build_parts(op, sigma_q).y;
}

CertificateReport evaluate_certificate(const SamplingOperator& op,
                                       const ReconstructionResult& solution, int q,
                                       CertificateVariant variant, const CertifyTolerances& tol) {
  if (q < 1) throw std::invalid_argument("evaluate_certificate: q < 1");
  if (q > op.dim()) throw std::invalid_argument("evaluate_certificate: q > dim");
  const SpectralTruncation sq = truncate_to_rank(solution.sigma_star, q);
  const CertificateParts parts = build_parts(op, sq);

  CertificateReport rep;
  rep.c1 = parts.c1;
  rep.c2 = parts.c2;
  rep.c3 = parts.c3;
  rep.condition_variant = variant;
  rep.valid = variant_valid(variant, parts, op, tol);
  rep.trace_norm_of_solution = solution.trace_norm;
  rep.trace_within_tol = std::abs(solution.trace_norm - 1.0) <= tol.trace_tol;
  rep.spectral_lower = parts.spectral_lower;
  rep.tangent_rank_deficient = parts.tangent_rank_deficient;
  rep.q = q;
  rep.truncation_error = sq.frobenius_error;
  rep.oversampling_warning = 2 * op.m() >= op.dim() * op.dim();
  return rep;
}

std::optional<CertificateReport> certify_sweep(const SamplingOperator& op,
                                               const ReconstructionResult& solution, int q_max,
                                               CertificateVariant variant,
                                               const CertifyTolerances& tol) {
  if (q_max < 1) throw std::invalid_argument("certify_sweep: q_max < 1");
  const int cap = std::min(q_max, op.dim());
  for (int q = 1; q <= cap; ++q) {
    try {
      CertificateReport rep = evaluate_certificate(op, solution, q, variant, tol);
      if (rep.valid) return rep;
    } catch (const CertificateUnbuildable&) {
      // too few measurements for this tangent space; try the next rank anyway
    } catch (const std::invalid_argument&) {
      // zero truncation (solution identically zero): nothing to certify
      return std::nullopt;
    }
  }
  return std::nullopt;
}

CertificateReport noisy_validity(const SamplingOperator& op, const SpectralTruncation& sigma_q,
                                 CertificateReport report, double delta) {
  if (delta < 0) throw std::invalid_argument("noisy_validity: delta < 0");
  const double n = op.dim();
  const double p = op.m() / (n * n);
  report.condition_variant = CertificateVariant::kNoisy;
  report.valid = report.c2 <= 0.5 && report.spectral_lower >= p / 2.0;
  if (report.valid) {
    const double eps = sigma_q.frobenius_error;
    report.robustness_bound = (4.0 * std::sqrt((2.0 + p) * n / p) + 2.0) * (2.0 * delta + eps);
  } else {
    report.robustness_bound.reset();
  }
  return report;
}

RipProbe rip_probe(const SamplingOperator& op, int rank, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("rip_probe: trials < 1");
  if (rank < 1 || rank > op.dim()) throw std::invalid_argument("rip_probe: bad rank");
  Rng rng(seed);
  const int n = op.dim();
  RipProbe probe;
  probe.delta_min = std::numeric_limits<double>::infinity();
  probe.delta_max = 0.0;
  for (int tr = 0; tr < trials; ++tr) {
    // Haar-frame rank-r Hermitian with Gaussian spectrum, unit Frobenius norm
    Mat g = gaussian_matrix(n, rank, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, rank);
    Mat h = Mat::Zero(n, n);
    for (int k = 0; k < rank; ++k) h += gaussian(rng) * (q.col(k) * q.col(k).adjoint());
    h /= h.norm();
    const double image = apply_A(op, h).norm();
    probe.delta_min = std::min(probe.delta_min, image);
    probe.delta_max = std::max(probe.delta_max, image);
  }
  return probe;
}

}  // namespace qcs
