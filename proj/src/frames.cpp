#include "qcs/frames.hpp"

#include <cmath>

#include "qcs/cv.hpp"

namespace qcs {

namespace {

const Mat& pauli_matrix(int which) {
  static const Mat mats = [] {
    Mat m(2, 8);
    m << 1, 0, 0, 1, 0, cxd(0, -1), 1, 0,
         0, 1, 1, 0, cxd(0, 1), 0, 0, -1;
    return m;
  }();
  static const Mat i = mats.block(0, 0, 2, 2), x = mats.block(0, 2, 2, 2),
                   y = mats.block(0, 4, 2, 2), z = mats.block(0, 6, 2, 2);
  switch (which) {
    case 0: return i;
    case 1: return x;
    case 2: return y;
    default: return z;
  }
}

constexpr char kPauliChars[] = "IXYZ";

HermitianObservable pauli_string_observable(int qubits, long index) {
  Mat m = Mat::Identity(1, 1);
  std::string label;
  for (int q = 0; q < qubits; ++q) {
    const int digit = static_cast<int>((index >> (2 * (qubits - 1 - q))) & 3);
    label += kPauliChars[digit];
    m = kron(m, pauli_matrix(digit));
  }
  const double n = std::pow(2.0, qubits);
  return {m / std::sqrt(n), std::move(label)};
}

HermitianObservable matrix_entry_observable(int n, int index) {
  Mat m = Mat::Zero(n, n);
  if (index < n) {
    m(index, index) = 1.0;
    return {std::move(m), "E(" + std::to_string(index) + "," + std::to_string(index) + ")"};
  }
  int p = index - n;
  const int pairs = n * (n - 1) / 2;
  const bool sym = p < pairs;
  if (!sym) p -= pairs;
  // p-th pair (i, j) with i < j in row-major order
  int i = 0;
  while (p >= n - 1 - i) {
    p -= n - 1 - i;
    ++i;
  }
  const int j = i + 1 + p;
  const double s = 1.0 / std::sqrt(2.0);
  if (sym) {
    m(i, j) = s;
    m(j, i) = s;
    return {std::move(m), "S(" + std::to_string(i) + "," + std::to_string(j) + ")"};
  }
  m(i, j) = cxd(0, s);
  m(j, i) = cxd(0, -s);
  return {std::move(m), "A(" + std::to_string(i) + "," + std::to_string(j) + ")"};
}

HermitianObservable gue_observable(int n, Rng& rng) {
  Mat g = gaussian_matrix(n, n, rng);
  Mat a = 0.5 * (g + g.adjoint());
  a /= a.norm();
  return {std::move(a), "gue"};
}

std::string cxd_label(const char* head, cxd alpha, const char* tail) {
  return std::string(head) + "(" + std::to_string(alpha.real()) + "," +
         std::to_string(alpha.imag()) + ")" + tail;
}

// Fair-coin Hermitization pair of a (generally non-Hermitian) w.
std::pair<HermitianObservable, HermitianObservable> hermitization_pair(const Mat& w,
                                                                       cxd alpha,
                                                                       const char* head,
                                                                       bool renormalize) {
  const double s = 1.0 / std::sqrt(2.0);
  Mat a = s * (w + w.adjoint());
  Mat b = cxd(0, 1) * s * (w - w.adjoint());
  if (renormalize) {
    a /= a.norm();
    b /= b.norm();
  }
  return {{std::move(a), cxd_label(head, alpha, ";re")}, {std::move(b), cxd_label(head, alpha, ";im")}};
}

cxd gaussian_alpha(double sigma, Rng& rng) {
  const double re = sigma * gaussian(rng);
  const double im = sigma * gaussian(rng);
  return {re, im};
}

Mat displacement_gaussian_draw(const FrameDescriptor& f, Rng& rng, cxd& alpha_out) {
  alpha_out = gaussian_alpha(f.sigma, rng);
  const auto d = truncated_displacement(f.cutoff, alpha_out, true, f.sigma);
  return d.matrix / double(f.cutoff + 1);
}

Mat displacement_uniform_draw(const FrameDescriptor& f, Rng& rng, cxd& alpha_out) {
  std::uniform_real_distribution<double> ur(0.0, f.alpha_max);
  std::uniform_real_distribution<double> uphi(0.0, 2.0 * std::numbers::pi);
  const double r = ur(rng);
  const double phi = uphi(rng);
  alpha_out = std::polar(r, phi);
  return truncated_displacement(f.cutoff, alpha_out, false).matrix;
}

HermitianObservable wigner_point_draw(const FrameDescriptor& f, Rng& rng) {
  const cxd alpha = gaussian_alpha(f.sigma, rng);
  const double n = f.dim;
  const double log_scale = -std::log(n) + 0.5 * std::log(2.0 * std::numbers::pi * f.sigma * f.sigma) +
                           std::norm(alpha) / (4.0 * f.sigma * f.sigma);
  return {truncated_parity_observable(f.cutoff, alpha, log_scale), cxd_label("W", alpha, "")};
}

}  // namespace

FrameDescriptor pauli_frame(int qubits) {
  if (qubits < 1) throw std::invalid_argument("pauli_frame: qubits < 1");
  if ((1L << qubits) > kMaxDim) throw std::invalid_argument("pauli_frame: dim beyond cap");
  FrameDescriptor f;
  f.kind = FrameKind::kPauli;
  f.qubits = qubits;
  f.dim = 1 << qubits;
  f.normalized = true;
  return f;
}

FrameDescriptor haar_hermitian_frame(int dim) {
  if (dim < 2) throw std::invalid_argument("haar_hermitian_frame: dim < 2");
  if (dim > kMaxDim) throw std::invalid_argument("haar_hermitian_frame: dim beyond cap");
  FrameDescriptor f;
  f.kind = FrameKind::kHaarHermitian;
  f.dim = dim;
  f.normalized = true;
  return f;
}

FrameDescriptor matrix_entry_frame(int dim) {
  if (dim < 2) throw std::invalid_argument("matrix_entry_frame: dim < 2");
  if (dim > kMaxDim) throw std::invalid_argument("matrix_entry_frame: dim beyond cap");
  FrameDescriptor f;
  f.kind = FrameKind::kMatrixEntry;
  f.dim = dim;
  f.normalized = true;
  return f;
}

FrameDescriptor tensor_product_frame(const FrameDescriptor& local, int copies) {
  if (copies < 1) throw std::invalid_argument("tensor_product_frame: copies < 1");
  long dim = 1;
  for (int c = 0; c < copies; ++c) {
    dim *= local.dim;
    if (dim > kMaxDim) throw std::length_error("tensor_product_frame: dim beyond cap");
  }
  FrameDescriptor f;
  f.kind = FrameKind::kTensorProduct;
  f.dim = static_cast<int>(dim);
  f.normalized = local.normalized;
  f.claims_tight = local.claims_tight;
  f.resolution_scale = std::pow(local.resolution_scale, copies);
  f.local = std::make_shared<FrameDescriptor>(local);
  f.copies = copies;
  return f;
}

std::string frame_kind_name(FrameKind kind) {
  switch (kind) {
    case FrameKind::kPauli: return "pauli";
    case FrameKind::kHaarHermitian: return "haar_hermitian";
    case FrameKind::kMatrixEntry: return "matrix_entry";
    case FrameKind::kTensorProduct: return "tensor_product";
    case FrameKind::kDisplacementGaussian: return "displacement_gaussian";
    case FrameKind::kDisplacementUniform: return "displacement_uniform";
    case FrameKind::kWignerPoint: return "wigner_point";
  }
  return "unknown";
}

std::string describe(const FrameDescriptor& frame) {
  std::string s = frame_kind_name(frame.kind) + ": dim " + std::to_string(frame.dim);
  switch (frame.kind) {
    case FrameKind::kPauli:
      s += " (" + std::to_string(frame.qubits) + " qubits, " +
           std::to_string(1L << (2 * frame.qubits)) + " strings)";
      break;
    case FrameKind::kMatrixEntry:
      s += " (" + std::to_string(long(frame.dim) * frame.dim) + " elements)";
      break;
    case FrameKind::kTensorProduct:
      s += ", " + std::to_string(frame.copies) + " copies of [" + describe(*frame.local) + "]";
      break;
    case FrameKind::kDisplacementGaussian:
      s += ", cutoff " + std::to_string(frame.cutoff) + ", sigma " + std::to_string(frame.sigma);
      break;
    case FrameKind::kDisplacementUniform:
      s += ", cutoff " + std::to_string(frame.cutoff) + ", |alpha| <= " +
           std::to_string(frame.alpha_max);
      break;
    case FrameKind::kWignerPoint:
      s += ", cutoff " + std::to_string(frame.cutoff) + ", sigma " + std::to_string(frame.sigma);
      break;
    default:
      break;
  }
  s += frame.normalized ? "; unit-norm draws" : "; variable-norm draws";
  if (frame.claims_tight) {
    s += "; tight frame";
    if (frame.resolution_scale != 1.0)
      s += " (resolution constant " + std::to_string(frame.resolution_scale) + ")";
  } else {
    s += "; measurement ensemble (no tightness claim)";
  }
  return s;
}

HermitianObservable sample_observable(const FrameDescriptor& frame, Rng& rng) {
  switch (frame.kind) {
    case FrameKind::kPauli: {
      std::uniform_int_distribution<long> d(0, (1L << (2 * frame.qubits)) - 1);
      return pauli_string_observable(frame.qubits, d(rng));
    }
    case FrameKind::kHaarHermitian:
      return gue_observable(frame.dim, rng);
    case FrameKind::kMatrixEntry: {
      std::uniform_int_distribution<int> d(0, frame.dim * frame.dim - 1);
      return matrix_entry_observable(frame.dim, d(rng));
    }
    case FrameKind::kTensorProduct: {
      HermitianObservable out{Mat::Identity(1, 1), ""};
      for (int c = 0; c < frame.copies; ++c) {
        auto local = sample_observable(*frame.local, rng);
        out.matrix = kron(out.matrix, local.matrix);
        out.label += local.label;
      }
      return out;
    }
    case FrameKind::kDisplacementGaussian: {
      cxd alpha;
      const Mat w = displacement_gaussian_draw(frame, rng, alpha);
      auto pair = hermitization_pair(w, alpha, "D", false);
      std::uniform_int_distribution<int> coin(0, 1);
      return coin(rng) == 0 ? std::move(pair.first) : std::move(pair.second);
    }
    case FrameKind::kDisplacementUniform: {
      cxd alpha;
      const Mat w = displacement_uniform_draw(frame, rng, alpha);
      auto pair = hermitization_pair(w, alpha, "D", true);
      std::uniform_int_distribution<int> coin(0, 1);
      return coin(rng) == 0 ? std::move(pair.first) : std::move(pair.second);
    }
    case FrameKind::kWignerPoint:
      return wigner_point_draw(frame, rng);
  }
  throw std::logic_error("sample_observable: unknown kind");
}

std::vector<WeightedObservable> sample_resolution_atoms(const FrameDescriptor& frame, Rng& rng) {
  switch (frame.kind) {
    case FrameKind::kDisplacementGaussian: {
      cxd alpha;
      const Mat w = displacement_gaussian_draw(frame, rng, alpha);
      auto pair = hermitization_pair(w, alpha, "D", false);
      return {{std::move(pair.first), 0.5}, {std::move(pair.second), 0.5}};
    }
    case FrameKind::kDisplacementUniform: {
      cxd alpha;
      const Mat w = displacement_uniform_draw(frame, rng, alpha);
      auto pair = hermitization_pair(w, alpha, "D", true);
      return {{std::move(pair.first), 0.5}, {std::move(pair.second), 0.5}};
    }
    case FrameKind::kTensorProduct: {
      // atoms of the product = products of local atoms
      std::vector<WeightedObservable> acc{{{Mat::Identity(1, 1), ""}, 1.0}};
      for (int c = 0; c < frame.copies; ++c) {
        auto locals = sample_resolution_atoms(*frame.local, rng);
        std::vector<WeightedObservable> next;
        next.reserve(acc.size() * locals.size());
        for (const auto& a : acc)
          for (const auto& l : locals)
            next.push_back({{kron(a.obs.matrix, l.obs.matrix), a.obs.label + l.obs.label},
                            a.weight * l.weight});
        acc = std::move(next);
      }
      return acc;
    }
    default:
      return {{sample_observable(frame, rng), 1.0}};
  }
}

std::optional<std::vector<WeightedObservable>> finite_elements(const FrameDescriptor& frame) {
  constexpr long kMaxElements = 65536;
  switch (frame.kind) {
    case FrameKind::kPauli: {
      const long count = 1L << (2 * frame.qubits);
      std::vector<WeightedObservable> out;
      out.reserve(count);
      for (long i = 0; i < count; ++i)
        out.push_back({pauli_string_observable(frame.qubits, i), 1.0 / double(count)});
      return out;
    }
    case FrameKind::kMatrixEntry: {
      const int count = frame.dim * frame.dim;
      std::vector<WeightedObservable> out;
      out.reserve(count);
      for (int i = 0; i < count; ++i)
        out.push_back({matrix_entry_observable(frame.dim, i), 1.0 / double(count)});
      return out;
    }
    case FrameKind::kTensorProduct: {
      auto locals = finite_elements(*frame.local);
      if (!locals) return std::nullopt;
      double total = std::pow(double(locals->size()), frame.copies);
      if (total > double(kMaxElements)) return std::nullopt;
      std::vector<WeightedObservable> acc{{{Mat::Identity(1, 1), ""}, 1.0}};
      for (int c = 0; c < frame.copies; ++c) {
        std::vector<WeightedObservable> next;
        next.reserve(acc.size() * locals->size());
        for (const auto& a : acc)
          for (const auto& l : *locals)
            next.push_back({{kron(a.obs.matrix, l.obs.matrix), a.obs.label + l.obs.label},
                            a.weight * l.weight});
        acc = std::move(next);
      }
      return acc;
    }
    default:
      return std::nullopt;
  }
}

double sym_operator_norm(const RMat& s) {
  const int d = static_cast<int>(s.rows());
  if (d <= 1024) {
    Eigen::SelfAdjointEigenSolver<RMat> es(s);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  // power iteration, 200 iterations, tol 1e-8
  Rng rng(0x5eedULL);
  RVec v(d);
  for (int i = 0; i < d; ++i) v[i] = gaussian(rng);
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 200; ++it) {
    RVec w = s * v;
    const double nw = w.norm();
    if (nw == 0) return 0.0;
    v = w / nw;
    if (std::abs(nw - lam) <= 1e-8 * std::max(1.0, nw)) return nw;
    lam = nw;
  }
  return lam;
}

namespace {

ResolutionCheck finish_check(RMat s, double claimed_scale, bool exact) {
  const int d = static_cast<int>(s.rows());
  ResolutionCheck out;
  out.exact = exact;
  out.fitted_scale = s.trace() / double(d);
  const double c = (claimed_scale > 0) ? claimed_scale : 1.0;
  s /= c;
  s.diagonal().array() -= 1.0;
  out.deviation = sym_operator_norm(s);
  return out;
}

}  // namespace

ResolutionCheck tight_frame_check_exact(const FrameDescriptor& frame) {
  auto elements = finite_elements(frame);
  if (!elements) throw std::invalid_argument("tight_frame_check_exact: frame not finite");
  const int d = frame.dim * frame.dim;
  RMat s = RMat::Zero(d, d);
  const double n2 = double(frame.dim) * frame.dim;
  for (const auto& e : *elements) {
    const RVec v = hvec(e.obs.matrix);
    s.selfadjointView<Eigen::Lower>().rankUpdate(v, e.weight * n2);
  }
  s = RMat(s.selfadjointView<Eigen::Lower>());
  return finish_check(std::move(s), frame.resolution_scale, true);
}

ResolutionCheck tight_frame_check_mc(const FrameDescriptor& frame, int draws, std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("tight_frame_check_mc: draws < 1");
  const int d = frame.dim * frame.dim;
  const double n2 = double(frame.dim) * frame.dim;
  RMat s = RMat::Zero(d, d);
  constexpr int kChunk = 512;
  RMat block(d, kChunk);
  int filled = 0;
  Rng rng(seed);
  auto flush = [&] {
    if (filled == 0) return;
    s.selfadjointView<Eigen::Lower>().rankUpdate(block.leftCols(filled), 1.0);
    filled = 0;
  };
  for (int k = 0; k < draws; ++k) {
    for (auto& atom : sample_resolution_atoms(frame, rng)) {
      block.col(filled++) = std::sqrt(atom.weight * n2 / double(draws)) * hvec(atom.obs.matrix);
      if (filled == kChunk) flush();
    }
  }
  flush();
  s = RMat(s.selfadjointView<Eigen::Lower>());
  return finish_check(std::move(s), frame.resolution_scale, false);
}

double mean_square_norm(const FrameDescriptor& frame, int draws, std::uint64_t seed) {
  Rng rng(seed);
  double acc = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto w = sample_observable(frame, rng);
    acc += w.matrix.squaredNorm();
  }
  return acc / draws;
}

namespace {

struct StatAcc {
  double max = 0.0, sum = 0.0;
  long tail = 0, count = 0;
  void add(double v, double threshold) {
    max = std::max(max, v);
    sum += v;
    if (v > threshold) ++tail;
    ++count;
  }
  StatSummary summary(double threshold) const {
    return {max, count ? sum / count : 0.0, count ? double(tail) / count : 0.0, threshold};
  }
};

}  // namespace

IncoherenceReport incoherence_report(const FrameDescriptor& frame, const DensityMatrix& rho,
                                     double nu, int samples, std::uint64_t seed) {
  if (frame.dim != rho.dim()) throw std::invalid_argument("incoherence_report: dim mismatch");
  if (samples < 1 || nu <= 0) throw std::invalid_argument("incoherence_report: bad parameters");
  const int n = frame.dim;
  const int r = rho.rank();
  const Mat sgn = sign_matrix(rho.matrix());
  const TangentProjector pt = tangent_projector(rho.matrix());

  const double th_op = nu / n;
  const double th_tangent = 2.0 * nu * r / n;
  const double th_sign = nu * r / (double(n) * n);
  const double log2n = std::log2(double(n));
  const double th_one = nu * std::max(1.0, log2n * log2n);

  StatAcc op, tangent, sign, one;
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const auto w = sample_observable(frame, rng);
    const auto es = eigh(w.matrix);
    const double wop = es.values.cwiseAbs().maxCoeff();
    op.add(wop * wop, th_op);
    one.add(es.values.cwiseAbs().sum(), th_one);
    tangent.add(pt.apply(w.matrix).squaredNorm(), th_tangent);
    const double ip = (w.matrix.adjoint() * sgn).trace().real();
    sign.add(ip * ip, th_sign);
  }

  IncoherenceReport rep;
  rep.dim = n;
  rep.rank = r;
  rep.nu = nu;
  rep.samples = samples;
  rep.op_norm_sq = op.summary(th_op);
  rep.tangent_overlap = tangent.summary(th_tangent);
  rep.sign_overlap = sign.summary(th_sign);
  rep.one_norm = one.summary(th_one);
  return rep;
}

}  // namespace qcs
