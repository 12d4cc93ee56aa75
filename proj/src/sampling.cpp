#include "qcs/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace qcs {

NoiseModel NoiseModel::gaussian(double std_dev) {
  if (std_dev < 0) throw std::invalid_argument("NoiseModel::gaussian: std_dev < 0");
  NoiseModel n;
  n.kind = Kind::kGaussian;
  n.std_dev = std_dev;
  return n;
}

NoiseModel NoiseModel::with_shots(long count) {
  if (count < 1) throw std::invalid_argument("NoiseModel::with_shots: count < 1");
  NoiseModel n;
  n.kind = Kind::kShots;
  n.shots = count;
  return n;
}

std::string NoiseModel::name() const {
  switch (kind) {
    case Kind::kExact: return "exact";
    case Kind::kGaussian: return "gaussian(" + std::to_string(std_dev) + ")";
    case Kind::kShots: return "shots(" + std::to_string(shots) + ")";
  }
  return "unknown";
}

SamplingOperator::SamplingOperator(int dim, std::vector<HermitianObservable> observables)
    : dim_(dim), observables_(std::move(observables)), range_(std::make_shared<RangeCache>()) {
  if (dim_ < 1) throw std::invalid_argument("SamplingOperator: dim < 1");
  if (observables_.empty()) throw std::invalid_argument("SamplingOperator: empty observable list");
  const int d = dim_ * dim_;
  const int m = static_cast<int>(observables_.size());
  const double scale = a_prefactor();
  a_.resize(m, d);
  for (int i = 0; i < m; ++i) {
    const Mat& w = observables_[i].matrix;
    if (w.rows() != dim_ || w.cols() != dim_)
      throw std::invalid_argument("SamplingOperator: observable dim mismatch");
    if (hermiticity_error(w) > 1e-10)
      throw std::invalid_argument("SamplingOperator: observable not Hermitian");
    a_.row(i) = scale * hvec(w).transpose();
  }
}

double SamplingOperator::r_prefactor() const {
  return double(dim_) * dim_ / double(observables_.size());
}

double SamplingOperator::a_prefactor() const {
  return dim_ / std::sqrt(double(observables_.size()));
}

const RMat& SamplingOperator::range_basis() const {
  std::call_once(range_->flag, [this] {
    // modified Gram-Schmidt with one re-orthogonalization pass
    const int d = static_cast<int>(a_.cols());
    RMat q(d, std::min<int>(m(), d));
    int rank = 0;
    for (int i = 0; i < m(); ++i) {
      RVec v = a_.row(i).transpose();
      const double n0 = v.norm();
      if (n0 <= 1e-300) continue;
      for (int pass = 0; pass < 2; ++pass)
        v -= q.leftCols(rank) * (q.leftCols(rank).transpose() * v);
      if (v.norm() <= 1e-10 * n0) continue;
      q.col(rank++) = v / v.norm();
      if (rank == q.cols()) break;
    }
    range_->q = q.leftCols(rank);
  });
  return range_->q;
}

SamplingOperator draw_sampling_operator(const FrameDescriptor& frame, int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("draw_sampling_operator: m < 1");
  Rng rng(seed);
  std::vector<HermitianObservable> obs;
  obs.reserve(m);
  for (int i = 0; i < m; ++i) obs.push_back(sample_observable(frame, rng));
  return SamplingOperator(frame.dim, std::move(obs));
}

SamplingOperator draw_sampling_operator(const HomodyneFrame& frame, int settings,
                                        std::uint64_t seed) {
  if (settings < 1) throw std::invalid_argument("draw_sampling_operator: settings < 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
  std::vector<HermitianObservable> obs;
  for (int s = 0; s < settings; ++s) {
    std::vector<double> thetas(frame.modes());
    for (auto& t : thetas) t = u(rng);
    auto block = homodyne_setting_observables(frame, thetas);
    for (auto& o : block) obs.push_back(std::move(o));
  }
  return SamplingOperator(frame.dim(), std::move(obs));
}

namespace {

void check_dim(const SamplingOperator& op, const Mat& sigma) {
  if (sigma.rows() != op.dim() || sigma.cols() != op.dim())
    throw std::invalid_argument("sampling: matrix dim mismatch");
}

}  // namespace

RVec apply_A(const SamplingOperator& op, const Mat& sigma) {
  check_dim(op, sigma);
  return op.a_matrix() * hvec(sigma);
}

Mat apply_A_adjoint(const SamplingOperator& op, const RVec& v) {
  if (v.size() != op.m()) throw std::invalid_argument("apply_A_adjoint: length mismatch");
  return unhvec(op.a_matrix().transpose() * v);
}

Mat apply_R(const SamplingOperator& op, const Mat& sigma) {
  check_dim(op, sigma);
  return unhvec(op.a_matrix().transpose() * (op.a_matrix() * hvec(sigma)));
}

Mat apply_range_projector(const SamplingOperator& op, const Mat& sigma) {
  check_dim(op, sigma);
  const RMat& q = op.range_basis();
  return unhvec(q * (q.transpose() * hvec(sigma)));
}

MeasurementRecord simulate_measurement(const SamplingOperator& op, const DensityMatrix& rho,
                                       const NoiseModel& noise, std::uint64_t seed) {
  check_dim(op, rho.matrix());
  MeasurementRecord rec;
  rec.noise = noise;
  rec.seed = seed;
  switch (noise.kind) {
    case NoiseModel::Kind::kExact:
      rec.values = apply_A(op, rho.matrix());
      return rec;
    case NoiseModel::Kind::kGaussian: {
      rec.values = apply_A(op, rho.matrix());
      Rng rng(seed);
      for (int i = 0; i < rec.values.size(); ++i) rec.values[i] += noise.std_dev * gaussian(rng);
      return rec;
    }
    case NoiseModel::Kind::kShots: {
      // Born-rule eigenvalue sampling, c draws per observable; the multinomial
      // outcome counts are drawn by a chain of binomials.
      Rng rng(seed);
      const int m = op.m();
      const double scale = op.a_prefactor();
      rec.values.resize(m);
      for (int i = 0; i < m; ++i) {
        const auto es = eigh(op.observables()[i].matrix);
        const int n = op.dim();
        RVec p(n);
        for (int k = 0; k < n; ++k) {
          const auto v = es.vectors.col(k);
          p[k] = std::max(0.0, (v.adjoint() * rho.matrix() * v).value().real());
        }
        const double total = p.sum();
        if (total <= 0) throw std::logic_error("simulate_measurement: degenerate Born weights");
        p /= total;
        long remaining = noise.shots;
        double mass = 1.0;
        double acc = 0.0;
        for (int k = 0; k < n && remaining > 0; ++k) {
          long cnt;
          if (k == n - 1 || p[k] >= mass) {
            cnt = remaining;
          } else {
            std::binomial_distribution<long> bin(remaining, std::clamp(p[k] / mass, 0.0, 1.0));
            cnt = bin(rng);
          }
          acc += double(cnt) * es.values[k];
          remaining -= cnt;
          mass -= p[k];
        }
        rec.values[i] = scale * acc / double(noise.shots);
      }
      return rec;
    }
  }
  throw std::logic_error("simulate_measurement: unknown noise kind");
}

ProjectedNorms projected_operator_norms(const SamplingOperator& op, const TangentProjector& pt) {
  if (pt.ambient_dim() != op.dim())
    throw std::invalid_argument("projected_operator_norms: dim mismatch");
  const auto basis = pt.hermitian_basis();
  const int t = static_cast<int>(basis.size());
  const int d = op.dim() * op.dim();
  RMat tb(d, t);
  for (int a = 0; a < t; ++a) tb.col(a) = hvec(basis[a]);

  // M_ab = (t_a, R t_b); rows of a_matrix already carry n/sqrt(m)
  RMat w = op.a_matrix() * tb;
  RMat mrep = w.transpose() * w;
  RMat dev = mrep - RMat::Identity(t, t);
  ProjectedNorms out;
  out.c3 = sym_operator_norm(dev);

  RMat br = op.range_basis().transpose() * tb;
  RMat gram = br.transpose() * br;
  Eigen::SelfAdjointEigenSolver<RMat> es(gram);
  out.lower_spectral = es.eigenvalues().minCoeff();
  return out;
}

}  // namespace qcs
