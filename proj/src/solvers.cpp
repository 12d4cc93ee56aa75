#include "qcs/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace qcs {

namespace {

void validate(const SamplingOperator& op, const MeasurementRecord& record,
              const SolverConfig& cfg) {
  if (record.values.size() != op.m())
    throw std::invalid_argument("solver: record length does not match operator");
  if (cfg.tolerance <= 0 || cfg.splitting_step <= 0 || cfg.rank_tol <= 0)
    throw std::invalid_argument("solver: tolerances must be positive");
  if (cfg.max_iterations < 1) throw std::invalid_argument("solver: max_iterations < 1");
}

// Thin SVD of the A matrix with near-zero singular values dropped, plus the
// pieces every solver needs: least-norm preimage and data decomposition.
struct Factorization {
  RMat v;       // d x k
  RVec sigma;   // k, descending, > 0
  RVec beta;    // k, U^T b
  RVec x0;      // least-norm solution of A x = P_range b
  double b_perp = 0.0;      // distance of b from range(A)
  double op_norm_sq = 0.0;  // sigma_max^2 = ||A^dagger A||
};

Factorization factorize(const SamplingOperator& op, const RVec& b) {
  // Thin SVD through the smaller Gram matrix; the symmetric eigensolver is
  // robust against the highly degenerate spectra repeated draws produce.
  const RMat& a = op.a_matrix();
  const int m = static_cast<int>(a.rows());
  const int d = static_cast<int>(a.cols());
  Factorization f;
  if (m <= d) {
    Eigen::SelfAdjointEigenSolver<RMat> es(RMat(a * a.transpose()));
    const RVec& lam = es.eigenvalues();  // ascending
    const double lmax = lam[m - 1];
    if (!(lmax > 0)) throw std::invalid_argument("solver: sampling operator is numerically zero");
    const double lcut = 1e-12 * lmax;
    int first = 0;
    while (first < m && lam[first] <= lcut) ++first;
    const int k = m - first;
    f.sigma.resize(k);
    RMat u(m, k);
    for (int j = 0; j < k; ++j) {  // descending order
      f.sigma[j] = std::sqrt(lam[m - 1 - j]);
      u.col(j) = es.eigenvectors().col(m - 1 - j);
    }
    f.v = a.transpose() * (u * f.sigma.cwiseInverse().asDiagonal());
    f.beta = u.transpose() * b;
    f.op_norm_sq = lmax;
  } else {
    Eigen::SelfAdjointEigenSolver<RMat> es(RMat(a.transpose() * a));
    const RVec& lam = es.eigenvalues();
    const double lmax = lam[d - 1];
    if (!(lmax > 0)) throw std::invalid_argument("solver: sampling operator is numerically zero");
    const double lcut = 1e-12 * lmax;
    int first = 0;
    while (first < d && lam[first] <= lcut) ++first;
    const int k = d - first;
    f.sigma.resize(k);
    f.v.resize(d, k);
    for (int j = 0; j < k; ++j) {
      f.sigma[j] = std::sqrt(lam[d - 1 - j]);
      f.v.col(j) = es.eigenvectors().col(d - 1 - j);
    }
    f.beta = f.sigma.cwiseInverse().asDiagonal() * (f.v.transpose() * (a.transpose() * b));
    f.op_norm_sq = lmax;
  }
  f.x0 = f.v * f.beta.cwiseQuotient(f.sigma);
  f.b_perp = std::sqrt(std::max(0.0, b.squaredNorm() - f.beta.squaredNorm()));
  return f;
}

// Eigenvalue soft-thresholding: the trace-norm proximal map on hvec coords.
RVec shrink(const RVec& x, double gamma) {
  const auto es = eigh(unhvec(x));
  const int n = static_cast<int>(es.values.size());
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double l = es.values[i];
    const double m = std::max(0.0, std::abs(l) - gamma);
    if (m > 0)
      out += (l > 0 ? m : -m) * (es.vectors.col(i) * es.vectors.col(i).adjoint());
  }
  return hvec(out);
}

// Projection onto {x : ||Sigma (V^T x) - beta|| <= delta_eff}, identity on the
// null-space component. delta_eff = 0 projects onto the affine set itself.
RVec tube_project(const Factorization& f, const RVec& y, double delta_eff) {
  const RVec u = f.v.transpose() * y;
  const RVec r = f.sigma.asDiagonal() * u - f.beta;
  const double rn = r.norm();
  if (rn <= delta_eff) return y;
  RVec c(u.size());
  if (delta_eff <= 0) {
    c = f.beta.cwiseQuotient(f.sigma);
  } else {
    // secular equation: phi(t) = sum_i r_i^2/(1+t s_i^2)^2 = delta_eff^2,
    // phi strictly decreasing on t >= 0, phi(0) = rn^2 > delta_eff^2
    const double target = delta_eff * delta_eff;
    auto phi = [&](double t) {
      double acc = 0.0;
      for (int i = 0; i < r.size(); ++i) {
        const double den = 1.0 + t * f.sigma[i] * f.sigma[i];
        acc += r[i] * r[i] / (den * den);
      }
      return acc;
    };
    double lo = 0.0, hi = 1.0;
    while (phi(hi) > target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e18) break;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) > target ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    for (int i = 0; i < c.size(); ++i)
      c[i] = (u[i] + t * f.sigma[i] * f.beta[i]) / (1.0 + t * f.sigma[i] * f.sigma[i]);
  }
  return y - f.v * (u - c);
}

ReconstructionResult finish(const RVec& x, int iterations,
                            double residual, bool converged) {
  ReconstructionResult res;
  res.sigma_star = unhvec(x);
  res.trace_norm = trace_norm(res.sigma_star);
  res.iterations = iterations;
  res.final_residual = residual;
  res.converged = converged;
  return res;
}

// Douglas-Rachford on f = ||.||_1, g = indicator of the data tube.
ReconstructionResult dr_solve(const SamplingOperator& op, const MeasurementRecord& record,
                              double delta, const SolverConfig& cfg) {
  validate(op, record, cfg);
  if (delta < 0) throw std::invalid_argument("solve_tube: delta < 0");
  if (record.values.norm() <= delta) {
    // zero is feasible and trace-norm minimal; skip the iteration
    auto res = finish(RVec::Zero(op.a_matrix().cols()), 0, 0.0, true);
    res.dual_witness = Mat::Zero(op.dim(), op.dim());
    return res;
  }
  const Factorization f = factorize(op, record.values);
  // the inconsistent component of b is unreachable; shrink the radius to keep
  // the projection well-posed and let final_residual report the gap
  const double delta_eff =
      std::sqrt(std::max(0.0, delta * delta - f.b_perp * f.b_perp));
  const double gamma = cfg.splitting_step;

  RVec z = f.x0;
  RVec xf, xg;
  int it = 0;
  bool gap_ok = false;
  RVec witness;
  for (; it < cfg.max_iterations; ++it) {
    xf = shrink(z, gamma);
    xg = tube_project(f, 2.0 * xf - z, delta_eff);
    witness = (z - xf) / gamma;
    z += xg - xf;
    if ((xf - xg).norm() <= cfg.tolerance * std::max(1.0, xg.norm())) {
      gap_ok = true;
      ++it;
      break;
    }
  }
  const double raw = (op.a_matrix() * xg - record.values).norm();
  const double residual = std::max(0.0, raw - delta);
  auto res = finish(xg, it, residual, gap_ok && residual <= cfg.tolerance);
  res.dual_witness = unhvec(witness);
  return res;
}

}  // namespace

ReconstructionResult solve_equality(const SamplingOperator& op, const MeasurementRecord& record,
                                    const SolverConfig& cfg) {
  return dr_solve(op, record, 0.0, cfg);
}

ReconstructionResult solve_tube(const SamplingOperator& op, const MeasurementRecord& record,
                                double delta, const SolverConfig& cfg) {
  return dr_solve(op, record, delta, cfg);
}

ReconstructionResult solve_dantzig(const SamplingOperator& op, const MeasurementRecord& record,
                                   double lambda, const SolverConfig& cfg) {
  validate(op, record, cfg);
  if (lambda <= 0) throw std::invalid_argument("solve_dantzig: lambda <= 0");
  const Factorization f = factorize(op, record.values);
  const RMat& a = op.a_matrix();
  const RVec c0 = a.transpose() * record.values;
  const Mat c0_mat = unhvec(c0);
  auto apply_k = [&](const RVec& x) -> RVec { return a.transpose() * (a * x); };

  // primal-dual hybrid gradient with K = A^dagger A (self-adjoint)
  const double step = 0.95 / std::max(f.op_norm_sq, 1e-300);
  RVec x = f.x0, xbar = x, y = RVec::Zero(x.size());
  int it = 0;
  bool converged = false;
  double feas = 0.0;
  for (; it < cfg.max_iterations; ++it) {
    // dual step via Moreau: prox of the support function of the constraint set
    RVec v = y + step * apply_k(xbar);
    Mat dev = unhvec(v / step) - c0_mat;
    auto es = eigh(dev);
    Mat clipped = Mat::Zero(dev.rows(), dev.cols());
    for (int i = 0; i < es.values.size(); ++i)
      clipped += std::clamp(es.values[i], -lambda, lambda) *
                 (es.vectors.col(i) * es.vectors.col(i).adjoint());
    y = v - step * (c0 + hvec(clipped));

    RVec x_new = shrink(x - step * y, step);
    xbar = 2.0 * x_new - x;
    const double change = (x_new - x).norm();
    x = x_new;
    feas = std::max(0.0, operator_norm(c0_mat - unhvec(apply_k(x))) - lambda);
    if (change <= cfg.tolerance * std::max(1.0, x.norm()) && feas <= cfg.tolerance) {
      converged = true;
      ++it;
      break;
    }
  }
  return finish(x, it, feas, converged);
}

ReconstructionResult solve_lasso(const SamplingOperator& op, const MeasurementRecord& record,
                                 double mu, const SolverConfig& cfg) {
  validate(op, record, cfg);
  if (mu <= 0) throw std::invalid_argument("solve_lasso: mu <= 0");
  const Factorization f = factorize(op, record.values);
  const RMat& a = op.a_matrix();
  const RVec c0 = a.transpose() * record.values;
  const double lip = std::max(f.op_norm_sq, 1e-300);

  std::vector<double> history;
  RVec x = RVec::Zero(a.cols());
  int it = 0;
  double grad_map = 0.0;
  bool converged = false;
  for (; it < cfg.max_iterations; ++it) {
    const RVec ax = a * x;
    history.push_back(0.5 * (ax - record.values).squaredNorm() +
                      mu * trace_norm(unhvec(x)));
    const RVec grad = a.transpose() * ax - c0;
    const RVec x_new = shrink(x - grad / lip, mu / lip);
    grad_map = lip * (x_new - x).norm();
    x = x_new;
    if (grad_map <= cfg.tolerance) {
      converged = true;
      ++it;
      break;
    }
  }
  auto out = finish(x, it, grad_map, converged);
  out.objective_history = std::move(history);
  return out;
}

}  // namespace qcs
