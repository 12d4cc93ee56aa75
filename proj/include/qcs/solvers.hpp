#pragma once

#include <vector>

#include "qcs/sampling.hpp"

namespace qcs {

struct SolverConfig {
  int max_iterations = 5000;
  double tolerance = 1e-7;     // primal tolerance on the data-fit residual
  double splitting_step = 0.1;  // prox scale of the splitting iteration
  double rank_tol = 1e-8;      // reporting only
};

struct ReconstructionResult {
  Mat sigma_star;
  double trace_norm = 0.0;
  int iterations = 0;
  double final_residual = 0.0;  // constraint violation of sigma_star, recomputed
  bool converged = false;
  // equality/tube: the splitting dual point (z - sigma)/gamma, a trace-norm
  // subgradient witness at convergence; empty for other solvers
  Mat dual_witness;
  // lasso: objective value per iteration (descent diagnostic)
  std::vector<double> objective_history;
};

// min ||sigma||_1  s.t.  A sigma = b (Douglas-Rachford splitting)
ReconstructionResult solve_equality(const SamplingOperator& op, const MeasurementRecord& record,
                                    const SolverConfig& cfg = {});

// min ||sigma||_1  s.t.  ||A sigma - b||_2 <= delta; delta = 0 is equality
ReconstructionResult solve_tube(const SamplingOperator& op, const MeasurementRecord& record,
                                double delta, const SolverConfig& cfg = {});

// min ||sigma||_1  s.t.  ||A^dagger(b - A sigma)|| <= lambda (operator norm)
ReconstructionResult solve_dantzig(const SamplingOperator& op, const MeasurementRecord& record,
                                   double lambda, const SolverConfig& cfg = {});

// min (1/2)||A sigma - b||_2^2 + mu ||sigma||_1 (proximal gradient)
ReconstructionResult solve_lasso(const SamplingOperator& op, const MeasurementRecord& record,
                                 double mu, const SolverConfig& cfg = {});

}  // namespace qcs
