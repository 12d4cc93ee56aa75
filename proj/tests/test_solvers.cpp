#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qcs/solvers.hpp"

using qcs::Mat;
using qcs::MeasurementRecord;
using qcs::NoiseModel;
using qcs::ReconstructionResult;
using qcs::Rng;
using qcs::RVec;
using qcs::SamplingOperator;
using qcs::SolverConfig;

namespace {

SamplingOperator complete_pauli_basis(int qubits) {
  auto atoms = qcs::finite_elements(qcs::pauli_frame(qubits));
  REQUIRE(atoms.has_value());
  std::vector<qcs::HermitianObservable> obs;
  for (auto& a : *atoms) obs.push_back(a.obs);
  return SamplingOperator(1 << qubits, std::move(obs));
}

void check_result_invariants(const SamplingOperator& op, const MeasurementRecord& rec,
                             const ReconstructionResult& r, double delta = 0.0) {
  CHECK(qcs::hermiticity_error(r.sigma_star) <= 1e-10);
  CHECK(r.trace_norm == doctest::Approx(qcs::trace_norm(r.sigma_star)).epsilon(1e-12));
  if (r.converged) CHECK(r.final_residual <= SolverConfig{}.tolerance);
  const double recomputed =
      std::max(0.0, (qcs::apply_A(op, r.sigma_star) - rec.values).norm() - delta);
  CHECK(std::abs(r.final_residual - recomputed) <= 1e-12);
}

}  // namespace

TEST_CASE("equality solver") {
  SUBCASE("complete basis pins the state") {
    auto op = complete_pauli_basis(2);
    for (int r = 1; r <= 4; ++r) {
      auto rho = qcs::random_rank_r_state(4, r, 10 + r);
      auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);
      auto res = qcs::solve_equality(op, rec);
      CHECK(res.converged);
      CHECK((res.sigma_star - rho.matrix()).norm() < 1e-6);
      check_result_invariants(op, rec, res);
    }
  }

  SUBCASE("pure states recover from few Pauli expectations") {
    auto frame = qcs::pauli_frame(4);
    int recovered = 0;
    for (int t = 0; t < 50; ++t) {
      auto rho = qcs::random_rank_r_state(16, 1, 500 + t);
      auto op = qcs::draw_sampling_operator(frame, 200, 600 + t);
      auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);
      auto res = qcs::solve_equality(op, rec);
      if ((res.sigma_star - rho.matrix()).norm() <= 1e-3) ++recovered;
    }
    CHECK(recovered >= 45);
  }

  SUBCASE("zero data gives the zero matrix") {
    auto op = qcs::draw_sampling_operator(qcs::pauli_frame(3), 20, 3);
    MeasurementRecord rec;
    rec.values = RVec::Zero(20);
    auto res = qcs::solve_equality(op, rec);
    CHECK(res.converged);
    CHECK(res.sigma_star.norm() <= 1e-10);
    CHECK(res.trace_norm <= 1e-10);
  }

  SUBCASE("dual witness is a subgradient certificate") {
    auto op = complete_pauli_basis(2);
    auto rho = qcs::random_rank_r_state(4, 1, 21);
    auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);
    auto res = qcs::solve_equality(op, rec);
    CHECK(res.converged);
    CHECK(res.dual_witness.rows() == 4);
    CHECK(qcs::operator_norm(res.dual_witness) <= 1.0 + 1e-3);
  }

  SUBCASE("bad inputs rejected") {
    auto op = qcs::draw_sampling_operator(qcs::pauli_frame(2), 6, 4);
    MeasurementRecord short_rec;
    short_rec.values = RVec::Zero(5);
    CHECK_THROWS_AS(qcs::solve_equality(op, short_rec), std::invalid_argument);
    MeasurementRecord rec;
    rec.values = RVec::Zero(6);
    SolverConfig bad;
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(qcs::solve_equality(op, rec, bad), std::invalid_argument);
    bad = SolverConfig{};
    bad.max_iterations = 0;
    CHECK_THROWS_AS(qcs::solve_equality(op, rec, bad), std::invalid_argument);
  }
}

TEST_CASE("tube solver") {
  SUBCASE("zero radius reduces to the equality program") {
    auto op = qcs::draw_sampling_operator(qcs::pauli_frame(3), 40, 31);
    auto rho = qcs::random_rank_r_state(8, 1, 32);
    auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);
    auto eq = qcs::solve_equality(op, rec);
    auto tube = qcs::solve_tube(op, rec, 0.0);
    CHECK((eq.sigma_star - tube.sigma_star).norm() < 1e-8);
  }

  SUBCASE("radius covering the data admits zero") {
    auto op = qcs::draw_sampling_operator(qcs::pauli_frame(2), 10, 33);
    auto rho = qcs::random_rank_r_state(4, 2, 34);
    auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);
    auto res = qcs::solve_tube(op, rec, rec.values.norm() * (1.0 + 1e-12));
    CHECK(res.converged);
    CHECK(res.sigma_star.norm() <= 1e-10);
  }

  SUBCASE("noise-scaled radius keeps the error proportional") {
    auto frame = qcs::pauli_frame(4);
    const double std_dev = 1e-3;
    const double delta = 3.0 * std_dev * std::sqrt(224.0);
    for (int t = 0; t < 50; ++t) {
      auto rho = qcs::random_rank_r_state(16, 1, 700 + t);
      auto op = qcs::draw_sampling_operator(frame, 224, 800 + t);
      auto rec = qcs::simulate_measurement(op, rho, NoiseModel::gaussian(std_dev), 900 + t);
      auto res = qcs::solve_tube(op, rec, delta);
      CHECK((res.sigma_star - rho.matrix()).norm() <= 10.0 * delta);
      if (t < 3) check_result_invariants(op, rec, res, delta);
    }
  }

  SUBCASE("negative radius rejected") {
    auto op = qcs::draw_sampling_operator(qcs::pauli_frame(2), 8, 35);
    MeasurementRecord rec;
    rec.values = RVec::Zero(8);
    CHECK_THROWS_AS(qcs::solve_tube(op, rec, -1e-6), std::invalid_argument);
  }
}

TEST_CASE("dantzig selector") {
  auto op = complete_pauli_basis(2);
  auto rho = qcs::random_rank_r_state(4, 2, 41);
  auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);

  SUBCASE("large lambda admits zero") {
    const double thr = qcs::operator_norm(qcs::apply_A_adjoint(op, rec.values));
    auto res = qcs::solve_dantzig(op, rec, thr * 1.01);
    CHECK(res.converged);
    CHECK(res.sigma_star.norm() <= 1e-10);
  }

  SUBCASE("small lambda approaches the equality solution") {
    SolverConfig cfg;
    cfg.max_iterations = 20000;
    auto eq = qcs::solve_equality(op, rec, cfg);
    double prev = 1e300;
    for (double lambda : {1e-2, 1e-3, 1e-4, 5e-5}) {
      auto res = qcs::solve_dantzig(op, rec, lambda, cfg);
      CHECK(res.converged);
      const double dist = (res.sigma_star - eq.sigma_star).norm();
      CHECK(dist < prev + 1e-12);
      prev = dist;
      // feasibility residual recomputes exactly
      const Mat img = qcs::apply_A_adjoint(op, rec.values - qcs::apply_A(op, res.sigma_star));
      const double recomputed = std::max(0.0, qcs::operator_norm(img) - lambda);
      CHECK(std::abs(res.final_residual - recomputed) <= 1e-12);
    }
    CHECK(prev <= 1e-4);
  }

  SUBCASE("error decreases with the noise level") {
    auto frame = qcs::pauli_frame(3);
    SolverConfig cfg;
    cfg.max_iterations = 20000;
    int monotone = 0;
    for (int t = 0; t < 20; ++t) {
      auto state = qcs::random_rank_r_state(8, 1, 1000 + t);
      auto o = qcs::draw_sampling_operator(frame, 96, 2000 + t);
      double prev = 1e300;
      bool ok = true;
      for (double s : {1e-2, 1e-3, 1e-4}) {
        auto noisy = qcs::simulate_measurement(o, state, NoiseModel::gaussian(s), 3000 + t);
        auto res = qcs::solve_dantzig(o, noisy, 4.0 * s * std::sqrt(8.0), cfg);
        const double err = (res.sigma_star - state.matrix()).norm();
        if (err > prev) ok = false;
        prev = err;
      }
      if (ok) ++monotone;
    }
    CHECK(monotone >= 19);
  }

  SUBCASE("nonpositive lambda rejected") {
    CHECK_THROWS_AS(qcs::solve_dantzig(op, rec, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(qcs::solve_dantzig(op, rec, -1.0), std::invalid_argument);
  }
}

TEST_CASE("lasso") {
  auto op = complete_pauli_basis(2);
  auto rho = qcs::random_rank_r_state(4, 1, 51);
  auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);

  SUBCASE("large mu kills every eigenvalue") {
    const double thr = qcs::operator_norm(qcs::apply_A_adjoint(op, rec.values));
    auto res = qcs::solve_lasso(op, rec, thr * 1.01);
    CHECK(res.converged);
    CHECK(res.sigma_star.norm() <= 1e-12);
  }

  SUBCASE("objective descends") {
    for (double mu : {1e-3, 1e-2}) {
      auto res = qcs::solve_lasso(op, rec, mu);
      REQUIRE(res.objective_history.size() >= 2);
      for (size_t i = 1; i < res.objective_history.size(); ++i)
        CHECK(res.objective_history[i] <= res.objective_history[i - 1] + 1e-12);
    }
  }

  SUBCASE("regularization path is monotone in mu") {
    for (int t = 0; t < 20; ++t) {
      auto state = qcs::random_rank_r_state(4, 1, 4000 + t);
      auto data = qcs::simulate_measurement(op, state, NoiseModel::exact(), 0);
      double prev = -1.0;
      for (double mu : {1e-4, 1e-3, 1e-2, 1e-1}) {
        auto res = qcs::solve_lasso(op, data, mu);
        const double err = (res.sigma_star - state.matrix()).norm();
        CHECK(err + 1e-12 >= prev);
        prev = err;
      }
    }
  }

  SUBCASE("nonpositive mu rejected") {
    CHECK_THROWS_AS(qcs::solve_lasso(op, rec, 0.0), std::invalid_argument);
  }
}

TEST_CASE("solutions ignore measurement order") {
  auto rho = qcs::random_rank_r_state(8, 1, 61);
  auto op = qcs::draw_sampling_operator(qcs::haar_hermitian_frame(8), 48, 62);
  auto rec = qcs::simulate_measurement(op, rho, NoiseModel::exact(), 0);

  std::vector<int> perm(op.m());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), Rng(63));
  std::vector<qcs::HermitianObservable> obs;
  MeasurementRecord shuffled = rec;
  for (int i = 0; i < op.m(); ++i) {
    obs.push_back(op.observables()[perm[i]]);
    shuffled.values[i] = rec.values[perm[i]];
  }
  SamplingOperator op2(8, std::move(obs));

  auto e1 = qcs::solve_equality(op, rec);
  auto e2 = qcs::solve_equality(op2, shuffled);
  CHECK((e1.sigma_star - e2.sigma_star).norm() <= 1e-8);

  auto l1 = qcs::solve_lasso(op, rec, 1e-3);
  auto l2 = qcs::solve_lasso(op2, shuffled, 1e-3);
  CHECK((l1.sigma_star - l2.sigma_star).norm() <= 1e-8);

  auto d1 = qcs::solve_dantzig(op, rec, 1e-3);
  auto d2 = qcs::solve_dantzig(op2, shuffled, 1e-3);
  CHECK((d1.sigma_star - d2.sigma_star).norm() <= 1e-8);
}
