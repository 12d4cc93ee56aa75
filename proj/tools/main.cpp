#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcs/experiments.hpp"
#include "qcs/measurement_io.hpp"

namespace {

using namespace qcs;

void print_scenarios() {
  for (const auto& c : builtin_scenarios()) {
    std::cout << c.name << ": dim " << c.dim << ", rank " << c.rank << ", "
              << (c.frame ? describe(*c.frame)
                          : "homodyne, " + std::to_string(c.homodyne->modes()) + " modes, " +
                                std::to_string(c.homodyne->zeta_grid.size()) +
                                "-point grid per mode")
              << ", trials " << c.trials << ", grid";
    for (int m : c.m_grid) std::cout << " " << m;
    std::cout << "\n";
  }
}

int run_scenario(const std::string& name, std::uint64_t seed, int trials,
                 const std::vector<int>& m_grid, const std::string& out,
                 const std::string& format, int threads, bool timing, bool progress) {
  auto config = find_scenario(name);
  if (!config) {
    std::cerr << "unknown scenario: " << name << " (see `scenario list`)\n";
    return 1;
  }
  config->master_seed = seed;
  if (trials > 0) config->trials = trials;
  if (!m_grid.empty()) config->m_grid = m_grid;
  config->threads = threads;
  config->timing = timing;

  std::function<void(const ExperimentRecord&)> on_record;
  if (progress)
    on_record = [](const ExperimentRecord& r) {
      std::cerr << "m=" << r.m << " recovered=" << r.recovered << "/" << r.trials
                << " certified=" << r.certified << "\n";
    };
  const auto records = run_success_curve(*config, on_record);

  if (format == "json") {
    if (out.empty()) {
      std::cerr << "json format requires --out\n";
      return 1;
    }
    emit_json(*config, records, out);
  } else if (out.empty()) {
    emit_csv(records, std::cout);
  } else {
    emit_csv(records, out);
  }
  return 0;
}

nlohmann::json report_to_json(const CertificateReport& rep) {
  nlohmann::json j;
  j["c1"] = rep.c1;
  j["c2"] = rep.c2;
  j["c3"] = rep.c3;
  j["variant"] = certificate_variant_name(rep.condition_variant);
  j["valid"] = rep.valid;
  j["trace_norm_of_solution"] = rep.trace_norm_of_solution;
  j["trace_within_tol"] = rep.trace_within_tol;
  j["spectral_lower"] = rep.spectral_lower;
  j["tangent_rank_deficient"] = rep.tangent_rank_deficient;
  j["q"] = rep.q;
  j["truncation_error"] = rep.truncation_error;
  j["oversampling_warning"] = rep.oversampling_warning;
  if (rep.robustness_bound) j["robustness_bound"] = *rep.robustness_bound;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank quantum state tomography: simulate, reconstruct, certify"};
  app.require_subcommand(1);

  // scenario
  auto* scenario = app.add_subcommand("scenario", "built-in study configurations");
  scenario->require_subcommand(1);
  scenario->add_subcommand("list", "list built-in scenarios");
  auto* run = scenario->add_subcommand("run", "run a scenario and emit its success curve");
  std::string name, out, format = "csv";
  std::uint64_t seed = 7;
  int trials = 0, threads = 1;
  bool timing = false, progress = false;
  std::vector<int> m_grid;
  run->add_option("name", name, "scenario name")->required();
  run->add_option("--seed", seed, "master seed");
  run->add_option("--trials", trials, "trials per grid point");
  run->add_option("--m-grid", m_grid, "comma-separated measurement counts")->delimiter(',');
  run->add_option("--out", out, "output path (stdout if omitted)");
  run->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--threads", threads, "worker threads");
  run->add_flag("--timing", timing, "record wall-clock times (breaks byte determinism)");
  run->add_flag("--progress", progress, "per-grid-point progress on stderr");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "solve a measurement file");
  std::string rec_input, rec_out = "solution.json", rec_solver = "equality";
  double rec_param = 0.0;
  SolverConfig rec_cfg;
  rec->add_option("--input", rec_input, "measurements.json")->required();
  rec->add_option("--solver", rec_solver, "equality|tube|dantzig|lasso")
      ->check(CLI::IsMember({"equality", "tube", "dantzig", "lasso"}));
  rec->add_option("--param", rec_param, "tube delta / dantzig lambda / lasso mu");
  rec->add_option("--out", rec_out, "solution output path");
  rec->add_option("--max-iterations", rec_cfg.max_iterations, "iteration cap");
  rec->add_option("--tolerance", rec_cfg.tolerance, "primal tolerance");
  rec->add_option("--step", rec_cfg.splitting_step, "splitting prox scale");

  // certify
  auto* cert = app.add_subcommand("certify", "certify a solution file");
  std::string cert_input, cert_variant = "relaxed", cert_out;
  int cert_q = 0, cert_q_max = 4;
  double cert_delta = 0.0;
  cert->add_option("--input", cert_input, "solution.json")->required();
  cert->add_option("--variant", cert_variant, "eq6|eq10|relaxed|noisy")
      ->check(CLI::IsMember({"eq6", "eq10", "relaxed", "noisy"}));
  cert->add_option("--q", cert_q, "fixed truncation rank (otherwise sweep)");
  cert->add_option("--q-max", cert_q_max, "sweep upper bound");
  cert->add_option("--delta", cert_delta, "data noise radius for the noisy variant");
  cert->add_option("--out", cert_out, "write the report here instead of stdout");

  // frame info
  auto* frame = app.add_subcommand("frame", "frame utilities");
  auto* info = frame->add_subcommand("info", "describe a frame kind");
  std::string frame_kind;
  info->add_option("kind", frame_kind,
                   "pauli|haar_hermitian|matrix_entry|tensor_product|displacement_gaussian|"
                   "displacement_uniform|wigner_point|homodyne")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (scenario->parsed()) {
      if (scenario->get_subcommand("list")->parsed()) {
        print_scenarios();
        return 0;
      }
      return run_scenario(name, seed, trials, m_grid, out, format, threads, timing, progress);
    }

    if (rec->parsed()) {
      const MeasurementBundle bundle = load_measurements(rec_input);
      const SamplingOperator op = to_operator(bundle);
      MeasurementRecord record{bundle.values, bundle.noise, bundle.seed};
      ReconstructionResult result;
      switch (parse_solver_kind(rec_solver)) {
        case SolverKind::kEquality: result = solve_equality(op, record, rec_cfg); break;
        case SolverKind::kTube: result = solve_tube(op, record, rec_param, rec_cfg); break;
        case SolverKind::kDantzig: result = solve_dantzig(op, record, rec_param, rec_cfg); break;
        case SolverKind::kLasso: result = solve_lasso(op, record, rec_param, rec_cfg); break;
      }
      SolutionBundle sol{bundle, result, rec_solver};
      save_solution(sol, rec_out);
      std::cout << "solver=" << rec_solver << " converged=" << (result.converged ? "yes" : "no")
                << " iterations=" << result.iterations
                << " trace_norm=" << result.trace_norm
                << " residual=" << result.final_residual << "\n";
      return result.converged ? 0 : 2;
    }

    if (cert->parsed()) {
      const SolutionBundle sol = load_solution(cert_input);
      const SamplingOperator op = to_operator(sol.measurements);
      const CertificateVariant variant = parse_certificate_variant(cert_variant);
      nlohmann::json j;
      if (cert_q > 0) {
        CertificateReport rep = evaluate_certificate(op, sol.result, cert_q, variant);
        if (variant == CertificateVariant::kNoisy) {
          const auto sq = truncate_to_rank(sol.result.sigma_star, cert_q);
          rep = noisy_validity(op, sq, rep, cert_delta);
        }
        j = report_to_json(rep);
      } else {
        auto rep = certify_sweep(op, sol.result, cert_q_max, variant);
        if (rep && variant == CertificateVariant::kNoisy) {
          const auto sq = truncate_to_rank(sol.result.sigma_star, rep->q);
          *rep = noisy_validity(op, sq, *rep, cert_delta);
        }
        j = rep ? report_to_json(*rep)
                : nlohmann::json{{"valid", false}, {"exhausted", true}, {"q_max", cert_q_max}};
      }
      if (cert_out.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream f(cert_out);
        if (!f) throw std::runtime_error("cannot open for writing: " + cert_out);
        f << j.dump(2) << "\n";
      }
      return 0;
    }

    if (info->parsed()) {
      if (frame_kind == "homodyne") {
        const auto& fig3 = *find_scenario("fig3");
        const auto& h = *fig3.homodyne;
        std::cout << "homodyne: generalized frame, " << h.modes() << " modes, dim " << h.dim()
                  << ", per-mode grid";
        for (int i = 0; i < h.zeta_grid.size(); ++i) std::cout << " " << h.zeta_grid[i];
        std::cout << "\nsettings are per-mode quadrature angles drawn uniformly on [0, pi);"
                  << "\none setting contributes (grid points)^modes record entries\n";
        return 0;
      }
      FrameDescriptor d;
      if (frame_kind == "pauli") d = pauli_frame(4);
      else if (frame_kind == "haar_hermitian") d = haar_hermitian_frame(16);
      else if (frame_kind == "matrix_entry") d = matrix_entry_frame(16);
      else if (frame_kind == "tensor_product") d = tensor_product_frame(haar_hermitian_frame(2), 4);
      else if (frame_kind == "displacement_gaussian") d = displacement_frame(15);
      else if (frame_kind == "displacement_uniform") d = displacement_uniform_frame(15, 5.0);
      else if (frame_kind == "wigner_point") d = pointwise_wigner_frame(15);
      else {
        std::cerr << "unknown frame kind: " << frame_kind << "\n";
        return 1;
      }
      std::cout << describe(d) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
