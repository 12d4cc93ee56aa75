#include "qcs/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace qcs {

const char* solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kEquality: return "equality";
    case SolverKind::kTube: return "tube";
    case SolverKind::kDantzig: return "dantzig";
    case SolverKind::kLasso: return "lasso";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& token) {
  if (token == "equality") return SolverKind::kEquality;
  if (token == "tube") return SolverKind::kTube;
  if (token == "dantzig") return SolverKind::kDantzig;
  if (token == "lasso") return SolverKind::kLasso;
  throw std::invalid_argument("unknown solver: " + token);
}

void validate_config(const ExperimentConfig& config) {
  if (config.frame.has_value() == config.homodyne.has_value())
    throw std::invalid_argument("config: exactly one frame description required");
  const int frame_dim = config.frame ? config.frame->dim : config.homodyne->dim();
  if (config.dim != frame_dim) throw std::invalid_argument("config: dim does not match frame");
  if (config.rank < 1 || config.rank > config.dim)
    throw std::invalid_argument("config: rank out of range");
  if (config.m_grid.empty()) throw std::invalid_argument("config: empty m grid");
  for (size_t i = 0; i < config.m_grid.size(); ++i) {
    if (config.m_grid[i] < 1) throw std::invalid_argument("config: m values must be positive");
    if (i > 0 && config.m_grid[i] <= config.m_grid[i - 1])
      throw std::invalid_argument("config: m grid must be strictly increasing");
  }
  if (config.trials < 1) throw std::invalid_argument("config: trials < 1");
  if (config.q_max < 1) throw std::invalid_argument("config: q_max < 1");
  if (config.recovery_threshold <= 0) throw std::invalid_argument("config: threshold <= 0");
  if (config.threads < 1) throw std::invalid_argument("config: threads < 1");
  if ((config.solver == SolverKind::kDantzig || config.solver == SolverKind::kLasso) &&
      config.solver_param <= 0)
    throw std::invalid_argument("config: solver parameter must be positive for this solver");
  if (config.solver == SolverKind::kTube && config.solver_param < 0)
    throw std::invalid_argument("config: tube radius < 0");
}

namespace {

struct TrialOutcome {
  bool recovered = false;
  bool certified = false;
  bool certified_and_wrong = false;
  double residual = 0.0;
};

TrialOutcome run_trial(const ExperimentConfig& config, int m, int trial) {
  const std::uint64_t seed =
      derive_seed(config.master_seed, static_cast<std::uint64_t>(m), trial);
  const DensityMatrix rho = random_rank_r_state(config.dim, config.rank, derive_seed(seed, 1));
  const SamplingOperator op =
      config.frame ? draw_sampling_operator(*config.frame, m, derive_seed(seed, 2))
                   : draw_sampling_operator(*config.homodyne, m, derive_seed(seed, 2));
  const MeasurementRecord rec = simulate_measurement(op, rho, config.noise, derive_seed(seed, 3));

  ReconstructionResult sol;
  switch (config.solver) {
    case SolverKind::kEquality: sol = solve_equality(op, rec, config.solver_config); break;
    case SolverKind::kTube: sol = solve_tube(op, rec, config.solver_param, config.solver_config); break;
    case SolverKind::kDantzig:
      sol = solve_dantzig(op, rec, config.solver_param, config.solver_config);
      break;
    case SolverKind::kLasso: sol = solve_lasso(op, rec, config.solver_param, config.solver_config); break;
  }

  TrialOutcome out;
  const double err = (sol.sigma_star - rho.matrix()).norm();
  out.recovered = err <= config.recovery_threshold;
  out.residual = sol.final_residual;
  const auto report = certify_sweep(op, sol, config.q_max, config.variant);
  out.certified = report.has_value() && report->trace_within_tol;
  out.certified_and_wrong = out.certified && err > 1e-3;
  return out;
}

}  // namespace

std::vector<ExperimentRecord> run_success_curve(
    const ExperimentConfig& config,
    const std::function<void(const ExperimentRecord&)>& on_record) {
  validate_config(config);
  std::vector<ExperimentRecord> records;
  records.reserve(config.m_grid.size());
  for (int m : config.m_grid) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes(config.trials);
    if (config.threads == 1) {
      for (int t = 0; t < config.trials; ++t) outcomes[t] = run_trial(config, m, t);
    } else {
      std::atomic<int> next{0};
      auto worker = [&] {
        for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1))
          outcomes[t] = run_trial(config, m, t);
      };
      std::vector<std::thread> pool;
      const int nt = std::min(config.threads, config.trials);
      pool.reserve(nt);
      for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    ExperimentRecord rec;
    rec.m = m;
    rec.trials = config.trials;
    for (const auto& o : outcomes) {
      rec.recovered += o.recovered;
      rec.certified += o.certified;
      rec.certified_and_wrong += o.certified_and_wrong;
      rec.mean_residual += o.residual;
    }
    rec.mean_residual /= config.trials;
    if (config.timing)
      rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (on_record) on_record(rec);
    records.push_back(rec);
  }
  return records;
}

namespace {

std::vector<int> default_m_grid() {
  return {40, 60, 80, 100, 120, 140, 160, 180, 200, 220, 240, 256};
}

}  // namespace

std::vector<ExperimentConfig> builtin_scenarios() {
  std::vector<ExperimentConfig> out;

  ExperimentConfig fig1;
  fig1.name = "fig1";
  fig1.frame = pauli_frame(4);
  fig1.dim = 16;
  fig1.rank = 1;
  fig1.m_grid = default_m_grid();
  fig1.q_max = 3;
  out.push_back(fig1);

  ExperimentConfig fig2g = fig1;
  fig2g.name = "fig2_global";
  fig2g.frame = haar_hermitian_frame(16);
  out.push_back(fig2g);

  ExperimentConfig fig2l = fig1;
  fig2l.name = "fig2_local";
  fig2l.frame = tensor_product_frame(haar_hermitian_frame(2), 4);
  out.push_back(fig2l);

  ExperimentConfig fig3;
  fig3.name = "fig3";
  fig3.homodyne = multimode_homodyne_frame({3, 3, 3}, default_zeta_grid(3, 6));
  fig3.dim = 27;
  fig3.rank = 5;
  fig3.m_grid = {1, 2, 3, 4, 6, 8, 10, 12, 16, 20};
  fig3.trials = 25;
  fig3.q_max = 6;
  // records here are slices, not tight-frame draws; the constraint geometry
  // is harder and the splitting needs more room than the finite-frame runs
  fig3.solver_config.max_iterations = 20000;
  out.push_back(fig3);

  ExperimentConfig fig4 = fig1;
  fig4.name = "fig4";
  fig4.frame = displacement_uniform_frame(15, 5.0);
  out.push_back(fig4);

  return out;
}

std::optional<ExperimentConfig> find_scenario(const std::string& name) {
  for (auto& c : builtin_scenarios())
    if (c.name == name) return c;
  return std::nullopt;
}

void emit_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  out << "m,trials,recovered,certified,p_recover,p_certify,mean_residual,wall_ms\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.6f,%.6f,%.6e,%ld\n", r.m, r.trials, r.recovered,
                  r.certified, double(r.recovered) / r.trials, double(r.certified) / r.trials,
                  r.mean_residual, r.wall_ms);
    out << buf;
  }
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  emit_csv(records, f);
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

namespace {

using nlohmann::json;

json frame_to_json(const FrameDescriptor& f) {
  json j;
  j["kind"] = frame_kind_name(f.kind);
  j["dim"] = f.dim;
  switch (f.kind) {
    case FrameKind::kPauli: j["qubits"] = f.qubits; break;
    case FrameKind::kTensorProduct:
      j["copies"] = f.copies;
      j["local"] = frame_to_json(*f.local);
      break;
    case FrameKind::kDisplacementGaussian:
      j["cutoff"] = f.cutoff;
      j["sigma"] = f.sigma;
      break;
    case FrameKind::kDisplacementUniform:
      j["cutoff"] = f.cutoff;
      j["alpha_max"] = f.alpha_max;
      break;
    case FrameKind::kWignerPoint:
      j["cutoff"] = f.cutoff;
      j["sigma"] = f.sigma;
      break;
    default: break;
  }
  return j;
}

FrameDescriptor frame_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pauli") return pauli_frame(j.at("qubits").get<int>());
  if (kind == "haar_hermitian") return haar_hermitian_frame(j.at("dim").get<int>());
  if (kind == "matrix_entry") return matrix_entry_frame(j.at("dim").get<int>());
  if (kind == "tensor_product")
    return tensor_product_frame(frame_from_json(j.at("local")), j.at("copies").get<int>());
  if (kind == "displacement_gaussian") return displacement_frame(j.at("cutoff").get<int>());
  if (kind == "displacement_uniform")
    return displacement_uniform_frame(j.at("cutoff").get<int>(), j.at("alpha_max").get<double>());
  if (kind == "wigner_point") return pointwise_wigner_frame(j.at("cutoff").get<int>());
  throw std::invalid_argument("unknown frame kind in config: " + kind);
}

json noise_to_json(const NoiseModel& n) {
  json j;
  switch (n.kind) {
    case NoiseModel::Kind::kExact: j["kind"] = "exact"; break;
    case NoiseModel::Kind::kGaussian:
      j["kind"] = "gaussian";
      j["std_dev"] = n.std_dev;
      break;
    case NoiseModel::Kind::kShots:
      j["kind"] = "shots";
      j["shots"] = n.shots;
      break;
  }
  return j;
}

NoiseModel noise_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exact") return NoiseModel::exact();
  if (kind == "gaussian") return NoiseModel::gaussian(j.at("std_dev").get<double>());
  if (kind == "shots") return NoiseModel::with_shots(j.at("shots").get<long>());
  throw std::invalid_argument("unknown noise kind: " + kind);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  if (c.frame) j["frame"] = frame_to_json(*c.frame);
  if (c.homodyne) {
    json h;
    h["mode_dims"] = c.homodyne->mode_dims;
    h["zeta_grid"] = std::vector<double>(c.homodyne->zeta_grid.begin(),
                                         c.homodyne->zeta_grid.end());
    j["homodyne"] = h;
  }
  j["dim"] = c.dim;
  j["rank"] = c.rank;
  j["m_grid"] = c.m_grid;
  j["trials"] = c.trials;
  j["noise"] = noise_to_json(c.noise);
  j["solver"] = solver_kind_name(c.solver);
  j["solver_param"] = c.solver_param;
  j["solver_config"] = {{"max_iterations", c.solver_config.max_iterations},
                        {"tolerance", c.solver_config.tolerance},
                        {"splitting_step", c.solver_config.splitting_step},
                        {"rank_tol", c.solver_config.rank_tol}};
  j["variant"] = certificate_variant_name(c.variant);
  j["q_max"] = c.q_max;
  j["recovery_threshold"] = c.recovery_threshold;
  j["master_seed"] = c.master_seed;
  j["threads"] = c.threads;
  j["timing"] = c.timing;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.name = j.at("name").get<std::string>();
  if (j.contains("frame")) c.frame = frame_from_json(j.at("frame"));
  if (j.contains("homodyne")) {
    const auto& h = j.at("homodyne");
    auto dims = h.at("mode_dims").get<std::vector<int>>();
    auto grid = h.at("zeta_grid").get<std::vector<double>>();
    RVec g(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) g[i] = grid[i];
    c.homodyne = multimode_homodyne_frame(std::move(dims), std::move(g));
  }
  c.dim = j.at("dim").get<int>();
  c.rank = j.at("rank").get<int>();
  c.m_grid = j.at("m_grid").get<std::vector<int>>();
  c.trials = j.at("trials").get<int>();
  c.noise = noise_from_json(j.at("noise"));
  c.solver = parse_solver_kind(j.at("solver").get<std::string>());
  c.solver_param = j.at("solver_param").get<double>();
  const auto& sc = j.at("solver_config");
  c.solver_config.max_iterations = sc.at("max_iterations").get<int>();
  c.solver_config.tolerance = sc.at("tolerance").get<double>();
  c.solver_config.splitting_step = sc.at("splitting_step").get<double>();
  c.solver_config.rank_tol = sc.at("rank_tol").get<double>();
  c.variant = parse_certificate_variant(j.at("variant").get<std::string>());
  c.q_max = j.at("q_max").get<int>();
  c.recovery_threshold = j.at("recovery_threshold").get<double>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<int>();
  c.timing = j.at("timing").get<bool>();
  return c;
}

}  // namespace

void emit_json(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records,
               const std::string& path) {
  json j;
  j["config"] = config_to_json(config);
  json rows = json::array();
  for (const auto& r : records) {
    rows.push_back({{"m", r.m},
                    {"trials", r.trials},
                    {"recovered", r.recovered},
                    {"certified", r.certified},
                    {"p_recover", double(r.recovered) / r.trials},
                    {"p_certify", double(r.certified) / r.trials},
                    {"mean_residual", r.mean_residual},
                    {"wall_ms", r.wall_ms}});
  }
  j["records"] = rows;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

std::string config_to_json_string(const ExperimentConfig& config) {
  return config_to_json(config).dump(2);
}

ExperimentConfig config_from_json_string(const std::string& text) {
  return config_from_json(json::parse(text));
}

}  // namespace qcs
