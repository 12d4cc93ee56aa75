#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcs/certify.hpp"
#include "qcs/sampling.hpp"
#include "qcs/solvers.hpp"

namespace qcs {

enum class SolverKind { kEquality, kTube, kDantzig, kLasso };

const char* solver_kind_name(SolverKind kind);
SolverKind parse_solver_kind(const std::string& token);

struct ExperimentConfig {
  std::string name;
  // exactly one of these describes the measurement frame
  std::optional<FrameDescriptor> frame;
  std::optional<HomodyneFrame> homodyne;

  int dim = 0;
  int rank = 1;
  // measurement counts for i.i.d. frames; setting counts for homodyne
  std::vector<int> m_grid;
  int trials = 50;
  NoiseModel noise;
  SolverKind solver = SolverKind::kEquality;
  double solver_param = 0.0;  // tube delta / dantzig lambda / lasso mu
  SolverConfig solver_config;
  CertificateVariant variant = CertificateVariant::kRelaxed;
  int q_max = 3;
  double recovery_threshold = 1e-3;
  std::uint64_t master_seed = 7;
  int threads = 1;
  bool timing = false;  // keep wall_ms at 0 unless asked, so output is stable
};

struct ExperimentRecord {
  int m = 0;
  int trials = 0;
  int recovered = 0;
  int certified = 0;
  double mean_residual = 0.0;
  long wall_ms = 0;
  // certified runs whose true error exceeded 1e-3 (must stay 0 noiselessly)
  int certified_and_wrong = 0;
};

void validate_config(const ExperimentConfig& config);

// One grid point per output record; deterministic under the master seed
// (per-trial seeds derive from (master, m, trial) regardless of threading).
std::vector<ExperimentRecord> run_success_curve(
    const ExperimentConfig& config,
    const std::function<void(const ExperimentRecord&)>& on_record = nullptr);

std::vector<ExperimentConfig> builtin_scenarios();
std::optional<ExperimentConfig> find_scenario(const std::string& name);

void emit_csv(const std::vector<ExperimentRecord>& records, std::ostream& out);
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
// config echo plus records, for provenance
void emit_json(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records,
               const std::string& path);

std::string config_to_json_string(const ExperimentConfig& config);
ExperimentConfig config_from_json_string(const std::string& text);

}  // namespace qcs
