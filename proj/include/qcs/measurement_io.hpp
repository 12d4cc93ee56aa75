#pragma once

#include <string>

#include "qcs/sampling.hpp"
#include "qcs/solvers.hpp"

namespace qcs {

// Measurement-exchange payload. Observables travel as dense complex matrices,
// each a row-major flat list of [re, im] pairs.
struct MeasurementBundle {
  int dim = 0;
  std::string frame_kind;
  std::vector<HermitianObservable> observables;
  RVec values;
  NoiseModel noise;
  std::uint64_t seed = 0;
};

MeasurementBundle load_measurements(const std::string& path);
void save_measurements(const MeasurementBundle& bundle, const std::string& path);
SamplingOperator to_operator(const MeasurementBundle& bundle);
MeasurementBundle make_bundle(const SamplingOperator& op, const MeasurementRecord& record,
                              const std::string& frame_kind);

// A reconstruction plus the measurements it came from, so certification can
// rebuild the sampling operator.
struct SolutionBundle {
  MeasurementBundle measurements;
  ReconstructionResult result;
  std::string solver;
};

SolutionBundle load_solution(const std::string& path);
void save_solution(const SolutionBundle& bundle, const std::string& path);

}  // namespace qcs
