#include "qcs/measurement_io.hpp"

#include <fstream>

#include "json.hpp"

namespace qcs {

namespace {

using nlohmann::json;

json matrix_to_json(const Mat& m) {
  json flat = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) flat.push_back({m(i, j).real(), m(i, j).imag()});
  return flat;
}

Mat matrix_from_json(const json& flat, int n) {
  if (static_cast<int>(flat.size()) != n * n)
    throw std::invalid_argument("measurement file: matrix entry count mismatch");
  Mat m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& pair = flat.at(k++);
      m(i, j) = cxd(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  return m;
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

json bundle_to_json(const MeasurementBundle& b) {
  json j;
  j["dim"] = b.dim;
  j["frame_kind"] = b.frame_kind;
  json obs = json::array();
  for (const auto& o : b.observables) {
    json e;
    e["label"] = o.label;
    e["matrix"] = matrix_to_json(o.matrix);
    obs.push_back(e);
  }
  j["observables"] = obs;
  j["values"] = std::vector<double>(b.values.begin(), b.values.end());
  j["noise"] = noise_to_json(b.noise);
  j["seed"] = b.seed;
  return j;
}

MeasurementBundle bundle_from_json(const json& j) {
  MeasurementBundle b;
  b.dim = j.at("dim").get<int>();
  b.frame_kind = j.value("frame_kind", std::string{});
  for (const auto& e : j.at("observables")) {
    HermitianObservable o;
    o.label = e.value("label", std::string{});
    o.matrix = matrix_from_json(e.at("matrix"), b.dim);
    b.observables.push_back(std::move(o));
  }
  const auto vals = j.at("values").get<std::vector<double>>();
  if (vals.size() != b.observables.size())
    throw std::invalid_argument("measurement file: values/observables length mismatch");
  b.values.resize(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) b.values[i] = vals[i];
  b.noise = noise_from_json(j.at("noise"));
  b.seed = j.value("seed", std::uint64_t{0});
  return b;
}

json read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return json::parse(f);
}

void write_file(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace

MeasurementBundle load_measurements(const std::string& path) {
  return bundle_from_json(read_file(path));
}

void save_measurements(const MeasurementBundle& bundle, const std::string& path) {
  write_file(bundle_to_json(bundle), path);
}

SamplingOperator to_operator(const MeasurementBundle& bundle) {
  return SamplingOperator(bundle.dim, bundle.observables);
}

MeasurementBundle make_bundle(const SamplingOperator& op, const MeasurementRecord& record,
                              const std::string& frame_kind) {
  MeasurementBundle b;
  b.dim = op.dim();
  b.frame_kind = frame_kind;
  b.observables = op.observables();
  b.values = record.values;
  b.noise = record.noise;
  b.seed = record.seed;
  return b;
}

SolutionBundle load_solution(const std::string& path) {
  const json j = read_file(path);
  SolutionBundle s;
  s.measurements = bundle_from_json(j.at("measurements"));
  s.solver = j.value("solver", std::string{});
  const auto& r = j.at("result");
  s.result.sigma_star = matrix_from_json(r.at("sigma_star"), s.measurements.dim);
  s.result.trace_norm = r.at("trace_norm").get<double>();
  s.result.iterations = r.at("iterations").get<int>();
  s.result.final_residual = r.at("final_residual").get<double>();
  s.result.converged = r.at("converged").get<bool>();
  return s;
}

void save_solution(const SolutionBundle& bundle, const std::string& path) {
  json j;
  j["measurements"] = bundle_to_json(bundle.measurements);
  j["solver"] = bundle.solver;
  json r;
  r["sigma_star"] = matrix_to_json(bundle.result.sigma_star);
  r["trace_norm"] = bundle.result.trace_norm;
  r["iterations"] = bundle.result.iterations;
  r["final_residual"] = bundle.result.final_residual;
  r["converged"] = bundle.result.converged;
  j["result"] = r;
  write_file(j, path);
}

}  // namespace qcs
