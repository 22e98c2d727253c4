#pragma once

#include "rwc/geometry.hpp"
#include "rwc/walk.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rwc {

struct ConfigInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { tail, harmonic, bm, clt, llt_uniform, llt_fixed, bridge, count, fn_check };

std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind;
  std::string cone_spec;
  std::string steps_path;
  std::optional<IVec> start;
  std::optional<IVec> end;
  std::optional<long> n;
  std::vector<long> n_grid;
  std::optional<long> samples;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::optional<double> radius;
  std::optional<long> horizon;
  std::optional<double> t;
  int radial_cells = 8;
  int angular_cells = 4;
  std::map<std::string, double> tolerances;
  std::string out_path;
  std::string raw_json;  // canonical echo of the parsed document
};

// Strict parse: unknown keys rejected; seed mandatory for stochastic kinds.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct MetricResult {
  std::string name;
  double estimate;
  double target;
  double tolerance;
  bool has_target;
  bool pass;
};

struct ExperimentReport {
  std::string kind;
  std::string config_echo;
  std::vector<MetricResult> metrics;
  std::vector<std::pair<std::string, double>> diagnostics;
  double wall_clock_sec = 0;
  std::string version;

  bool all_pass() const;
  // Deterministic numeric payload: everything except the wall clock.
  std::string payload_json() const;
};

ExperimentReport run(const ExperimentConfig& config);

// format: "json" or "csv"; floats with 17 significant digits, stable order.
std::string emit(const ExperimentReport& report, const std::string& format);

}  // namespace rwc
