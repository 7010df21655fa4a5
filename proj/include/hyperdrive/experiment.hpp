#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperdrive/scenario.hpp"
#include "hyperdrive/scheduler.hpp"

namespace hyperdrive {

/// Achieved QoS of one workflow link, measured on the graph snapshot at the
/// moment the downstream task was placed.
struct EdgeResult {
  std::string source;
  TaskId target;
  bool data_source_edge = false;
  double t_s = 0.0;
  bool connected = false;
  NetworkQos qos;
  std::optional<NetworkSlo> slo;
  bool violated = false;
};

struct TaskRunResult {
  SchedulingDecision decision;
  double t_s = 0.0;
  NodeKind node_kind = NodeKind::Cloud;
  std::string node_name;
  bool on_satellite = false;
  std::optional<double> predicted_temp_c;
  double over_rec_c = 0.0;  // degrees above temp_rec, 0 when within
  bool over_max = false;
  ScoreBreakdown chosen_score;
};

/// One experiment cell: scheduler x infrastructure size x seed.
struct ExperimentRecord {
  std::string scheduler;
  int size = 0;
  std::uint64_t seed = 0;
  std::vector<TaskRunResult> tasks;
  std::vector<EdgeResult> edges;
  bool complete = false;
  std::optional<double> e2e_latency_ms;
  std::optional<double> eo_latency_ms;
};

std::vector<ExperimentRecord> run_experiment(const ScenarioConfig& cfg,
                                             int parallel = 1);
ExperimentRecord run_cell(const ScenarioConfig& cfg,
                          const std::string& scheduler, int size,
                          std::uint64_t seed);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Linear-interpolated quantile of a sorted sample.
double quantile(std::span<const double> sorted, double q);

struct Quartiles {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

struct SchedulerSummary {
  int records = 0;
  int incomplete = 0;
  double mean_e2e_latency_ms = 0.0;
  int slo_edges = 0;
  int slo_violations = 0;
  double violation_rate = 0.0;
  Quartiles eo_latency_ms;
  // per task id: satellite placements, exceed counts, mean excess where hot
  struct Overheating {
    int satellite_placements = 0;
    int over_rec = 0;
    int over_max = 0;
    double mean_over_rec_c = 0.0;
  };
  std::map<TaskId, Overheating> overheating;
  std::map<int, double> mean_wall_ms_by_size;
  LinearFit wall_fit;        // mean wall time vs total node count
  double wall_ratio = 0.0;   // largest-size mean / smallest-size mean
};

struct Summary {
  std::map<std::string, SchedulerSummary> schedulers;

  std::string to_json() const;
  std::string to_csv() const;
};

Summary summarize(const std::vector<ExperimentRecord>& records);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Experiment-level acceptance checks evaluated over a full default matrix:
/// latency ordering with margin, objective compliance, data-source latency,
/// overheating avoidance, and scheduling-time scalability.
std::vector<CheckResult> run_checks(const std::vector<ExperimentRecord>& records);

/// Serialization of records (timing is part of the record; pass
/// zero_wall_times to compare deterministic content only).
std::string records_to_json(const std::vector<ExperimentRecord>& records,
                            bool zero_wall_times = false);
std::vector<ExperimentRecord> records_from_json(const std::string& text);

/// decisions.csv (one row per task decision), edges.csv, records.json.
void write_results(const std::string& dir,
                   const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records(const std::string& dir);

/// Per-time-index position and link-latency tables for offline plotting.
void export_traces(const ScenarioConfig& cfg, int size, std::uint64_t seed,
                   int steps, const std::string& dir);

}  // namespace hyperdrive
