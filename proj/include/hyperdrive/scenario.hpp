#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyperdrive/constellation.hpp"
#include "hyperdrive/netgraph.hpp"
#include "hyperdrive/scheduler.hpp"
#include "hyperdrive/thermal.hpp"
#include "hyperdrive/types.hpp"
#include "hyperdrive/workflow.hpp"

namespace hyperdrive {

/// Capacity and thermal template applied to every node of one kind.
struct NodeTemplate {
  ResourceSpec capacity;
  std::optional<double> battery_charge;  // present = battery powered
  ThermalSpec thermal;

  bool operator==(const NodeTemplate&) const = default;
};

struct RegionConfig {
  double lat_deg = 37.0;
  double lon_deg = -120.0;
  double edge_radius_km = 150.0;
  double cloud_radius_km = 450.0;

  bool operator==(const RegionConfig&) const = default;
};

/// Per-unit node mix used to expand a total infrastructure size into
/// per-kind counts (satellites : edge : cloud per unit of unit_total).
struct SizeModel {
  int unit_total = 1118;
  int unit_satellites = 1008;
  int unit_edge = 100;
  int unit_cloud = 10;

  bool operator==(const SizeModel&) const = default;
};

struct SizeCounts {
  int sats_per_plane = 0;
  int satellites = 0;
  int edge = 0;
  int cloud = 0;
};

struct EoSatelliteConfig {
  double altitude_km = 700.0;
  double inclination_deg = 98.0;

  bool operator==(const EoSatelliteConfig&) const = default;
};

struct SchedulingTuning {
  double latency_weight = 1.0;
  double temperature_weight = 1.0;
  int commit_attempts = 3;
  int max_restarts = 2;
  double workflow_start_s = 600.0;
  double seed_stagger_s = 1200.0;
  int steps_between_tasks = 1;

  bool operator==(const SchedulingTuning&) const = default;
};

struct ScenarioConfig {
  double time_step_s = 10.0;
  ConstellationSpec constellation;
  EoSatelliteConfig eo;
  RegionConfig region;
  SizeModel size_model;
  std::map<std::string, NodeTemplate> templates;  // satellite/edge/cloud/ground_station/eo
  ThermalEnvConfig thermal_env;
  TopologyConfig links;
  VicinityConfig vicinity;
  SchedulingTuning scheduling;
  WorkflowDag workflow;
  std::map<TaskId, std::string> pinned;  // task id -> node name
  std::vector<std::string> schedulers;
  std::vector<int> sizes;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "results";

  /// Expands a total node count into per-kind counts following the size
  /// model's proportions, snapping satellites to whole planes.
  SizeCounts expand_size(int total_nodes) const;

  /// The bundled wildfire detection scenario.
  static ScenarioConfig wildfire_default();

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a scenario file. Unknown keys are rejected; parse
/// errors carry line/column diagnostics. Throws ConfigError.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin = "<string>");

std::string save_scenario(const ScenarioConfig& cfg);

/// Workflow section of the scenario format, exposed for round-tripping.
std::string workflow_to_json(const WorkflowDag& dag);
WorkflowDag workflow_from_json(const std::string& text);

}  // namespace hyperdrive
