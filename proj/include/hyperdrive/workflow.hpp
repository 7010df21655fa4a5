#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperdrive/types.hpp"

namespace hyperdrive {

struct LatLonAlt {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_km = 0.0;

  bool operator==(const LatLonAlt&) const = default;
};

/// One serverless function instance awaiting placement.
struct WorkflowTask {
  TaskId id;
  ResourceSpec resources;
  std::optional<double> expected_duration_s;
  std::optional<double> max_response_time_slo_s;
  std::optional<LatLonAlt> preferred_location;

  bool operator==(const WorkflowTask&) const = default;
};

/// External data source (e.g. an imaging satellite). Hosted on an
/// infrastructure node, has no resource demand, and is never scheduled.
struct DataSourceNode {
  std::string id;
  NodeId host_node;

  bool operator==(const DataSourceNode&) const = default;
};

/// Invocation edge. Source is a task or data source, target is always a task.
struct WorkflowEdge {
  std::string source;
  TaskId target;
  std::optional<NetworkSlo> slo;

  bool operator==(const WorkflowEdge&) const = default;
};

struct WorkflowDag {
  std::vector<WorkflowTask> tasks;
  std::vector<DataSourceNode> data_sources;
  std::vector<WorkflowEdge> edges;
  std::map<TaskId, NodeId> placements;

  const WorkflowTask* find_task(const std::string& id) const;
  const DataSourceNode* find_data_source(const std::string& id) const;
  std::vector<const WorkflowEdge*> incoming(const TaskId& task) const;

  /// Tasks in dependency order (data sources are not included).
  /// Throws ConfigError if the task graph has a cycle.
  std::vector<TaskId> topological_order() const;

  bool operator==(const WorkflowDag&) const = default;
};

enum class ViolationKind {
  Cycle,
  DanglingEdge,
  EdgeTargetNotTask,
  SloOutOfRange,
  InvalidResources,
  DuplicateId,
  DanglingPlacement,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Report-style check of every workflow invariant: acyclicity over tasks,
/// edge endpoints resolvable, edges targeting tasks only, SLO and resource
/// fields in range, unique ids.
ValidationReport validate_workflow(const WorkflowDag& dag);

}  // namespace hyperdrive
