#include "hyperdrive/workflow.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "hyperdrive/errors.hpp"

namespace hyperdrive {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Cloud: return "cloud";
    case NodeKind::Edge: return "edge";
    case NodeKind::GroundStation: return "ground_station";
    case NodeKind::Satellite: return "satellite";
  }
  return "unknown";
}

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  if (s == "cloud") return NodeKind::Cloud;
  if (s == "edge") return NodeKind::Edge;
  if (s == "ground_station") return NodeKind::GroundStation;
  if (s == "satellite") return NodeKind::Satellite;
  return std::nullopt;
}

double VicinityConfig::radius_for(NodeKind k) const {
  switch (k) {
    case NodeKind::Cloud: return cloud_radius_km;
    case NodeKind::Edge: return edge_radius_km;
    case NodeKind::GroundStation: return ground_station_radius_km;
    case NodeKind::Satellite: return satellite_radius_km;
  }
  return 0.0;
}

double VicinityConfig::quota_for(NodeKind k) const {
  switch (k) {
    case NodeKind::Cloud: return cloud_quota;
    case NodeKind::Edge: return edge_quota;
    case NodeKind::GroundStation: return ground_station_quota;
    case NodeKind::Satellite: return satellite_quota;
  }
  return 0.0;
}

const WorkflowTask* WorkflowDag::find_task(const std::string& id) const {
  for (const auto& t : tasks)
    if (t.id == id) return &t;
  return nullptr;
}

const DataSourceNode* WorkflowDag::find_data_source(
    const std::string& id) const {
  for (const auto& d : data_sources)
    if (d.id == id) return &d;
  return nullptr;
}

std::vector<const WorkflowEdge*> WorkflowDag::incoming(
    const TaskId& task) const {
  std::vector<const WorkflowEdge*> out;
  for (const auto& e : edges)
    if (e.target == task) out.push_back(&e);
  return out;
}

std::vector<TaskId> WorkflowDag::topological_order() const {
  std::unordered_map<std::string, int> indegree;
  for (const auto& t : tasks) indegree[t.id] = 0;
  for (const auto& e : edges) {
    // only task->task edges constrain the order
    if (find_task(e.source) && indegree.count(e.target)) indegree[e.target]++;
  }
  std::deque<TaskId> ready;
  for (const auto& t : tasks)
    if (indegree[t.id] == 0) ready.push_back(t.id);
  std::vector<TaskId> order;
  while (!ready.empty()) {
    TaskId id = ready.front();
    ready.pop_front();
    order.push_back(id);
    for (const auto& e : edges) {
      if (e.source != id || !indegree.count(e.target)) continue;
      if (--indegree[e.target] == 0) ready.push_back(e.target);
    }
  }
  if (order.size() != tasks.size())
    throw ConfigError("workflow task graph has a cycle");
  return order;
}

ValidationReport validate_workflow(const WorkflowDag& dag) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  std::set<std::string> ids;
  for (const auto& t : dag.tasks) {
    if (!ids.insert(t.id).second) add(ViolationKind::DuplicateId, "task " + t.id);
    if (!t.resources.valid())
      add(ViolationKind::InvalidResources, "task " + t.id);
    if (t.expected_duration_s && *t.expected_duration_s <= 0.0)
      add(ViolationKind::InvalidResources,
          "task " + t.id + ": expected_duration must be positive");
    if (t.max_response_time_slo_s && *t.max_response_time_slo_s <= 0.0)
      add(ViolationKind::InvalidResources,
          "task " + t.id + ": max_response_time_slo must be positive");
  }
  for (const auto& d : dag.data_sources) {
    if (!ids.insert(d.id).second)
      add(ViolationKind::DuplicateId, "data source " + d.id);
  }

  for (const auto& e : dag.edges) {
    bool src_task = dag.find_task(e.source) != nullptr;
    bool src_ds = dag.find_data_source(e.source) != nullptr;
    if (!src_task && !src_ds)
      add(ViolationKind::DanglingEdge, e.source + " -> " + e.target);
    if (!dag.find_task(e.target)) {
      if (dag.find_data_source(e.target))
        add(ViolationKind::EdgeTargetNotTask, e.source + " -> " + e.target);
      else
        add(ViolationKind::DanglingEdge, e.source + " -> " + e.target);
    }
    if (e.slo && !e.slo->valid())
      add(ViolationKind::SloOutOfRange, e.source + " -> " + e.target);
  }

  for (const auto& [task, node] : dag.placements) {
    if (!dag.find_task(task))
      add(ViolationKind::DanglingPlacement, task + " -> " + node);
  }

  // cycle detection over task->task edges
  try {
    (void)dag.topological_order();
  } catch (const ConfigError&) {
    add(ViolationKind::Cycle, "task graph");
  }

  return report;
}

}  // namespace hyperdrive
