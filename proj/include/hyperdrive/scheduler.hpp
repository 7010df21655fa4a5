#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperdrive/netgraph.hpp"
#include "hyperdrive/orchestrator.hpp"
#include "hyperdrive/thermal.hpp"
#include "hyperdrive/workflow.hpp"

namespace hyperdrive {

struct ScoreBreakdown {
  double latency_raw_ms = 0.0;  // worst incoming-objective path latency
  double latency_score = 0.0;   // normalized to [0,100]
  double temperature_score = 0.0;
  double aggregate = 0.0;
};

enum class ScheduleOutcome { Committed, Failed };

struct SchedulingDecision {
  TaskId task;
  NodeId node;  // empty when Failed
  int candidate_count = 0;
  int eligible_count = 0;
  std::map<NodeId, ScoreBreakdown> scores;  // eligible nodes, final round
  int commit_attempts = 0;
  int restarts = 0;
  double wall_ms = 0.0;
  ScheduleOutcome outcome = ScheduleOutcome::Failed;
  std::string failure_reason;
};

struct SchedulerConfig {
  VicinityConfig vicinity;
  ThermalEnvConfig thermal_env;
  double latency_weight = 1.0;
  double temperature_weight = 1.0;
  int commit_attempts = 3;
  int max_restarts = 2;
  double sim_step_s = 10.0;
};

/// Location anchor for candidate selection: the task's preferred location,
/// else the host of its first placed predecessor task. Throws
/// SchedulingError when neither resolves.
Eigen::Vector3d resolve_anchor(const WorkflowTask& task,
                               const WorkflowDag& dag,
                               const Infrastructure& infra);

/// Vicinity preselection; delegates the sampling to the orchestrator.
std::vector<NodeRecord> select_candidates(const WorkflowTask& task,
                                          const WorkflowDag& dag,
                                          const Orchestrator& orch,
                                          const VicinityConfig& cfg,
                                          Rng& rng);

/// Hard resource constraint: demand fits the node's free capacity
/// componentwise, the architecture matches, and a battery-powered node has
/// at least the requested charge.
bool filter_resources(const ResourceSpec& demand, const NodeRecord& node);
bool filter_resources(const WorkflowTask& task, const NodeRecord& node);

/// Network objective filter over the task's incoming links (predecessor
/// tasks and data sources). Absent QoS (disconnected) rejects; links
/// without an objective never reject. Throws SchedulingError when a
/// predecessor task is unplaced.
bool filter_network_slos(const WorkflowTask& task, const NodeId& candidate,
                         const WorkflowDag& dag, const NetworkGraph& graph);

struct LatencyScores {
  std::map<NodeId, double> raw_worst_ms;
  std::map<NodeId, double> normalized;
};

/// Raw metric per node: the highest latency among its incoming-objective
/// paths. Normalization maps the lowest raw value to 100 and the highest to
/// 0; a degenerate spread scores every node 100.
LatencyScores score_network_latency(const WorkflowTask& task,
                                    std::span<const NodeId> eligible,
                                    const WorkflowDag& dag,
                                    const NetworkGraph& graph);

struct MultiCommitResult {
  std::optional<NodeId> node;
  int attempts = 0;
};

/// Tries the ranked nodes in order (at most max_attempts); the first
/// successful commit updates dag.placements.
MultiCommitResult multi_commit(std::span<const NodeId> ranked,
                               const WorkflowTask& task, WorkflowDag& dag,
                               Orchestrator& orch, int max_attempts = 3,
                               const std::string& scheduler_id = "");

/// Full pipeline: vicinity selection, resource filter, network-objective
/// filter, latency + temperature scoring, unweighted aggregation, and
/// multi-commit over the ranked nodes. Three failed commit attempts restart
/// the pipeline with a fresh sample, at most cfg.max_restarts times.
SchedulingDecision schedule_task(const WorkflowTask& task, WorkflowDag& dag,
                                 Orchestrator& orch,
                                 const NetworkGraph& graph,
                                 const SchedulerConfig& cfg,
                                 std::uint64_t pipeline_seed, double t_now_s);

/// Harness-facing interface shared by the main scheduler and the baselines.
class TaskScheduler {
 public:
  virtual ~TaskScheduler() = default;
  virtual const std::string& name() const = 0;
  virtual SchedulingDecision schedule(const WorkflowTask& task,
                                      WorkflowDag& dag, Orchestrator& orch,
                                      const NetworkGraph& graph,
                                      double t_now_s) = 0;
};

class HyperDriveScheduler : public TaskScheduler {
 public:
  HyperDriveScheduler(SchedulerConfig cfg, std::uint64_t seed);
  const std::string& name() const override;
  SchedulingDecision schedule(const WorkflowTask& task, WorkflowDag& dag,
                              Orchestrator& orch, const NetworkGraph& graph,
                              double t_now_s) override;

 private:
  SchedulerConfig cfg_;
  std::uint64_t seed_;
};

/// Uniform choice among resource-feasible nodes. Consults neither network
/// objectives nor temperature.
class RandomScheduler : public TaskScheduler {
 public:
  explicit RandomScheduler(std::uint64_t seed);
  const std::string& name() const override;
  SchedulingDecision schedule(const WorkflowTask& task, WorkflowDag& dag,
                              Orchestrator& orch, const NetworkGraph& graph,
                              double t_now_s) override;

 private:
  Rng rng_;
};

/// First resource-feasible node in stable node-id order.
class FirstFitScheduler : public TaskScheduler {
 public:
  FirstFitScheduler() = default;
  const std::string& name() const override;
  SchedulingDecision schedule(const WorkflowTask& task, WorkflowDag& dag,
                              Orchestrator& orch, const NetworkGraph& graph,
                              double t_now_s) override;
};

/// Next resource-feasible node in stable order from a persistent cursor.
class RoundRobinScheduler : public TaskScheduler {
 public:
  RoundRobinScheduler() = default;
  const std::string& name() const override;
  SchedulingDecision schedule(const WorkflowTask& task, WorkflowDag& dag,
                              Orchestrator& orch, const NetworkGraph& graph,
                              double t_now_s) override;

 private:
  std::size_t cursor_ = 0;
};

/// Factory for "hyperdrive", "random", "first_fit", "round_robin".
/// Throws ConfigError for an unknown name.
std::unique_ptr<TaskScheduler> make_scheduler(const std::string& name,
                                              const SchedulerConfig& cfg,
                                              std::uint64_t seed);

}  // namespace hyperdrive
