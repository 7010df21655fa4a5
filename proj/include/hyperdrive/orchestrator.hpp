#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hyperdrive/infrastructure.hpp"
#include "hyperdrive/rng.hpp"
#include "hyperdrive/types.hpp"

namespace hyperdrive {

struct CommitRequest {
  TaskId task;
  NodeId node;
  ResourceSpec resources;  // must equal the task's declared demand
  std::string scheduler_id;
};

enum class CommitStatus { Committed, Conflict };

/// Deterministic adversary standing in for rival scheduler instances: with
/// the configured probability (a pure function of task and node), the
/// requested node is treated as just claimed and the commit conflicts.
struct ConflictInjection {
  double probability = 0.0;
  std::uint64_t seed = 0;
};

/// In-memory authority over node state. Commits are linearizable per node:
/// each node has its own lock, and try_commit re-checks resources against
/// the live free capacity before deducting.
class Orchestrator {
 public:
  explicit Orchestrator(Infrastructure infra);

  const Infrastructure& infra() const { return infra_; }
  /// Clock advancement only; single writer by contract.
  Infrastructure& infra_mutable() { return infra_; }

  /// Atomic re-check and deduct. Returns Conflict without side effects when
  /// the node can no longer host the request. Throws LookupError for an
  /// unknown node or an already-committed task.
  CommitStatus try_commit(const CommitRequest& req);

  /// Returns the node's resources; free <= total is preserved. Throws
  /// LookupError when the task has no active placement (double release).
  ResourceSpec release(const TaskId& task);

  /// Point-in-time snapshots of schedulable nodes within the per-kind
  /// vicinity radii of the anchor, sampled per kind to meet the quotas.
  /// Snapshots go stale as rivals commit; that staleness is the conflict
  /// source multi-commit absorbs.
  std::vector<NodeRecord> sample_nodes(const Eigen::Vector3d& anchor_km,
                                       const VicinityConfig& cfg,
                                       Rng& rng) const;

  void set_conflict_injection(const ConflictInjection& injection);

  std::map<TaskId, std::pair<NodeId, ResourceSpec>> placements() const;

  /// Records committed computational heat on a node for post-hoc audit.
  void add_committed_heat(const NodeId& node, double delta_c);

  /// free + committed == total on every node (call at quiescent points).
  bool conservation_holds() const;

  /// 0 <= free <= total per node; safe to call while commits are in flight.
  bool capacities_valid() const;

 private:
  Infrastructure infra_;
  mutable std::vector<std::unique_ptr<std::mutex>> node_mu_;
  mutable std::mutex placements_mu_;
  std::map<TaskId, std::pair<NodeId, ResourceSpec>> placements_;
  ConflictInjection injection_;
};

}  // namespace hyperdrive
