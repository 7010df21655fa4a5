#include "hyperdrive/orchestrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hyperdrive/errors.hpp"
#include "hyperdrive/scheduler.hpp"

namespace hyperdrive {

namespace {

void deduct(ResourceSpec& free, const ResourceSpec& demand) {
  free.cpu_millicores -= demand.cpu_millicores;
  free.memory_bytes -= demand.memory_bytes;
  free.gpu_cores -= demand.gpu_cores;
  free.local_storage_bytes -= demand.local_storage_bytes;
}

void restore(ResourceSpec& free, const ResourceSpec& demand) {
  free.cpu_millicores += demand.cpu_millicores;
  free.memory_bytes += demand.memory_bytes;
  free.gpu_cores += demand.gpu_cores;
  free.local_storage_bytes += demand.local_storage_bytes;
}

constexpr std::array<NodeKind, kNodeKindCount> kKindOrder = {
    NodeKind::Cloud, NodeKind::Edge, NodeKind::GroundStation,
    NodeKind::Satellite};

int kind_index(NodeKind k) {
  for (int i = 0; i < kNodeKindCount; ++i)
    if (kKindOrder[i] == k) return i;
  return 0;
}

// Per-kind sample targets: quota shares first, then the shortfall
// redistributed proportionally to quotas of kinds with spare supply
// (largest-remainder rounding, kind order breaking ties).
std::array<int, kNodeKindCount> quota_targets(
    const std::array<int, kNodeKindCount>& supply,
    const std::array<double, kNodeKindCount>& quota, int size) {
  std::array<int, kNodeKindCount> target{};
  int assigned = 0;
  for (int k = 0; k < kNodeKindCount; ++k) {
    target[k] = std::min(supply[k],
                         static_cast<int>(std::floor(quota[k] * size)));
    assigned += target[k];
  }
  int remaining = size - assigned;
  while (remaining > 0) {
    std::array<double, kNodeKindCount> weight{};
    double wsum = 0.0;
    for (int k = 0; k < kNodeKindCount; ++k) {
      if (supply[k] > target[k]) {
        weight[k] = quota[k];
        wsum += quota[k];
      }
    }
    if (wsum == 0.0) {
      // only zero-quota kinds have spare supply; fall back to supply shares
      for (int k = 0; k < kNodeKindCount; ++k) {
        if (supply[k] > target[k]) {
          weight[k] = static_cast<double>(supply[k] - target[k]);
          wsum += weight[k];
        }
      }
    }
    if (wsum == 0.0) break;  // everything exhausted

    std::array<int, kNodeKindCount> add{};
    std::array<double, kNodeKindCount> frac{};
    int added = 0;
    for (int k = 0; k < kNodeKindCount; ++k) {
      double share = remaining * weight[k] / wsum;
      add[k] = std::min(static_cast<int>(std::floor(share)),
                        supply[k] - target[k]);
      frac[k] = share - std::floor(share);
      added += add[k];
    }
    // hand out the rounding remainder by largest fraction
    int leftover = remaining - added;
    while (leftover > 0) {
      int best = -1;
      for (int k = 0; k < kNodeKindCount; ++k) {
        if (supply[k] - target[k] - add[k] <= 0) continue;
        if (best < 0 || frac[k] > frac[best]) best = k;
      }
      if (best < 0) break;
      add[best]++;
      frac[best] = -1.0;
      leftover--;
    }
    added = 0;
    for (int k = 0; k < kNodeKindCount; ++k) {
      target[k] += add[k];
      added += add[k];
    }
    if (added == 0) break;
    remaining -= added;
  }
  return target;
}

}  // namespace

Orchestrator::Orchestrator(Infrastructure infra) : infra_(std::move(infra)) {
  node_mu_.reserve(infra_.nodes().size());
  for (std::size_t i = 0; i < infra_.nodes().size(); ++i)
    node_mu_.push_back(std::make_unique<std::mutex>());
}

CommitStatus Orchestrator::try_commit(const CommitRequest& req) {
  int idx = infra_.index_of(req.node);
  if (idx < 0) throw LookupError("unknown node: " + req.node);
  {
    std::lock_guard lock(placements_mu_);
    if (placements_.count(req.task))
      throw LookupError("task already committed: " + req.task);
  }
  if (injection_.probability > 0.0) {
    double u = hash01(hash_mix(injection_.seed,
                               hash_mix(hash_str(req.task), hash_str(req.node))));
    if (u < injection_.probability) return CommitStatus::Conflict;
  }
  {
    std::lock_guard lock(*node_mu_[idx]);
    NodeRecord& node = infra_.nodes_mutable()[idx];
    if (!node.schedulable || !filter_resources(req.resources, node))
      return CommitStatus::Conflict;
    deduct(node.resources.free, req.resources);
  }
  {
    std::lock_guard lock(placements_mu_);
    placements_.emplace(req.task, std::make_pair(req.node, req.resources));
  }
  return CommitStatus::Committed;
}

ResourceSpec Orchestrator::release(const TaskId& task) {
  std::pair<NodeId, ResourceSpec> placement;
  {
    std::lock_guard lock(placements_mu_);
    auto it = placements_.find(task);
    if (it == placements_.end())
      throw LookupError("no active placement for task: " + task);
    placement = it->second;
    placements_.erase(it);
  }
  int idx = infra_.index_of(placement.first);
  {
    std::lock_guard lock(*node_mu_[idx]);
    restore(infra_.nodes_mutable()[idx].resources.free, placement.second);
  }
  return placement.second;
}

std::vector<NodeRecord> Orchestrator::sample_nodes(
    const Eigen::Vector3d& anchor_km, const VicinityConfig& cfg,
    Rng& rng) const {
  std::array<std::vector<int>, kNodeKindCount> buckets;
  const auto& nodes = infra_.nodes();
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    const auto& n = nodes[i];
    if (!n.schedulable) continue;
    if ((n.position_km - anchor_km).norm() <= cfg.radius_for(n.kind))
      buckets[kind_index(n.kind)].push_back(i);
  }
  int total = 0;
  for (const auto& b : buckets) total += static_cast<int>(b.size());

  std::vector<int> chosen;
  if (total <= cfg.candidate_set_size) {
    for (const auto& b : buckets) chosen.insert(chosen.end(), b.begin(), b.end());
  } else {
    std::array<int, kNodeKindCount> supply{};
    std::array<double, kNodeKindCount> quota{};
    for (int k = 0; k < kNodeKindCount; ++k) {
      supply[k] = static_cast<int>(buckets[k].size());
      quota[k] = cfg.quota_for(kKindOrder[k]);
    }
    auto target = quota_targets(supply, quota, cfg.candidate_set_size);
    for (int k = 0; k < kNodeKindCount; ++k) {
      auto& bucket = buckets[k];
      int take = std::min(target[k], supply[k]);
      // partial Fisher-Yates: uniform sample without replacement
      for (int j = 0; j < take; ++j) {
        std::size_t pick = j + rng.uniform_index(bucket.size() - j);
        std::swap(bucket[j], bucket[pick]);
        chosen.push_back(bucket[j]);
      }
    }
  }

  std::vector<NodeRecord> snapshots;
  snapshots.reserve(chosen.size());
  for (int idx : chosen) {
    std::lock_guard lock(*node_mu_[idx]);
    snapshots.push_back(nodes[idx]);
  }
  return snapshots;
}

void Orchestrator::set_conflict_injection(const ConflictInjection& injection) {
  injection_ = injection;
}

std::map<TaskId, std::pair<NodeId, ResourceSpec>> Orchestrator::placements()
    const {
  std::lock_guard lock(placements_mu_);
  return placements_;
}

void Orchestrator::add_committed_heat(const NodeId& node, double delta_c) {
  int idx = infra_.index_of(node);
  if (idx < 0) throw LookupError("unknown node: " + node);
  std::lock_guard lock(*node_mu_[idx]);
  infra_.nodes_mutable()[idx].thermal_state.accumulated_exc_c += delta_c;
}

bool Orchestrator::capacities_valid() const {
  for (int i = 0; i < static_cast<int>(infra_.nodes().size()); ++i) {
    std::lock_guard lock(*node_mu_[i]);
    if (!infra_.nodes()[i].resources.valid()) return false;
  }
  return true;
}

bool Orchestrator::conservation_holds() const {
  std::map<NodeId, ResourceSpec> committed;
  {
    std::lock_guard lock(placements_mu_);
    for (const auto& [task, placement] : placements_)
      restore(committed[placement.first], placement.second);
  }
  for (int i = 0; i < static_cast<int>(infra_.nodes().size()); ++i) {
    std::lock_guard lock(*node_mu_[i]);
    const auto& n = infra_.nodes()[i];
    if (!n.resources.valid()) return false;
    ResourceSpec used = committed.count(n.id) ? committed.at(n.id) : ResourceSpec{};
    const auto& total = n.resources.total;
    const auto& free = n.resources.free;
    if (free.cpu_millicores + used.cpu_millicores != total.cpu_millicores)
      return false;
    if (free.memory_bytes + used.memory_bytes != total.memory_bytes)
      return false;
    if (free.gpu_cores + used.gpu_cores != total.gpu_cores) return false;
    if (free.local_storage_bytes + used.local_storage_bytes !=
        total.local_storage_bytes)
      return false;
  }
  return true;
}

}  // namespace hyperdrive
