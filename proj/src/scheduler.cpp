#include "hyperdrive/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <unordered_map>

#include "hyperdrive/errors.hpp"

namespace hyperdrive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IncomingLink {
  std::string source;
  NodeId host;
  NetworkSlo slo;
};

// Incoming links of the task that carry a network objective, resolved to
// their host nodes. Throws when a predecessor task is unplaced.
std::vector<IncomingLink> incoming_slo_links(const WorkflowTask& task,
                                             const WorkflowDag& dag) {
  std::vector<IncomingLink> out;
  for (const auto& e : dag.edges) {
    if (e.target != task.id || !e.slo || e.slo->unconstrained()) continue;
    if (dag.find_task(e.source)) {
      auto it = dag.placements.find(e.source);
      if (it == dag.placements.end())
        throw SchedulingError("predecessor not placed: " + e.source);
      out.push_back({e.source, it->second, *e.slo});
    } else if (const auto* ds = dag.find_data_source(e.source)) {
      out.push_back({e.source, ds->host_node, *e.slo});
    } else {
      throw SchedulingError("edge source unknown: " + e.source);
    }
  }
  return out;
}

void require_predecessors_placed(const WorkflowTask& task,
                                 const WorkflowDag& dag) {
  for (const auto& e : dag.edges) {
    if (e.target != task.id || !dag.find_task(e.source)) continue;
    if (!dag.placements.count(e.source))
      throw SchedulingError("predecessor not placed: " + e.source);
  }
}

NetworkQos local_qos() { return NetworkQos{0.0, kInf, 0.0, 0.0}; }

}  // namespace

Eigen::Vector3d resolve_anchor(const WorkflowTask& task,
                               const WorkflowDag& dag,
                               const Infrastructure& infra) {
  if (task.preferred_location) {
    const auto& loc = *task.preferred_location;
    return GeoPosition::from_lat_lon_alt(loc.lat_deg, loc.lon_deg, loc.alt_km)
        .ecef_km;
  }
  for (const auto& e : dag.edges) {
    if (e.target != task.id || !dag.find_task(e.source)) continue;
    auto it = dag.placements.find(e.source);
    if (it == dag.placements.end()) continue;
    if (const NodeRecord* host = infra.find(it->second)) return host->position_km;
  }
  throw SchedulingError("unanchored task: " + task.id);
}

std::vector<NodeRecord> select_candidates(const WorkflowTask& task,
                                          const WorkflowDag& dag,
                                          const Orchestrator& orch,
                                          const VicinityConfig& cfg,
                                          Rng& rng) {
  Eigen::Vector3d anchor = resolve_anchor(task, dag, orch.infra());
  return orch.sample_nodes(anchor, cfg, rng);
}

bool filter_resources(const ResourceSpec& demand, const NodeRecord& node) {
  const ResourceSpec& free = node.resources.free;
  if (demand.cpu_millicores > free.cpu_millicores) return false;
  if (demand.memory_bytes > free.memory_bytes) return false;
  if (demand.gpu_cores > free.gpu_cores) return false;
  if (demand.local_storage_bytes > free.local_storage_bytes) return false;
  if (!demand.cpu_arch.empty() &&
      demand.cpu_arch != node.resources.total.cpu_arch)
    return false;
  if (node.resources.battery_charge &&
      *node.resources.battery_charge < demand.min_battery_charge)
    return false;
  return true;
}

bool filter_resources(const WorkflowTask& task, const NodeRecord& node) {
  return filter_resources(task.resources, node);
}

bool filter_network_slos(const WorkflowTask& task, const NodeId& candidate,
                         const WorkflowDag& dag, const NetworkGraph& graph) {
  for (const auto& link : incoming_slo_links(task, dag)) {
    NetworkQos qos;
    if (link.host == candidate) {
      qos = local_qos();
    } else {
      int ui = graph.index_of(link.host);
      int vi = graph.index_of(candidate);
      if (ui < 0 || vi < 0) return false;
      PathSource source(graph, ui);
      auto q = source.qos_to(vi);
      if (!q) return false;  // disconnected rejects
      qos = *q;
    }
    if (!qos_meets(qos, link.slo)) return false;
  }
  return true;
}

LatencyScores score_network_latency(const WorkflowTask& task,
                                    std::span<const NodeId> eligible,
                                    const WorkflowDag& dag,
                                    const NetworkGraph& graph) {
  LatencyScores scores;
  auto links = incoming_slo_links(task, dag);
  std::unordered_map<NodeId, std::unique_ptr<PathSource>> sources;
  for (const auto& link : links) {
    if (!sources.count(link.host)) {
      int idx = graph.index_of(link.host);
      if (idx >= 0)
        sources.emplace(link.host, std::make_unique<PathSource>(graph, idx));
      else
        sources.emplace(link.host, nullptr);
    }
  }

  for (const auto& id : eligible) {
    double worst = 0.0;
    for (const auto& link : links) {
      if (link.host == id) continue;  // co-located, zero latency
      const auto& src = sources.at(link.host);
      int vi = graph.index_of(id);
      double latency =
          (src && vi >= 0) ? src->latency_ms(vi) : kInf;
      worst = std::max(worst, latency);
    }
    scores.raw_worst_ms[id] = worst;
  }

  double lo = kInf, hi = -kInf;
  for (const auto& [id, raw] : scores.raw_worst_ms) {
    lo = std::min(lo, raw);
    hi = std::max(hi, raw);
  }
  for (const auto& [id, raw] : scores.raw_worst_ms) {
    scores.normalized[id] =
        (hi == lo) ? 100.0 : 100.0 * (hi - raw) / (hi - lo);
  }
  return scores;
}

MultiCommitResult multi_commit(std::span<const NodeId> ranked,
                               const WorkflowTask& task, WorkflowDag& dag,
                               Orchestrator& orch, int max_attempts,
                               const std::string& scheduler_id) {
  MultiCommitResult result;
  int tries = std::min<int>(max_attempts, static_cast<int>(ranked.size()));
  for (int i = 0; i < tries; ++i) {
    result.attempts++;
    CommitRequest req{task.id, ranked[i], task.resources, scheduler_id};
    if (orch.try_commit(req) == CommitStatus::Committed) {
      result.node = ranked[i];
      dag.placements[task.id] = ranked[i];
      return result;
    }
  }
  return result;
}

SchedulingDecision schedule_task(const WorkflowTask& task, WorkflowDag& dag,
                                 Orchestrator& orch,
                                 const NetworkGraph& graph,
                                 const SchedulerConfig& cfg,
                                 std::uint64_t pipeline_seed, double t_now_s) {
  auto started = std::chrono::steady_clock::now();
  SchedulingDecision decision;
  decision.task = task.id;
  decision.failure_reason = "no candidates in vicinity";

  require_predecessors_placed(task, dag);
  auto links = incoming_slo_links(task, dag);

  for (int restart = 0; restart <= cfg.max_restarts; ++restart) {
    decision.restarts = restart;
    Rng rng(hash_mix(pipeline_seed, hash_mix(hash_str(task.id), restart)));
    auto candidates = select_candidates(task, dag, orch, cfg.vicinity, rng);
    decision.candidate_count = static_cast<int>(candidates.size());
    if (candidates.empty()) {
      decision.failure_reason = "unschedulable: no candidates in vicinity";
      break;
    }

    // one path source per distinct objective-link host
    std::unordered_map<NodeId, std::unique_ptr<PathSource>> sources;
    for (const auto& link : links) {
      if (sources.count(link.host)) continue;
      int idx = graph.index_of(link.host);
      sources.emplace(link.host, idx >= 0
                                     ? std::make_unique<PathSource>(graph, idx)
                                     : nullptr);
    }

    struct Scored {
      const NodeRecord* node;
      ScoreBreakdown breakdown;
    };
    std::vector<Scored> eligible;
    for (const auto& cand : candidates) {
      if (!filter_resources(task.resources, cand)) continue;
      bool pass = true;
      double worst = 0.0;
      int ci = graph.index_of(cand.id);
      for (const auto& link : links) {
        NetworkQos qos;
        if (link.host == cand.id) {
          qos = local_qos();
        } else {
          const auto& src = sources.at(link.host);
          std::optional<NetworkQos> q =
              (src && ci >= 0) ? src->qos_to(ci) : std::nullopt;
          if (!q) {
            pass = false;
            break;
          }
          qos = *q;
        }
        if (!qos_meets(qos, link.slo)) {
          pass = false;
          break;
        }
        worst = std::max(worst, qos.latency_ms);
      }
      if (!pass) continue;
      Scored s;
      s.node = &cand;
      s.breakdown.latency_raw_ms = worst;
      eligible.push_back(s);
    }
    decision.eligible_count = static_cast<int>(eligible.size());
    if (eligible.empty()) {
      decision.failure_reason = "unschedulable: no eligible node";
      break;
    }

    double lo = kInf, hi = -kInf;
    for (const auto& s : eligible) {
      lo = std::min(lo, s.breakdown.latency_raw_ms);
      hi = std::max(hi, s.breakdown.latency_raw_ms);
    }
    decision.scores.clear();
    for (auto& s : eligible) {
      s.breakdown.latency_score =
          (hi == lo) ? 100.0
                     : 100.0 * (hi - s.breakdown.latency_raw_ms) / (hi - lo);
      s.breakdown.temperature_score = score_node_temperature(
          task, *s.node, cfg.thermal_env, t_now_s, cfg.sim_step_s);
      s.breakdown.aggregate =
          cfg.latency_weight * s.breakdown.latency_score +
          cfg.temperature_weight * s.breakdown.temperature_score;
      decision.scores[s.node->id] = s.breakdown;
    }

    std::sort(eligible.begin(), eligible.end(),
              [](const Scored& a, const Scored& b) {
                if (a.breakdown.aggregate != b.breakdown.aggregate)
                  return a.breakdown.aggregate > b.breakdown.aggregate;
                if (a.breakdown.latency_raw_ms != b.breakdown.latency_raw_ms)
                  return a.breakdown.latency_raw_ms < b.breakdown.latency_raw_ms;
                return a.node->id < b.node->id;
              });

    std::vector<NodeId> ranked;
    ranked.reserve(eligible.size());
    for (const auto& s : eligible) ranked.push_back(s.node->id);

    auto commit = multi_commit(ranked, task, dag, orch, cfg.commit_attempts,
                               "hyperdrive");
    decision.commit_attempts = commit.attempts;
    if (commit.node) {
      decision.node = *commit.node;
      decision.outcome = ScheduleOutcome::Committed;
      break;
    }
    decision.failure_reason = "unschedulable: commit attempts exhausted";
  }

  decision.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return decision;
}

HyperDriveScheduler::HyperDriveScheduler(SchedulerConfig cfg,
                                         std::uint64_t seed)
    : cfg_(std::move(cfg)), seed_(seed) {}

const std::string& HyperDriveScheduler::name() const {
  static const std::string n = "hyperdrive";
  return n;
}

SchedulingDecision HyperDriveScheduler::schedule(const WorkflowTask& task,
                                                 WorkflowDag& dag,
                                                 Orchestrator& orch,
                                                 const NetworkGraph& graph,
                                                 double t_now_s) {
  return schedule_task(task, dag, orch, graph, cfg_, seed_, t_now_s);
}

namespace {

// Shared baseline skeleton: pick among resource-feasible nodes in stable
// order, commit, advance on conflict.
SchedulingDecision baseline_schedule(
    const WorkflowTask& task, WorkflowDag& dag, Orchestrator& orch,
    const std::string& scheduler_id,
    const std::function<std::optional<std::size_t>(
        const std::vector<std::size_t>&)>& pick) {
  auto started = std::chrono::steady_clock::now();
  SchedulingDecision decision;
  decision.task = task.id;

  const auto& nodes = orch.infra().nodes();
  std::vector<std::size_t> feasible;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].schedulable && filter_resources(task.resources, nodes[i]))
      feasible.push_back(i);
  }
  decision.candidate_count = static_cast<int>(nodes.size());
  decision.eligible_count = static_cast<int>(feasible.size());

  if (feasible.empty()) {
    decision.failure_reason = "unschedulable: no resource-feasible node";
  } else {
    // bounded retries against commit conflicts
    for (int attempt = 0; attempt < 3 && !feasible.empty(); ++attempt) {
      auto choice = pick(feasible);
      if (!choice) break;
      decision.commit_attempts++;
      const NodeId& node = nodes[*choice].id;
      CommitRequest req{task.id, node, task.resources, scheduler_id};
      if (orch.try_commit(req) == CommitStatus::Committed) {
        decision.node = node;
        decision.outcome = ScheduleOutcome::Committed;
        dag.placements[task.id] = node;
        break;
      }
      std::erase(feasible, *choice);
    }
    if (decision.outcome != ScheduleOutcome::Committed)
      decision.failure_reason = "unschedulable: commit attempts exhausted";
  }

  decision.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return decision;
}

}  // namespace

RandomScheduler::RandomScheduler(std::uint64_t seed) : rng_(seed) {}

const std::string& RandomScheduler::name() const {
  static const std::string n = "random";
  return n;
}

SchedulingDecision RandomScheduler::schedule(const WorkflowTask& task,
                                             WorkflowDag& dag,
                                             Orchestrator& orch,
                                             const NetworkGraph&, double) {
  return baseline_schedule(
      task, dag, orch, name(),
      [this](const std::vector<std::size_t>& feasible)
          -> std::optional<std::size_t> {
        if (feasible.empty()) return std::nullopt;
        return feasible[rng_.uniform_index(feasible.size())];
      });
}

const std::string& FirstFitScheduler::name() const {
  static const std::string n = "first_fit";
  return n;
}

SchedulingDecision FirstFitScheduler::schedule(const WorkflowTask& task,
                                               WorkflowDag& dag,
                                               Orchestrator& orch,
                                               const NetworkGraph&, double) {
  return baseline_schedule(task, dag, orch, name(),
                           [](const std::vector<std::size_t>& feasible)
                               -> std::optional<std::size_t> {
                             if (feasible.empty()) return std::nullopt;
                             return feasible.front();
                           });
}

const std::string& RoundRobinScheduler::name() const {
  static const std::string n = "round_robin";
  return n;
}

SchedulingDecision RoundRobinScheduler::schedule(const WorkflowTask& task,
                                                 WorkflowDag& dag,
                                                 Orchestrator& orch,
                                                 const NetworkGraph&, double) {
  std::size_t node_count = orch.infra().nodes().size();
  return baseline_schedule(
      task, dag, orch, name(),
      [this, node_count](const std::vector<std::size_t>& feasible)
          -> std::optional<std::size_t> {
        if (feasible.empty() || node_count == 0) return std::nullopt;
        // next feasible node at or after the cursor, wrapping once
        for (std::size_t probe = 0; probe < node_count; ++probe) {
          std::size_t idx = (cursor_ + probe) % node_count;
          auto it = std::find(feasible.begin(), feasible.end(), idx);
          if (it != feasible.end()) {
            cursor_ = (idx + 1) % node_count;
            return *it;
          }
        }
        return std::nullopt;
      });
}

std::unique_ptr<TaskScheduler> make_scheduler(const std::string& name,
                                              const SchedulerConfig& cfg,
                                              std::uint64_t seed) {
  if (name == "hyperdrive")
    return std::make_unique<HyperDriveScheduler>(cfg, seed);
  if (name == "random") return std::make_unique<RandomScheduler>(seed);
  if (name == "first_fit") return std::make_unique<FirstFitScheduler>();
  if (name == "round_robin") return std::make_unique<RoundRobinScheduler>();
  throw ConfigError("unknown scheduler: " + name);
}

}  // namespace hyperdrive
