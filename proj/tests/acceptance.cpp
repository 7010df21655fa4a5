// Acceptance suite. Runs the full default experiment matrix plus the
// oracle-based properties and prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>
#include <vector>

#include "hyperdrive/experiment.hpp"
#include "hyperdrive/scenario.hpp"
#include "oracles.hpp"

using namespace hyperdrive;

namespace {

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<Criterion> g_results;

void report(const std::string& name, bool pass, const std::string& detail) {
  g_results.push_back({name, pass, detail});
  std::printf("%s  %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

double now_s() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// ---- criteria 1-5: full matrix checks ------------------------------------

void matrix_criteria() {
  auto cfg = ScenarioConfig::wildfire_default();
  double started = now_s();
  // serial so that per-task wall-clock measurements do not contend for cores
  auto records = run_experiment(cfg, 1);
  double elapsed = now_s() - started;

  bool in_budget = elapsed < 1800.0;
  std::size_t expected_cells =
      cfg.schedulers.size() * cfg.sizes.size() * cfg.seeds.size();
  bool full_matrix = records.size() == expected_cells;

  auto checks = run_checks(records);
  // run_checks order: e2e-ordering, slo-compliance, eo-data-slo,
  // overheating, scalability
  const char* names[] = {"1. scheduler ordering", "2. objective compliance",
                         "3. eo data latency", "4. overheating avoidance",
                         "5. scheduling-time scalability"};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string detail = checks[i].detail;
    bool pass = checks[i].pass;
    if (i == 0) {
      std::ostringstream os;
      os << detail << "; " << records.size() << "/" << expected_cells
         << " cells, matrix wall " << elapsed << " s (budget 1800)";
      detail = os.str();
      pass = pass && in_budget && full_matrix;
    }
    report(names[i], pass, detail);
  }
}

// ---- criterion 6: pipeline oracle equivalence -----------------------------

void pipeline_oracle_criterion() {
  double started = now_s();
  Rng rng(20240917);
  int agreements = 0, instances = 0, scheduled = 0;

  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<NodeRecord> nodes;
    int idx = 0;
    auto next_id = [&] {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "n%06d", idx++);
      return std::string(buf);
    };
    for (const auto& seed : build_constellation({2, 3, 550.0, 53.0, 10.0})) {
      NodeRecord n;
      n.id = next_id();
      n.name = n.id;
      n.kind = NodeKind::Satellite;
      n.orbit = seed.orbit;
      n.plane = seed.plane;
      n.slot = seed.slot;
      n.position_km = propagate(seed.orbit, 0.0);
      n.resources.total.cpu_millicores = 2000 + 1000 * rng.uniform_index(6);
      n.resources.total.memory_bytes = (1LL + rng.uniform_index(8)) << 30;
      n.resources.total.gpu_cores = rng.uniform_index(3);
      n.resources.free = n.resources.total;
      n.resources.battery_charge = rng.uniform_real(0.2, 1.0);
      n.thermal_state.current_temp_c = rng.uniform_real(-10.0, 80.0);
      nodes.push_back(std::move(n));
    }
    int terrestrial = 4 + static_cast<int>(rng.uniform_index(15));  // <= 25 total
    for (int i = 0; i < terrestrial; ++i) {
      NodeRecord n;
      n.id = next_id();
      n.name = n.id;
      n.kind = rng.chance(0.25) ? NodeKind::Cloud : NodeKind::Edge;
      n.position_km = GeoPosition::from_lat_lon_alt(
                          rng.uniform_real(20.0, 50.0),
                          rng.uniform_real(-130.0, -100.0), 0.0)
                          .ecef_km;
      n.resources.total.cpu_millicores = 1000 + 1000 * rng.uniform_index(8);
      n.resources.total.memory_bytes = (1LL + rng.uniform_index(16)) << 30;
      n.resources.total.gpu_cores = rng.uniform_index(4);
      n.resources.free = n.resources.total;
      nodes.push_back(std::move(n));
    }

    Infrastructure infra(nodes);
    double t_now = rng.uniform_real(0.0, 6000.0);
    ThermalEnvConfig env;
    infra.advance_to(t_now, env);
    TopologyConfig topo;
    topo.terrestrial_seed = rng.next();
    auto graph = build_topology(infra, topo);

    WorkflowDag dag;
    WorkflowTask pred;
    pred.id = "pred";
    dag.tasks.push_back(pred);
    WorkflowTask task;
    task.id = "task";
    task.resources.cpu_millicores = 500 + 500 * rng.uniform_index(8);
    task.resources.memory_bytes = (1LL + rng.uniform_index(6)) << 30;
    if (rng.chance(0.25)) task.resources.gpu_cores = 1;
    if (rng.chance(0.2)) task.resources.min_battery_charge = rng.uniform_real(0, 1);
    if (rng.chance(0.7))
      task.expected_duration_s = rng.uniform_real(60.0, 1200.0);
    else if (rng.chance(0.5))
      task.max_response_time_slo_s = rng.uniform_real(60.0, 600.0);
    if (rng.chance(0.5))
      task.preferred_location = LatLonAlt{rng.uniform_real(20.0, 50.0),
                                          rng.uniform_real(-130.0, -100.0), 0.0};
    dag.tasks.push_back(task);
    dag.placements["pred"] = nodes[rng.uniform_index(nodes.size())].id;
    if (rng.chance(0.4)) {
      dag.data_sources.push_back(
          {"ds", nodes[rng.uniform_index(nodes.size())].id});
      NetworkSlo ds_slo;
      ds_slo.max_latency_ms = rng.uniform_real(20.0, 250.0);
      dag.edges.push_back({"ds", "task", ds_slo});
    }
    NetworkSlo slo;
    if (rng.chance(0.8)) slo.max_latency_ms = rng.uniform_real(10.0, 220.0);
    if (rng.chance(0.2)) slo.min_bandwidth_bps = rng.uniform_real(1e9, 3e10);
    dag.edges.push_back({"pred", "task", slo});

    SchedulerConfig cfg;
    cfg.vicinity.cloud_radius_km = 1e9;
    cfg.vicinity.edge_radius_km = 1e9;
    cfg.vicinity.ground_station_radius_km = 1e9;
    cfg.vicinity.satellite_radius_km = 1e9;

    auto oracle = oracles::brute_force_choice(dag.tasks[1], dag, infra, graph,
                                              cfg, t_now);
    Orchestrator orch{Infrastructure{nodes}};
    orch.infra_mutable().advance_to(t_now, env);
    WorkflowDag live = dag;
    auto decision =
        schedule_task(dag.tasks[1], live, orch, graph, cfg, rng.next(), t_now);

    ++instances;
    bool agree;
    if (oracle.node) {
      agree = decision.outcome == ScheduleOutcome::Committed &&
              decision.node == *oracle.node &&
              decision.eligible_count == oracle.eligible;
      ++scheduled;
    } else {
      agree = decision.outcome == ScheduleOutcome::Failed;
    }
    if (agree) ++agreements;
  }

  double elapsed = now_s() - started;
  std::ostringstream os;
  os << agreements << "/" << instances << " agreements (" << scheduled
     << " schedulable) in " << elapsed << " s (budget 60)";
  report("6. pipeline oracle equivalence",
         agreements == instances && elapsed < 60.0, os.str());
}

// ---- criterion 7: path oracle ---------------------------------------------

void path_oracle_criterion() {
  Rng rng(777);
  int graphs = 0, mismatches = 0;
  double worst_rel = 0.0;
  while (graphs < 500) {
    auto g = oracles::random_graph(rng);
    ++graphs;
    for (int u = 0; u < g.node_count(); ++u) {
      for (int v = u + 1; v < g.node_count(); ++v) {
        auto oracle = oracles::enumerate_best_path(g, u, v);
        auto impl = lowest_latency_path(g, g.id(u), g.id(v));
        if (oracle.has_value() != impl.has_value()) {
          ++mismatches;
          continue;
        }
        if (!oracle) continue;
        if (impl->qos.latency_ms != oracle->latency_ms ||
            impl->node_path != oracle->nodes) {
          ++mismatches;
          continue;
        }
        auto rel = [](double a, double b) {
          double scale = std::max({1.0, std::abs(a), std::abs(b)});
          return std::abs(a - b) / scale;
        };
        worst_rel = std::max(worst_rel,
                             rel(impl->qos.bandwidth_bps, oracle->qos.bandwidth_bps));
        worst_rel =
            std::max(worst_rel, rel(impl->qos.jitter_ms, oracle->qos.jitter_ms));
        worst_rel = std::max(
            worst_rel, rel(impl->qos.packet_drop, oracle->qos.packet_drop));
      }
    }
  }
  std::ostringstream os;
  os << graphs << " graphs, " << mismatches
     << " path mismatches, worst qos relative error " << worst_rel;
  report("7. path oracle", mismatches == 0 && worst_rel <= 1e-12, os.str());
}

// ---- criterion 8: temperature score conformance ----------------------------

void calc_score_criterion() {
  bool branches = calc_score(70.0, 75.0, 85.0) == 100 &&
                  calc_score(86.0, 75.0, 85.0) == 0 &&
                  calc_score(80.0, 75.0, 85.0) == 50;
  bool monotone = true;
  int prev = 100;
  for (int i = 0; i <= 1000; ++i) {
    double temp = 40.0 + i * (60.0 / 1000.0);
    int score = calc_score(temp, 55.0, 75.0);
    if (score > prev || score < 0 || score > 100) monotone = false;
    prev = score;
  }
  std::ostringstream os;
  os << "branches (70/86/80 -> 100/0/50): " << (branches ? "ok" : "bad")
     << ", 1000-point sweep monotone: " << (monotone ? "ok" : "bad");
  report("8. temperature score conformance", branches && monotone, os.str());
}

// ---- criterion 9: commit safety --------------------------------------------

void commit_safety_criterion() {
  // randomized interleavings: 4 actors, 10,000 operations total
  bool capacities_ok = true;
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < 6; ++i) {
    NodeRecord n;
    char id[16];
    std::snprintf(id, sizeof(id), "n%06d", i);
    n.id = id;
    n.name = id;
    n.kind = NodeKind::Edge;
    n.resources.total.cpu_millicores = 8000;
    n.resources.total.memory_bytes = 1LL << 30;
    n.resources.free = n.resources.total;
    nodes.push_back(std::move(n));
  }
  Orchestrator orch{Infrastructure{nodes}};
  {
    constexpr int kThreads = 4;
    constexpr int kOps = 2500;  // per actor
    std::vector<std::thread> pool;
    std::atomic<bool> ok{true};
    for (int t = 0; t < kThreads; ++t) {
      pool.emplace_back([&, t] {
        Rng rng(5000 + t);
        std::vector<std::string> mine;
        for (int op = 0; op < kOps; ++op) {
          if (!mine.empty() && rng.chance(0.45)) {
            std::size_t pick = rng.uniform_index(mine.size());
            orch.release(mine[pick]);
            mine.erase(mine.begin() + pick);
          } else {
            std::string task =
                "t" + std::to_string(t) + "_" + std::to_string(op);
            std::string node = "n00000" + std::to_string(rng.uniform_index(6));
            ResourceSpec d;
            d.cpu_millicores = 400 + 200 * rng.uniform_index(12);
            d.memory_bytes = 1LL << rng.uniform_index(20);
            if (orch.try_commit({task, node, d, "actor"}) ==
                CommitStatus::Committed)
              mine.push_back(task);
          }
          if ((op & 63) == 0 && !orch.capacities_valid()) ok = false;
        }
        for (const auto& task : mine) orch.release(task);
      });
    }
    for (auto& th : pool) th.join();
    capacities_ok = ok && orch.conservation_holds();
  }

  // conflict injection: rescheduling events with multi-commit never exceed
  // the single-commit variant on identical seeds
  bool multi_bounded = true;
  int total_multi = 0, total_single = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto run_variant = [&](int attempts) {
      std::vector<NodeRecord> small;
      for (int i = 0; i < 8; ++i) {
        NodeRecord n;
        char id[16];
        std::snprintf(id, sizeof(id), "n%06d", i);
        n.id = id;
        n.name = id;
        n.kind = NodeKind::Edge;
        n.resources.total.cpu_millicores = 64000;
        n.resources.total.memory_bytes = 1LL << 34;
        n.resources.free = n.resources.total;
        small.push_back(std::move(n));
      }
      Orchestrator o{Infrastructure{std::move(small)}};
      o.set_conflict_injection({0.55, seed});
      SchedulerConfig cfg;
      cfg.vicinity.cloud_radius_km = 1e9;
      cfg.vicinity.edge_radius_km = 1e9;
      cfg.vicinity.ground_station_radius_km = 1e9;
      cfg.vicinity.satellite_radius_km = 1e9;
      cfg.commit_attempts = attempts;
      cfg.max_restarts = 2;
      NetworkGraph empty_graph = NetworkGraph::from_links(
          [&] {
            std::vector<std::string> ids;
            for (const auto& n : o.infra().nodes()) ids.push_back(n.id);
            return ids;
          }(),
          {});
      int reschedules = 0;
      for (int k = 0; k < 40; ++k) {
        WorkflowDag dag;
        WorkflowTask task;
        task.id = "w" + std::to_string(seed) + "_" + std::to_string(k);
        task.resources.cpu_millicores = 100;
        task.preferred_location = LatLonAlt{0.0, 0.0, 0.0};
        dag.tasks.push_back(task);
        auto decision =
            schedule_task(dag.tasks[0], dag, o, empty_graph, cfg,
                          hash_mix(seed, k), 0.0);
        reschedules += decision.restarts;
        if (decision.outcome == ScheduleOutcome::Failed) reschedules += 1;
      }
      return reschedules;
    };
    int multi = run_variant(3);
    int single = run_variant(1);
    total_multi += multi;
    total_single += single;
    if (multi > single) multi_bounded = false;
  }

  std::ostringstream os;
  os << "interleavings: " << (capacities_ok ? "conserved" : "violated")
     << "; rescheduling events multi=" << total_multi
     << " single=" << total_single;
  report("9. commit safety", capacities_ok && multi_bounded, os.str());
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  matrix_criteria();
  pipeline_oracle_criterion();
  path_oracle_criterion();
  calc_score_criterion();
  commit_safety_criterion();

  int failed = 0;
  for (const auto& c : g_results)
    if (!c.pass) ++failed;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
              g_results.size());
  return failed == 0 ? 0 : 1;
}
