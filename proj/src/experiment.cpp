#include "hyperdrive/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "hyperdrive/errors.hpp"
#include "json.hpp"

namespace hyperdrive {

using nlohmann::json;

namespace {

std::string node_id_for(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "n%06d", index);
  return buf;
}

NodeResources resources_from_template(const NodeTemplate& tpl) {
  NodeResources r;
  r.total = tpl.capacity;
  r.free = tpl.capacity;
  r.battery_charge = tpl.battery_charge;
  return r;
}

const NodeTemplate& template_for(const ScenarioConfig& cfg,
                                 const std::string& name) {
  auto it = cfg.templates.find(name);
  if (it == cfg.templates.end())
    throw ConfigError("missing node template: " + name);
  return it->second;
}

// Node construction order fixes the stable id order the baselines scan:
// shell satellites first, then edge, cloud, ground stations, and the
// imaging satellite last.
Infrastructure build_infrastructure(const ScenarioConfig& cfg, int size,
                                    std::uint64_t seed, double t0_s) {
  SizeCounts counts = cfg.expand_size(size);
  ConstellationSpec shell = cfg.constellation;
  shell.sats_per_plane = counts.sats_per_plane;

  std::vector<NodeRecord> nodes;
  nodes.reserve(static_cast<std::size_t>(counts.satellites) + counts.edge +
                counts.cloud + 2);

  const auto& sat_tpl = template_for(cfg, "satellite");
  for (const auto& seed_sat : build_constellation(shell)) {
    NodeRecord n;
    n.id = node_id_for(static_cast<int>(nodes.size()));
    char name[32];
    std::snprintf(name, sizeof(name), "sat-p%02d-s%02d", seed_sat.plane,
                  seed_sat.slot);
    n.name = name;
    n.kind = NodeKind::Satellite;
    n.resources = resources_from_template(sat_tpl);
    n.orbit = seed_sat.orbit;
    n.plane = seed_sat.plane;
    n.slot = seed_sat.slot;
    n.thermal = sat_tpl.thermal;
    n.position_km = propagate(seed_sat.orbit, 0.0);
    n.thermal_state.sun_exposure = is_sunlit(n.position_km, 0.0) ? 1.0 : 0.0;
    n.thermal_state.current_temp_c =
        cfg.thermal_env.ambient_c(n.thermal_state.sun_exposure);
    nodes.push_back(std::move(n));
  }

  Rng rng(hash_mix(seed, hash_mix(static_cast<std::uint64_t>(size), 0xA11CE)));
  auto place_in_disc = [&](double radius_km) {
    double bearing = rng.uniform_real(0.0, 360.0);
    double dist = radius_km * std::sqrt(rng.uniform_real(0.0, 1.0));
    LatLonAlt p = geo_destination(cfg.region.lat_deg, cfg.region.lon_deg,
                                  bearing, dist);
    return GeoPosition::from_lat_lon_alt(p.lat_deg, p.lon_deg, 0.0).ecef_km;
  };

  const auto& edge_tpl = template_for(cfg, "edge");
  for (int i = 0; i < counts.edge; ++i) {
    NodeRecord n;
    n.id = node_id_for(static_cast<int>(nodes.size()));
    char name[32];
    std::snprintf(name, sizeof(name), "edge-%04d", i);
    n.name = name;
    n.kind = NodeKind::Edge;
    n.resources = resources_from_template(edge_tpl);
    n.thermal = edge_tpl.thermal;
    n.position_km = place_in_disc(cfg.region.edge_radius_km);
    nodes.push_back(std::move(n));
  }

  const auto& cloud_tpl = template_for(cfg, "cloud");
  for (int i = 0; i < counts.cloud; ++i) {
    NodeRecord n;
    n.id = node_id_for(static_cast<int>(nodes.size()));
    char name[32];
    std::snprintf(name, sizeof(name), "cloud-%03d", i);
    n.name = name;
    n.kind = NodeKind::Cloud;
    n.resources = resources_from_template(cloud_tpl);
    n.thermal = cloud_tpl.thermal;
    n.position_km = place_in_disc(cfg.region.cloud_radius_km);
    nodes.push_back(std::move(n));
  }

  const auto& ground_tpl = template_for(cfg, "ground_station");
  {
    NodeRecord n;
    n.id = node_id_for(static_cast<int>(nodes.size()));
    n.name = "drone";
    n.kind = NodeKind::GroundStation;
    n.resources = resources_from_template(ground_tpl);
    n.thermal = ground_tpl.thermal;
    n.position_km = GeoPosition::from_lat_lon_alt(cfg.region.lat_deg,
                                                  cfg.region.lon_deg, 0.0)
                        .ecef_km;
    nodes.push_back(std::move(n));
  }

  // Imaging satellite, overhead the region at the workflow trigger time.
  {
    const auto& eo_tpl = template_for(cfg, "eo");
    NodeRecord n;
    n.id = node_id_for(static_cast<int>(nodes.size()));
    n.name = "eo-0";
    n.kind = NodeKind::Satellite;
    n.schedulable = false;
    n.resources = resources_from_template(eo_tpl);
    n.thermal = eo_tpl.thermal;
    n.orbit = orbit_overhead(cfg.region.lat_deg, cfg.region.lon_deg,
                             cfg.eo.altitude_km, cfg.eo.inclination_deg, t0_s);
    n.position_km = propagate(*n.orbit, 0.0);
    n.thermal_state.sun_exposure = is_sunlit(n.position_km, 0.0) ? 1.0 : 0.0;
    n.thermal_state.current_temp_c =
        cfg.thermal_env.ambient_c(n.thermal_state.sun_exposure);
    nodes.push_back(std::move(n));
  }

  return Infrastructure(std::move(nodes));
}

// Resolve data-source hosts and pinned placements given by node name.
NodeId resolve_node_ref(const Infrastructure& infra, const std::string& ref) {
  if (const NodeRecord* byname = infra.find_by_name(ref)) return byname->id;
  if (const NodeRecord* byid = infra.find(ref)) return byid->id;
  throw ConfigError("cannot resolve node reference: " + ref);
}

struct EdgeProbe {
  bool connected = false;
  NetworkQos qos;
};

EdgeProbe probe_edge(const NetworkGraph& graph, const NodeId& from,
                     const NodeId& to) {
  EdgeProbe p;
  if (from == to) {
    p.connected = true;
    p.qos = NetworkQos{0.0, std::numeric_limits<double>::infinity(), 0.0, 0.0};
    return p;
  }
  int ui = graph.index_of(from);
  int vi = graph.index_of(to);
  if (ui < 0 || vi < 0) return p;
  PathSource source(graph, ui);
  auto qos = source.qos_to(vi);
  if (!qos) return p;
  p.connected = true;
  p.qos = *qos;
  return p;
}

double elapsed_offset_for_seed(const ScenarioConfig& cfg, std::uint64_t seed) {
  return cfg.scheduling.workflow_start_s +
         cfg.scheduling.seed_stagger_s * static_cast<double>(seed % 16);
}

json qos_to_json(const NetworkQos& q) {
  auto num = [](double v) -> json {
    return std::isfinite(v) ? json(v) : json();
  };
  return {{"latency_ms", num(q.latency_ms)},
          {"bandwidth_bps", num(q.bandwidth_bps)},
          {"jitter_ms", num(q.jitter_ms)},
          {"packet_drop", num(q.packet_drop)}};
}

NetworkQos qos_from_json(const json& j) {
  auto num = [&](const char* k) {
    return j.contains(k) && j[k].is_number()
               ? j[k].get<double>()
               : std::numeric_limits<double>::infinity();
  };
  return {num("latency_ms"), num("bandwidth_bps"), num("jitter_ms"),
          num("packet_drop")};
}

}  // namespace

ExperimentRecord run_cell(const ScenarioConfig& cfg,
                          const std::string& scheduler_name, int size,
                          std::uint64_t seed) {
  ExperimentRecord record;
  record.scheduler = scheduler_name;
  record.size = size;
  record.seed = seed;

  double t0 = elapsed_offset_for_seed(cfg, seed);
  Orchestrator orch(build_infrastructure(cfg, size, seed, t0));
  orch.infra_mutable().advance_to(t0, cfg.thermal_env);

  WorkflowDag dag = cfg.workflow;
  for (auto& ds : dag.data_sources)
    ds.host_node = resolve_node_ref(orch.infra(), ds.host_node);

  // pinned tasks consume real resources through the commit path
  for (const auto& [task_id, node_ref] : cfg.pinned) {
    const WorkflowTask* task = dag.find_task(task_id);
    if (!task) throw ConfigError("pinned task not in workflow: " + task_id);
    NodeId node = resolve_node_ref(orch.infra(), node_ref);
    CommitRequest req{task_id, node, task->resources, "pinned"};
    if (orch.try_commit(req) != CommitStatus::Committed)
      throw ConfigError("pinned placement does not fit: " + task_id);
    dag.placements[task_id] = node;
  }

  TopologyConfig topo = cfg.links;
  topo.terrestrial_seed = hash_mix(seed, static_cast<std::uint64_t>(size));
  NetworkGraph graph = build_topology(orch.infra(), topo);

  SchedulerConfig sched_cfg;
  sched_cfg.vicinity = cfg.vicinity;
  sched_cfg.thermal_env = cfg.thermal_env;
  sched_cfg.latency_weight = cfg.scheduling.latency_weight;
  sched_cfg.temperature_weight = cfg.scheduling.temperature_weight;
  sched_cfg.commit_attempts = cfg.scheduling.commit_attempts;
  sched_cfg.max_restarts = cfg.scheduling.max_restarts;
  sched_cfg.sim_step_s = cfg.time_step_s;
  std::uint64_t sched_seed =
      hash_mix(hash_mix(seed, static_cast<std::uint64_t>(size)),
               hash_str(scheduler_name));
  auto scheduler = make_scheduler(scheduler_name, sched_cfg, sched_seed);

  auto measure_edges_into = [&](const TaskId& placed) {
    for (const auto& e : dag.edges) {
      if (e.target != placed) continue;
      NodeId from;
      if (const auto* ds = dag.find_data_source(e.source)) {
        from = ds->host_node;
      } else {
        auto it = dag.placements.find(e.source);
        if (it == dag.placements.end()) continue;
        from = it->second;
      }
      EdgeResult er;
      er.source = e.source;
      er.target = e.target;
      er.data_source_edge = dag.find_data_source(e.source) != nullptr;
      er.t_s = orch.infra().time_s();
      auto probe = probe_edge(graph, from, dag.placements.at(placed));
      er.connected = probe.connected;
      er.qos = probe.qos;
      er.slo = e.slo;
      er.violated = e.slo && (!probe.connected || !qos_meets(probe.qos, *e.slo));
      if (er.data_source_edge && er.connected && !record.eo_latency_ms)
        record.eo_latency_ms = probe.qos.latency_ms;
      record.edges.push_back(std::move(er));
    }
  };

  // edges already satisfied by pinned placements
  for (const auto& [task_id, node] : dag.placements) {
    bool all_in = true;
    for (const auto& e : dag.edges) {
      if (e.target != task_id) continue;
      if (dag.find_data_source(e.source)) continue;
      if (!dag.placements.count(e.source)) all_in = false;
    }
    if (all_in) measure_edges_into(task_id);
  }

  bool failed = false;
  bool first = true;
  for (const TaskId& task_id : dag.topological_order()) {
    if (dag.placements.count(task_id)) continue;  // pinned
    const WorkflowTask* task = dag.find_task(task_id);
    if (!first) {
      double t = orch.infra().time_s() +
                 cfg.scheduling.steps_between_tasks * cfg.time_step_s;
      orch.infra_mutable().advance_to(t, cfg.thermal_env);
      graph = refresh(orch.infra(), topo);
    }
    first = false;

    TaskRunResult result;
    result.t_s = orch.infra().time_s();
    result.decision = scheduler->schedule(*task, dag, orch, graph,
                                          orch.infra().time_s());
    if (result.decision.outcome == ScheduleOutcome::Committed) {
      const NodeRecord* node = orch.infra().find(result.decision.node);
      result.node_kind = node->kind;
      result.node_name = node->name;
      result.on_satellite = node->kind == NodeKind::Satellite;
      if (result.on_satellite) {
        auto peak = predicted_peak_temp_c(*task, *node, cfg.thermal_env,
                                          orch.infra().time_s(), cfg.time_step_s);
        result.predicted_temp_c =
            peak ? *peak : node->thermal_state.current_temp_c;
        result.over_rec_c =
            std::max(0.0, *result.predicted_temp_c - node->thermal.temp_rec_c);
        result.over_max = *result.predicted_temp_c > node->thermal.temp_max_c;
        if (peak) {
          auto d_t = effective_duration_s(*task);
          double cpu = static_cast<double>(task->resources.cpu_millicores) / 1000.0;
          double gpu = static_cast<double>(task->resources.gpu_cores);
          orch.add_committed_heat(
              node->id, estimate_comp_temp_increase(*node, cfg.thermal_env,
                                                    *d_t, cpu, gpu));
        }
      }
      auto score_it = result.decision.scores.find(result.decision.node);
      if (score_it != result.decision.scores.end())
        result.chosen_score = score_it->second;
      measure_edges_into(task_id);
    } else {
      failed = true;
    }
    record.tasks.push_back(std::move(result));
    if (failed) break;
  }

  record.complete = !failed;
  if (record.complete) {
    // longest achieved-latency chain over inter-task edges
    std::map<TaskId, double> dp;
    double e2e = 0.0;
    bool measurable = true;
    for (const TaskId& task_id : dag.topological_order()) {
      double best = 0.0;
      for (const auto& er : record.edges) {
        if (er.target != task_id || er.data_source_edge) continue;
        if (!er.connected) {
          measurable = false;
          continue;
        }
        best = std::max(best, dp[er.source] + er.qos.latency_ms);
      }
      dp[task_id] = best;
      e2e = std::max(e2e, best);
    }
    if (measurable) record.e2e_latency_ms = e2e;
  }
  return record;
}

std::vector<ExperimentRecord> run_experiment(const ScenarioConfig& cfg,
                                             int parallel) {
  struct Cell {
    std::string scheduler;
    int size;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& sched : cfg.schedulers)
    for (int size : cfg.sizes)
      for (std::uint64_t seed : cfg.seeds) cells.push_back({sched, size, seed});

  std::vector<ExperimentRecord> records(cells.size());
  int workers = std::max(1, parallel);
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      records[i] = run_cell(cfg, cells[i].scheduler, cells[i].size, cells[i].seed);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        records[i] =
            run_cell(cfg, cells[i].scheduler, cells[i].size, cells[i].seed);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return records;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  std::size_t n = std::min(x.size(), y.size());
  if (n == 0) return fit;
  double mx = std::accumulate(x.begin(), x.begin() + n, 0.0) / n;
  double my = std::accumulate(y.begin(), y.begin() + n, 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (sorted.size() == 1) return sorted[0];
  double pos = std::clamp(q, 0.0, 1.0) * (sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

Summary summarize(const std::vector<ExperimentRecord>& records) {
  Summary summary;
  std::map<std::string, std::vector<double>> e2e;
  std::map<std::string, std::vector<double>> eo;
  std::map<std::string, std::map<int, std::vector<double>>> wall;

  for (const auto& r : records) {
    auto& s = summary.schedulers[r.scheduler];
    s.records++;
    if (!r.complete) s.incomplete++;
    if (r.e2e_latency_ms) e2e[r.scheduler].push_back(*r.e2e_latency_ms);
    if (r.eo_latency_ms) eo[r.scheduler].push_back(*r.eo_latency_ms);
    for (const auto& er : r.edges) {
      if (!er.slo || er.slo->unconstrained()) continue;
      s.slo_edges++;
      if (er.violated) s.slo_violations++;
    }
    for (const auto& t : r.tasks) {
      if (t.decision.outcome != ScheduleOutcome::Committed) continue;
      wall[r.scheduler][r.size].push_back(t.decision.wall_ms);
      if (!t.on_satellite) continue;
      auto& heat = s.overheating[t.decision.task];
      heat.satellite_placements++;
      if (t.over_rec_c > 0.0) {
        heat.over_rec++;
        heat.mean_over_rec_c += t.over_rec_c;
      }
      if (t.over_max) heat.over_max++;
    }
  }

  for (auto& [name, s] : summary.schedulers) {
    const auto& lat = e2e[name];
    s.mean_e2e_latency_ms =
        lat.empty() ? std::numeric_limits<double>::quiet_NaN()
                    : std::accumulate(lat.begin(), lat.end(), 0.0) / lat.size();
    s.violation_rate =
        s.slo_edges > 0 ? static_cast<double>(s.slo_violations) / s.slo_edges : 0.0;
    auto eod = eo[name];
    std::sort(eod.begin(), eod.end());
    if (!eod.empty()) {
      s.eo_latency_ms = {eod.front(), quantile(eod, 0.25), quantile(eod, 0.5),
                         quantile(eod, 0.75), eod.back()};
    }
    for (auto& [task, heat] : s.overheating) {
      if (heat.over_rec > 0) heat.mean_over_rec_c /= heat.over_rec;
    }
    std::vector<double> xs, ys;
    for (const auto& [size, walls] : wall[name]) {
      double mean = walls.empty() ? 0.0
                                  : std::accumulate(walls.begin(), walls.end(),
                                                    0.0) /
                                        walls.size();
      s.mean_wall_ms_by_size[size] = mean;
      xs.push_back(static_cast<double>(size));
      ys.push_back(mean);
    }
    if (xs.size() >= 2) {
      s.wall_fit = fit_line(xs, ys);
      double first = ys.front(), last = ys.back();
      s.wall_ratio = first > 0.0 ? last / first : 0.0;
    }
  }
  return summary;
}

namespace {

json summary_to_json_obj(const Summary& summary) {
  json j = json::object();
  for (const auto& [name, s] : summary.schedulers) {
    json sj;
    sj["records"] = s.records;
    sj["incomplete"] = s.incomplete;
    sj["mean_e2e_latency_ms"] =
        std::isfinite(s.mean_e2e_latency_ms) ? json(s.mean_e2e_latency_ms) : json();
    sj["slo_edges"] = s.slo_edges;
    sj["slo_violations"] = s.slo_violations;
    sj["violation_rate"] = s.violation_rate;
    sj["eo_latency_ms"] = {{"min", s.eo_latency_ms.min},
                           {"q1", s.eo_latency_ms.q1},
                           {"median", s.eo_latency_ms.median},
                           {"q3", s.eo_latency_ms.q3},
                           {"max", s.eo_latency_ms.max}};
    sj["overheating"] = json::object();
    for (const auto& [task, heat] : s.overheating) {
      sj["overheating"][task] = {
          {"satellite_placements", heat.satellite_placements},
          {"over_rec", heat.over_rec},
          {"over_max", heat.over_max},
          {"mean_over_rec_c", heat.mean_over_rec_c}};
    }
    sj["mean_wall_ms_by_size"] = json::object();
    for (const auto& [size, mean] : s.mean_wall_ms_by_size)
      sj["mean_wall_ms_by_size"][std::to_string(size)] = mean;
    sj["scalability"] = {{"slope_ms_per_node", s.wall_fit.slope},
                         {"intercept_ms", s.wall_fit.intercept},
                         {"r2", s.wall_fit.r2},
                         {"largest_over_smallest", s.wall_ratio}};
    j[name] = sj;
  }
  return j;
}

}  // namespace

std::string Summary::to_json() const {
  return summary_to_json_obj(*this).dump(2) + "\n";
}

std::string Summary::to_csv() const {
  std::ostringstream out;
  out << "scheduler,records,incomplete,mean_e2e_latency_ms,slo_edges,"
         "slo_violations,violation_rate,eo_min_ms,eo_q1_ms,eo_median_ms,"
         "eo_q3_ms,eo_max_ms,wall_r2,wall_ratio\n";
  for (const auto& [name, s] : schedulers) {
    out << name << ',' << s.records << ',' << s.incomplete << ','
        << s.mean_e2e_latency_ms << ',' << s.slo_edges << ','
        << s.slo_violations << ',' << s.violation_rate << ','
        << s.eo_latency_ms.min << ',' << s.eo_latency_ms.q1 << ','
        << s.eo_latency_ms.median << ',' << s.eo_latency_ms.q3 << ','
        << s.eo_latency_ms.max << ',' << s.wall_fit.r2 << ',' << s.wall_ratio
        << '\n';
  }
  return out.str();
}

std::vector<CheckResult> run_checks(
    const std::vector<ExperimentRecord>& records) {
  std::vector<CheckResult> checks;
  Summary summary = summarize(records);
  auto it = summary.schedulers.find("hyperdrive");
  auto detail = [](std::ostringstream& os) { return os.str(); };

  {
    CheckResult c{"e2e-ordering", false, ""};
    std::ostringstream os;
    if (it == summary.schedulers.end()) {
      os << "no hyperdrive records";
    } else {
      double hd = it->second.mean_e2e_latency_ms;
      double second_best = std::numeric_limits<double>::infinity();
      bool strict_min = true;
      for (const auto& [name, s] : summary.schedulers) {
        if (name == "hyperdrive") continue;
        if (!(s.mean_e2e_latency_ms > hd)) strict_min = false;
        second_best = std::min(second_best, s.mean_e2e_latency_ms);
      }
      c.pass = std::isfinite(hd) && strict_min && hd <= 0.6 * second_best;
      os << "mean e2e: hyperdrive=" << hd << " ms, second_best=" << second_best
         << " ms (needs strict minimum and >= 40% lower)";
    }
    c.detail = detail(os);
    checks.push_back(c);
  }

  {
    CheckResult c{"slo-compliance", false, ""};
    std::ostringstream os;
    bool hd_clean = it != summary.schedulers.end() &&
                    it->second.slo_violations == 0 && it->second.incomplete == 0;
    bool baselines_dirty = true;
    for (const auto& [name, s] : summary.schedulers) {
      if (name == "hyperdrive") continue;
      if (s.slo_violations == 0) baselines_dirty = false;
      os << name << "=" << s.slo_violations << " ";
    }
    os << "hyperdrive="
       << (it != summary.schedulers.end() ? it->second.slo_violations : -1);
    c.pass = hd_clean && baselines_dirty;
    c.detail = "violations: " + detail(os);
    checks.push_back(c);
  }

  {
    CheckResult c{"eo-data-slo", false, ""};
    std::ostringstream os;
    double hd_max = -1.0, hd_median = 0.0, random_median = 0.0;
    bool have_hd = false, have_random = false;
    for (const auto& r : records) {
      if (r.scheduler == "hyperdrive" && r.eo_latency_ms)
        hd_max = std::max(hd_max, *r.eo_latency_ms);
    }
    if (it != summary.schedulers.end()) {
      hd_median = it->second.eo_latency_ms.median;
      have_hd = true;
    }
    auto rit = summary.schedulers.find("random");
    if (rit != summary.schedulers.end()) {
      random_median = rit->second.eo_latency_ms.median;
      have_random = true;
    }
    c.pass = have_hd && have_random && hd_max >= 0.0 && hd_max <= 175.0 &&
             random_median > hd_median;
    os << "hyperdrive max=" << hd_max << " ms (limit 175), medians: hyperdrive="
       << hd_median << " random=" << random_median;
    c.detail = detail(os);
    checks.push_back(c);
  }

  {
    CheckResult c{"overheating", false, ""};
    std::ostringstream os;
    auto total_over_rec = [&](const std::string& name) -> int {
      auto sit = summary.schedulers.find(name);
      if (sit == summary.schedulers.end()) return -1;
      int total = 0;
      for (const auto& [task, heat] : sit->second.overheating)
        total += heat.over_rec;
      return total;
    };
    int hd = total_over_rec("hyperdrive");
    int random = total_over_rec("random");
    int rrobin = total_over_rec("round_robin");
    c.pass = hd == 0 && random >= 1 && rrobin >= 1;
    os << "placements above recommended temp: hyperdrive=" << hd
       << " random=" << random << " round_robin=" << rrobin;
    c.detail = detail(os);
    checks.push_back(c);
  }

  {
    CheckResult c{"scalability", false, ""};
    std::ostringstream os;
    if (it == summary.schedulers.end() ||
        it->second.mean_wall_ms_by_size.size() < 2) {
      os << "insufficient size coverage";
    } else {
      const auto& fit = it->second.wall_fit;
      c.pass = fit.r2 >= 0.9 && it->second.wall_ratio <= 6.0;
      os << "hyperdrive wall-time fit r2=" << fit.r2
         << " largest/smallest=" << it->second.wall_ratio
         << " (needs r2 >= 0.9 and ratio <= 6)";
    }
    c.detail = detail(os);
    checks.push_back(c);
  }

  return checks;
}

namespace {

json slo_json(const NetworkSlo& slo) {
  json j = json::object();
  if (slo.max_latency_ms) j["max_latency_ms"] = *slo.max_latency_ms;
  if (slo.min_bandwidth_bps) j["min_bandwidth_bps"] = *slo.min_bandwidth_bps;
  if (slo.max_jitter_ms) j["max_jitter_ms"] = *slo.max_jitter_ms;
  if (slo.max_packet_drop) j["max_packet_drop"] = *slo.max_packet_drop;
  return j;
}

NetworkSlo slo_from(const json& j) {
  NetworkSlo slo;
  if (j.contains("max_latency_ms")) slo.max_latency_ms = j["max_latency_ms"].get<double>();
  if (j.contains("min_bandwidth_bps"))
    slo.min_bandwidth_bps = j["min_bandwidth_bps"].get<double>();
  if (j.contains("max_jitter_ms")) slo.max_jitter_ms = j["max_jitter_ms"].get<double>();
  if (j.contains("max_packet_drop"))
    slo.max_packet_drop = j["max_packet_drop"].get<double>();
  return slo;
}

}  // namespace

std::string records_to_json(const std::vector<ExperimentRecord>& records,
                            bool zero_wall_times) {
  json arr = json::array();
  for (const auto& r : records) {
    json rj;
    rj["scheduler"] = r.scheduler;
    rj["size"] = r.size;
    rj["seed"] = r.seed;
    rj["complete"] = r.complete;
    rj["e2e_latency_ms"] = r.e2e_latency_ms ? json(*r.e2e_latency_ms) : json();
    rj["eo_latency_ms"] = r.eo_latency_ms ? json(*r.eo_latency_ms) : json();
    rj["tasks"] = json::array();
    for (const auto& t : r.tasks) {
      json tj;
      tj["task"] = t.decision.task;
      tj["node"] = t.decision.node;
      tj["node_name"] = t.node_name;
      tj["node_kind"] = to_string(t.node_kind);
      tj["t_s"] = t.t_s;
      tj["outcome"] = t.decision.outcome == ScheduleOutcome::Committed
                          ? "committed"
                          : "failed";
      tj["failure_reason"] = t.decision.failure_reason;
      tj["candidates"] = t.decision.candidate_count;
      tj["eligible"] = t.decision.eligible_count;
      tj["attempts"] = t.decision.commit_attempts;
      tj["restarts"] = t.decision.restarts;
      tj["wall_ms"] = zero_wall_times ? 0.0 : t.decision.wall_ms;
      tj["on_satellite"] = t.on_satellite;
      tj["predicted_temp_c"] =
          t.predicted_temp_c ? json(*t.predicted_temp_c) : json();
      tj["over_rec_c"] = t.over_rec_c;
      tj["over_max"] = t.over_max;
      tj["latency_raw_ms"] = t.chosen_score.latency_raw_ms;
      tj["latency_score"] = t.chosen_score.latency_score;
      tj["temperature_score"] = t.chosen_score.temperature_score;
      tj["aggregate_score"] = t.chosen_score.aggregate;
      rj["tasks"].push_back(tj);
    }
    rj["edges"] = json::array();
    for (const auto& e : r.edges) {
      json ej;
      ej["from"] = e.source;
      ej["to"] = e.target;
      ej["data_source"] = e.data_source_edge;
      ej["t_s"] = e.t_s;
      ej["connected"] = e.connected;
      ej["qos"] = qos_to_json(e.qos);
      ej["slo"] = e.slo ? slo_json(*e.slo) : json();
      ej["violated"] = e.violated;
      rj["edges"].push_back(ej);
    }
    arr.push_back(rj);
  }
  return arr.dump(2) + "\n";
}

std::vector<ExperimentRecord> records_from_json(const std::string& text) {
  json arr = json::parse(text);
  std::vector<ExperimentRecord> records;
  for (const auto& rj : arr) {
    ExperimentRecord r;
    r.scheduler = rj.at("scheduler").get<std::string>();
    r.size = rj.at("size").get<int>();
    r.seed = rj.at("seed").get<std::uint64_t>();
    r.complete = rj.at("complete").get<bool>();
    if (rj.contains("e2e_latency_ms") && rj["e2e_latency_ms"].is_number())
      r.e2e_latency_ms = rj["e2e_latency_ms"].get<double>();
    if (rj.contains("eo_latency_ms") && rj["eo_latency_ms"].is_number())
      r.eo_latency_ms = rj["eo_latency_ms"].get<double>();
    for (const auto& tj : rj.value("tasks", json::array())) {
      TaskRunResult t;
      t.decision.task = tj.at("task").get<std::string>();
      t.decision.node = tj.at("node").get<std::string>();
      t.node_name = tj.value("node_name", "");
      if (auto kind = node_kind_from_string(tj.value("node_kind", "cloud")))
        t.node_kind = *kind;
      t.t_s = tj.value("t_s", 0.0);
      t.decision.outcome = tj.value("outcome", "failed") == "committed"
                               ? ScheduleOutcome::Committed
                               : ScheduleOutcome::Failed;
      t.decision.failure_reason = tj.value("failure_reason", "");
      t.decision.candidate_count = tj.value("candidates", 0);
      t.decision.eligible_count = tj.value("eligible", 0);
      t.decision.commit_attempts = tj.value("attempts", 0);
      t.decision.restarts = tj.value("restarts", 0);
      t.decision.wall_ms = tj.value("wall_ms", 0.0);
      t.on_satellite = tj.value("on_satellite", false);
      if (tj.contains("predicted_temp_c") && tj["predicted_temp_c"].is_number())
        t.predicted_temp_c = tj["predicted_temp_c"].get<double>();
      t.over_rec_c = tj.value("over_rec_c", 0.0);
      t.over_max = tj.value("over_max", false);
      t.chosen_score.latency_raw_ms = tj.value("latency_raw_ms", 0.0);
      t.chosen_score.latency_score = tj.value("latency_score", 0.0);
      t.chosen_score.temperature_score = tj.value("temperature_score", 0.0);
      t.chosen_score.aggregate = tj.value("aggregate_score", 0.0);
      r.tasks.push_back(std::move(t));
    }
    for (const auto& ej : rj.value("edges", json::array())) {
      EdgeResult e;
      e.source = ej.at("from").get<std::string>();
      e.target = ej.at("to").get<std::string>();
      e.data_source_edge = ej.value("data_source", false);
      e.t_s = ej.value("t_s", 0.0);
      e.connected = ej.value("connected", false);
      if (ej.contains("qos")) e.qos = qos_from_json(ej["qos"]);
      if (ej.contains("slo") && ej["slo"].is_object() && !ej["slo"].empty())
        e.slo = slo_from(ej["slo"]);
      e.violated = ej.value("violated", false);
      r.edges.push_back(std::move(e));
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_results(const std::string& dir,
                   const std::vector<ExperimentRecord>& records) {
  std::filesystem::create_directories(dir);

  std::ofstream decisions(dir + "/decisions.csv");
  decisions << "scheduler,size,seed,task,t_s,outcome,node_id,node_name,"
               "node_kind,candidates,eligible,attempts,restarts,"
               "latency_raw_ms,latency_score,temperature_score,"
               "aggregate_score,predicted_temp_c,over_rec_c,over_max,"
               "eo_latency_ms,e2e_latency_ms,wall_ms\n";
  for (const auto& r : records) {
    for (const auto& t : r.tasks) {
      decisions << r.scheduler << ',' << r.size << ',' << r.seed << ','
                << t.decision.task << ',' << t.t_s << ','
                << (t.decision.outcome == ScheduleOutcome::Committed
                        ? "committed"
                        : "failed")
                << ',' << t.decision.node << ',' << t.node_name << ','
                << to_string(t.node_kind) << ',' << t.decision.candidate_count
                << ',' << t.decision.eligible_count << ','
                << t.decision.commit_attempts << ',' << t.decision.restarts
                << ',' << t.chosen_score.latency_raw_ms << ','
                << t.chosen_score.latency_score << ','
                << t.chosen_score.temperature_score << ','
                << t.chosen_score.aggregate << ','
                << (t.predicted_temp_c ? std::to_string(*t.predicted_temp_c)
                                       : "")
                << ',' << t.over_rec_c << ',' << (t.over_max ? 1 : 0) << ','
                << (r.eo_latency_ms ? std::to_string(*r.eo_latency_ms) : "")
                << ','
                << (r.e2e_latency_ms ? std::to_string(*r.e2e_latency_ms) : "")
                << ',' << t.decision.wall_ms << '\n';
    }
  }

  std::ofstream edges(dir + "/edges.csv");
  edges << "scheduler,size,seed,from,to,data_source,t_s,connected,latency_ms,"
           "bandwidth_bps,jitter_ms,packet_drop,slo_max_latency_ms,violated\n";
  for (const auto& r : records) {
    for (const auto& e : r.edges) {
      edges << r.scheduler << ',' << r.size << ',' << r.seed << ',' << e.source
            << ',' << e.target << ',' << (e.data_source_edge ? 1 : 0) << ','
            << e.t_s << ',' << (e.connected ? 1 : 0) << ',' << e.qos.latency_ms
            << ',' << e.qos.bandwidth_bps << ',' << e.qos.jitter_ms << ','
            << e.qos.packet_drop << ','
            << (e.slo && e.slo->max_latency_ms
                    ? std::to_string(*e.slo->max_latency_ms)
                    : "")
            << ',' << (e.violated ? 1 : 0) << '\n';
    }
  }

  std::ofstream json_out(dir + "/records.json");
  json_out << records_to_json(records);
}

std::vector<ExperimentRecord> read_records(const std::string& dir) {
  std::ifstream in(dir + "/records.json");
  if (!in) throw ConfigError("cannot open " + dir + "/records.json");
  std::ostringstream buf;
  buf << in.rdbuf();
  return records_from_json(buf.str());
}

void export_traces(const ScenarioConfig& cfg, int size, std::uint64_t seed,
                   int steps, const std::string& dir) {
  std::filesystem::create_directories(dir);
  double t0 = elapsed_offset_for_seed(cfg, seed);
  Infrastructure infra = build_infrastructure(cfg, size, seed, t0);
  TopologyConfig topo = cfg.links;
  topo.terrestrial_seed = hash_mix(seed, static_cast<std::uint64_t>(size));

  std::ofstream positions(dir + "/positions.csv");
  positions << "node_id,t_s,x_km,y_km,z_km,sunlit,name,kind\n";
  std::ofstream latencies(dir + "/latency_trace.csv");
  latencies << "t_s,node_a,node_b,latency_ms,bandwidth_bps,kind\n";

  for (int step = 0; step < steps; ++step) {
    double t = t0 + step * cfg.time_step_s;
    infra.advance_to(t, cfg.thermal_env);
    NetworkGraph graph = build_topology(infra, topo);
    for (const auto& n : infra.nodes()) {
      positions << n.id << ',' << t << ',' << n.position_km.x() << ','
                << n.position_km.y() << ',' << n.position_km.z() << ','
                << (is_sunlit(n.position_km, t) ? 1 : 0) << ',' << n.name << ','
                << to_string(n.kind) << '\n';
    }
    const char* kind_names[] = {"isl", "ground_sat", "terrestrial"};
    for (const auto& l : graph.links()) {
      latencies << t << ',' << graph.id(l.a) << ',' << graph.id(l.b) << ','
                << l.latency_ms << ',' << l.bandwidth_bps << ','
                << kind_names[static_cast<int>(l.kind)] << '\n';
    }
  }
}

}  // namespace hyperdrive
