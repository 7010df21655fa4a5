#include "hyperdrive/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hyperdrive/errors.hpp"
#include "json.hpp"

namespace hyperdrive {

using nlohmann::json;

namespace {

constexpr std::int64_t kMiB = 1024LL * 1024LL;
constexpr std::int64_t kGiB = 1024LL * kMiB;

void check_keys(const json& obj, std::initializer_list<const char*> known,
                const std::string& path) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + path + key + "'");
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw ConfigError(std::string("expected number for '") + key + "'");
  return obj[key].get<double>();
}

std::int64_t get_int(const json& obj, const char* key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError(std::string("expected integer for '") + key + "'");
  return obj[key].get<std::int64_t>();
}

std::optional<double> get_opt_num(const json& obj, const char* key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return obj[key].get<double>();
}

json slo_to_json(const NetworkSlo& slo) {
  json j = json::object();
  if (slo.max_latency_ms) j["max_latency_ms"] = *slo.max_latency_ms;
  if (slo.min_bandwidth_bps) j["min_bandwidth_bps"] = *slo.min_bandwidth_bps;
  if (slo.max_jitter_ms) j["max_jitter_ms"] = *slo.max_jitter_ms;
  if (slo.max_packet_drop) j["max_packet_drop"] = *slo.max_packet_drop;
  return j;
}

NetworkSlo slo_from_json(const json& j, const std::string& path) {
  check_keys(j, {"max_latency_ms", "min_bandwidth_bps", "max_jitter_ms",
                 "max_packet_drop"},
             path);
  NetworkSlo slo;
  slo.max_latency_ms = get_opt_num(j, "max_latency_ms");
  slo.min_bandwidth_bps = get_opt_num(j, "min_bandwidth_bps");
  slo.max_jitter_ms = get_opt_num(j, "max_jitter_ms");
  slo.max_packet_drop = get_opt_num(j, "max_packet_drop");
  return slo;
}

json resources_to_json(const ResourceSpec& r) {
  json j = json::object();
  if (!r.cpu_arch.empty()) j["cpu_arch"] = r.cpu_arch;
  j["cpu_millicores"] = r.cpu_millicores;
  j["memory_bytes"] = r.memory_bytes;
  j["gpu_cores"] = r.gpu_cores;
  j["local_storage_bytes"] = r.local_storage_bytes;
  if (r.min_battery_charge != 0.0) j["min_battery_charge"] = r.min_battery_charge;
  return j;
}

ResourceSpec resources_from_json(const json& j, const std::string& path) {
  check_keys(j, {"cpu_arch", "cpu_millicores", "memory_bytes", "gpu_cores",
                 "local_storage_bytes", "min_battery_charge"},
             path);
  ResourceSpec r;
  r.cpu_arch = j.value("cpu_arch", "");
  r.cpu_millicores = get_int(j, "cpu_millicores", 0);
  r.memory_bytes = get_int(j, "memory_bytes", 0);
  r.gpu_cores = get_int(j, "gpu_cores", 0);
  r.local_storage_bytes = get_int(j, "local_storage_bytes", 0);
  r.min_battery_charge = get_num(j, "min_battery_charge", 0.0);
  if (!r.valid()) throw ConfigError("invalid resources at '" + path + "'");
  return r;
}

json workflow_to_json_obj(const WorkflowDag& dag) {
  json j;
  j["tasks"] = json::array();
  for (const auto& t : dag.tasks) {
    json tj;
    tj["id"] = t.id;
    tj["resources"] = resources_to_json(t.resources);
    if (t.expected_duration_s) tj["expected_duration_s"] = *t.expected_duration_s;
    if (t.max_response_time_slo_s)
      tj["max_response_time_slo_s"] = *t.max_response_time_slo_s;
    if (t.preferred_location) {
      tj["preferred_location"] = {{"lat_deg", t.preferred_location->lat_deg},
                                  {"lon_deg", t.preferred_location->lon_deg},
                                  {"alt_km", t.preferred_location->alt_km}};
    }
    j["tasks"].push_back(tj);
  }
  j["data_sources"] = json::array();
  for (const auto& d : dag.data_sources)
    j["data_sources"].push_back({{"id", d.id}, {"host", d.host_node}});
  j["edges"] = json::array();
  for (const auto& e : dag.edges) {
    json ej = {{"from", e.source}, {"to", e.target}};
    if (e.slo) ej["slo"] = slo_to_json(*e.slo);
    j["edges"].push_back(ej);
  }
  j["placements"] = json::object();
  for (const auto& [task, node] : dag.placements) j["placements"][task] = node;
  return j;
}

WorkflowDag workflow_from_json_obj(const json& j, const std::string& path) {
  check_keys(j, {"tasks", "data_sources", "edges", "placements"}, path);
  WorkflowDag dag;
  for (const auto& tj : j.value("tasks", json::array())) {
    check_keys(tj,
               {"id", "resources", "expected_duration_s",
                "max_response_time_slo_s", "preferred_location"},
               path + "tasks.");
    WorkflowTask t;
    t.id = tj.at("id").get<std::string>();
    if (tj.contains("resources"))
      t.resources = resources_from_json(tj["resources"], path + "tasks.resources.");
    t.expected_duration_s = get_opt_num(tj, "expected_duration_s");
    t.max_response_time_slo_s = get_opt_num(tj, "max_response_time_slo_s");
    if (tj.contains("preferred_location") && !tj["preferred_location"].is_null()) {
      const auto& pj = tj["preferred_location"];
      check_keys(pj, {"lat_deg", "lon_deg", "alt_km"},
                 path + "tasks.preferred_location.");
      t.preferred_location = LatLonAlt{get_num(pj, "lat_deg", 0.0),
                                       get_num(pj, "lon_deg", 0.0),
                                       get_num(pj, "alt_km", 0.0)};
    }
    dag.tasks.push_back(std::move(t));
  }
  for (const auto& dj : j.value("data_sources", json::array())) {
    check_keys(dj, {"id", "host"}, path + "data_sources.");
    dag.data_sources.push_back(
        {dj.at("id").get<std::string>(), dj.at("host").get<std::string>()});
  }
  for (const auto& ej : j.value("edges", json::array())) {
    check_keys(ej, {"from", "to", "slo"}, path + "edges.");
    WorkflowEdge e;
    e.source = ej.at("from").get<std::string>();
    e.target = ej.at("to").get<std::string>();
    if (ej.contains("slo") && !ej["slo"].is_null())
      e.slo = slo_from_json(ej["slo"], path + "edges.slo.");
    dag.edges.push_back(std::move(e));
  }
  if (j.contains("placements")) {
    for (const auto& [task, node] : j["placements"].items())
      dag.placements[task] = node.get<std::string>();
  }
  return dag;
}

json thermal_to_json(const ThermalSpec& t) {
  return {{"temp_rec_c", t.temp_rec_c},
          {"temp_max_c", t.temp_max_c},
          {"cpu_heat_rate_c_per_core_s", t.cpu_heat_rate_c_per_core_s},
          {"gpu_heat_rate_c_per_core_s", t.gpu_heat_rate_c_per_core_s},
          {"passive_cooling_rate_c_per_s", t.passive_cooling_rate_c_per_s}};
}

ThermalSpec thermal_from_json(const json& j, const std::string& path) {
  check_keys(j,
             {"temp_rec_c", "temp_max_c", "cpu_heat_rate_c_per_core_s",
              "gpu_heat_rate_c_per_core_s", "passive_cooling_rate_c_per_s"},
             path);
  ThermalSpec t;
  t.temp_rec_c = get_num(j, "temp_rec_c", t.temp_rec_c);
  t.temp_max_c = get_num(j, "temp_max_c", t.temp_max_c);
  t.cpu_heat_rate_c_per_core_s =
      get_num(j, "cpu_heat_rate_c_per_core_s", t.cpu_heat_rate_c_per_core_s);
  t.gpu_heat_rate_c_per_core_s =
      get_num(j, "gpu_heat_rate_c_per_core_s", t.gpu_heat_rate_c_per_core_s);
  t.passive_cooling_rate_c_per_s = get_num(j, "passive_cooling_rate_c_per_s",
                                           t.passive_cooling_rate_c_per_s);
  if (!t.valid()) throw ConfigError("invalid thermal spec at '" + path + "'");
  return t;
}

std::pair<int, int> line_col_of_offset(const std::string& text,
                                       std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

SizeCounts ScenarioConfig::expand_size(int total_nodes) const {
  if (total_nodes < 1) throw ConfigError("infrastructure size must be >= 1");
  SizeCounts c;
  double unit = static_cast<double>(total_nodes) / size_model.unit_total;
  c.sats_per_plane = std::max(
      1, static_cast<int>(std::lround(unit * size_model.unit_satellites /
                                      constellation.planes)));
  c.satellites = constellation.planes * c.sats_per_plane;
  c.edge = std::max(0, static_cast<int>(std::lround(unit * size_model.unit_edge)));
  c.cloud = std::max(1, static_cast<int>(std::lround(unit * size_model.unit_cloud)));
  return c;
}

ScenarioConfig ScenarioConfig::wildfire_default() {
  ScenarioConfig cfg;
  cfg.time_step_s = 10.0;
  cfg.constellation = {72, 14, 550.0, 53.0, 5.0};
  cfg.eo = {700.0, 98.0};
  cfg.region = {37.0, -120.0, 150.0, 450.0};
  cfg.size_model = {1118, 1008, 100, 10};
  cfg.thermal_env = ThermalEnvConfig{};
  cfg.links = TopologyConfig{};
  cfg.vicinity = VicinityConfig{};
  cfg.scheduling = SchedulingTuning{};
  cfg.schedulers = {"hyperdrive", "random", "first_fit", "round_robin"};
  cfg.sizes = {1118, 2236, 3354, 4472};
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.output_dir = "results";

  NodeTemplate satellite;
  satellite.capacity = {"arm64", 12000, 12 * kGiB, 2, 256 * kGiB, 0.0};
  satellite.battery_charge = 0.8;
  satellite.thermal = ThermalSpec{};
  cfg.templates["satellite"] = satellite;

  NodeTemplate edge;
  edge.capacity = {"arm64", 16000, 16 * kGiB, 2, 512 * kGiB, 0.0};
  edge.thermal = ThermalSpec{};
  cfg.templates["edge"] = edge;

  NodeTemplate cloud;
  cloud.capacity = {"x86_64", 128000, 256 * kGiB, 16, 10240 * kGiB, 0.0};
  cloud.thermal = ThermalSpec{};
  cfg.templates["cloud"] = cloud;

  // sized so that the pinned ingest function saturates the drone
  NodeTemplate ground;
  ground.capacity = {"arm64", 1000, 1 * kGiB, 0, 8 * kGiB, 0.0};
  ground.battery_charge = 0.9;
  ground.thermal = ThermalSpec{};
  cfg.templates["ground_station"] = ground;

  NodeTemplate eo;
  eo.capacity = {"arm64", 0, 0, 0, 0, 0.0};
  eo.battery_charge = 0.7;
  eo.thermal = ThermalSpec{};
  cfg.templates["eo"] = eo;

  // Four-function chain with an imaging-satellite data source. The ingest
  // function is pinned to the drone ground station. The end-to-end network
  // budget across the chain is 350 ms: 100 ms on the first link, the
  // remainder split evenly over the two downstream links.
  WorkflowDag dag;
  WorkflowTask ingest;
  ingest.id = "ingest";
  ingest.resources = {"", 500, 512 * kMiB, 0, 1 * kGiB, 0.25};
  ingest.expected_duration_s = 600.0;
  dag.tasks.push_back(ingest);

  WorkflowTask extract;
  extract.id = "extract-frames";
  extract.resources = {"", 2000, 2 * kGiB, 0, 8 * kGiB, 0.25};
  extract.expected_duration_s = 600.0;
  dag.tasks.push_back(extract);

  WorkflowTask detect;
  detect.id = "object-det";
  detect.resources = {"", 4000, 4 * kGiB, 1, 8 * kGiB, 0.25};
  detect.expected_duration_s = 600.0;
  dag.tasks.push_back(detect);

  WorkflowTask prepare;
  prepare.id = "prepare-ds";
  prepare.resources = {"", 2000, 2 * kGiB, 0, 16 * kGiB, 0.25};
  prepare.expected_duration_s = 600.0;
  dag.tasks.push_back(prepare);

  dag.data_sources.push_back({"eo-data", "eo-0"});

  auto latency_slo = [](double ms) {
    NetworkSlo slo;
    slo.max_latency_ms = ms;
    return slo;
  };
  dag.edges.push_back({"ingest", "extract-frames", latency_slo(100.0)});
  dag.edges.push_back({"extract-frames", "object-det", latency_slo(125.0)});
  dag.edges.push_back({"object-det", "prepare-ds", latency_slo(125.0)});
  dag.edges.push_back({"eo-data", "object-det", latency_slo(175.0)});
  cfg.workflow = dag;
  cfg.pinned = {{"ingest", "drone"}};
  return cfg;
}

std::string workflow_to_json(const WorkflowDag& dag) {
  return workflow_to_json_obj(dag).dump(2);
}

WorkflowDag workflow_from_json(const std::string& text) {
  return workflow_from_json_obj(json::parse(text), "workflow.");
}

ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ConfigError(origin + ": empty scenario");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": " + e.what());
  }

  check_keys(j,
             {"time_step_s", "constellation", "eo_satellite", "region",
              "size_model", "templates", "thermal_env", "links", "vicinity",
              "scheduling", "workflow", "pinned", "schedulers", "sizes",
              "seeds", "output_dir"},
             "");

  ScenarioConfig cfg = ScenarioConfig::wildfire_default();
  cfg.time_step_s = get_num(j, "time_step_s", cfg.time_step_s);
  if (cfg.time_step_s <= 0.0) throw ConfigError("time_step_s must be positive");

  if (j.contains("constellation")) {
    const auto& c = j["constellation"];
    check_keys(c,
               {"planes", "sats_per_plane", "altitude_km", "inclination_deg",
                "phasing_offset_deg"},
               "constellation.");
    cfg.constellation.planes = static_cast<int>(get_int(c, "planes", 72));
    cfg.constellation.sats_per_plane =
        static_cast<int>(get_int(c, "sats_per_plane", 14));
    cfg.constellation.altitude_km = get_num(c, "altitude_km", 550.0);
    cfg.constellation.inclination_deg = get_num(c, "inclination_deg", 53.0);
    cfg.constellation.phasing_offset_deg = get_num(c, "phasing_offset_deg", 5.0);
    if (!cfg.constellation.valid())
      throw ConfigError("invalid constellation spec");
  }

  if (j.contains("eo_satellite")) {
    const auto& e = j["eo_satellite"];
    check_keys(e, {"altitude_km", "inclination_deg"}, "eo_satellite.");
    cfg.eo.altitude_km = get_num(e, "altitude_km", cfg.eo.altitude_km);
    cfg.eo.inclination_deg = get_num(e, "inclination_deg", cfg.eo.inclination_deg);
  }

  if (j.contains("region")) {
    const auto& r = j["region"];
    check_keys(r, {"lat_deg", "lon_deg", "edge_radius_km", "cloud_radius_km"},
               "region.");
    cfg.region.lat_deg = get_num(r, "lat_deg", cfg.region.lat_deg);
    cfg.region.lon_deg = get_num(r, "lon_deg", cfg.region.lon_deg);
    cfg.region.edge_radius_km = get_num(r, "edge_radius_km", cfg.region.edge_radius_km);
    cfg.region.cloud_radius_km = get_num(r, "cloud_radius_km", cfg.region.cloud_radius_km);
  }

  if (j.contains("size_model")) {
    const auto& s = j["size_model"];
    check_keys(s, {"unit_total", "unit_satellites", "unit_edge", "unit_cloud"},
               "size_model.");
    cfg.size_model.unit_total =
        static_cast<int>(get_int(s, "unit_total", cfg.size_model.unit_total));
    cfg.size_model.unit_satellites = static_cast<int>(
        get_int(s, "unit_satellites", cfg.size_model.unit_satellites));
    cfg.size_model.unit_edge =
        static_cast<int>(get_int(s, "unit_edge", cfg.size_model.unit_edge));
    cfg.size_model.unit_cloud =
        static_cast<int>(get_int(s, "unit_cloud", cfg.size_model.unit_cloud));
  }

  if (j.contains("templates")) {
    check_keys(j["templates"],
               {"satellite", "edge", "cloud", "ground_station", "eo"},
               "templates.");
    for (const auto& [name, tj] : j["templates"].items()) {
      check_keys(tj, {"resources", "battery_charge", "thermal"},
                 "templates." + name + ".");
      NodeTemplate tpl = cfg.templates[name];
      if (tj.contains("resources"))
        tpl.capacity = resources_from_json(tj["resources"],
                                           "templates." + name + ".resources.");
      if (tj.contains("battery_charge") && !tj["battery_charge"].is_null())
        tpl.battery_charge = tj["battery_charge"].get<double>();
      if (tj.contains("thermal"))
        tpl.thermal = thermal_from_json(tj["thermal"],
                                        "templates." + name + ".thermal.");
      cfg.templates[name] = tpl;
    }
  }

  if (j.contains("thermal_env")) {
    const auto& t = j["thermal_env"];
    check_keys(t, {"shade_c", "sun_c", "lag_tau_s", "comp_ceiling_c"},
               "thermal_env.");
    cfg.thermal_env.shade_c = get_num(t, "shade_c", cfg.thermal_env.shade_c);
    cfg.thermal_env.sun_c = get_num(t, "sun_c", cfg.thermal_env.sun_c);
    cfg.thermal_env.lag_tau_s = get_num(t, "lag_tau_s", cfg.thermal_env.lag_tau_s);
    cfg.thermal_env.comp_ceiling_c =
        get_num(t, "comp_ceiling_c", cfg.thermal_env.comp_ceiling_c);
  }

  if (j.contains("links")) {
    const auto& l = j["links"];
    check_keys(l,
               {"isl_bandwidth_bps", "ground_sat_bandwidth_bps",
                "terrestrial_bandwidth_bps", "per_hop_overhead_ms",
                "terrestrial_latency_min_ms", "terrestrial_latency_max_ms",
                "ground_sat_links", "terrestrial_neighbors", "eo_uplinks",
                "min_elevation_deg", "grazing_margin_km", "jitter_policy"},
               "links.");
    auto& c = cfg.links;
    c.isl_bandwidth_bps = get_num(l, "isl_bandwidth_bps", c.isl_bandwidth_bps);
    c.ground_sat_bandwidth_bps =
        get_num(l, "ground_sat_bandwidth_bps", c.ground_sat_bandwidth_bps);
    c.terrestrial_bandwidth_bps =
        get_num(l, "terrestrial_bandwidth_bps", c.terrestrial_bandwidth_bps);
    c.per_hop_overhead_ms = get_num(l, "per_hop_overhead_ms", c.per_hop_overhead_ms);
    c.terrestrial_latency_min_ms =
        get_num(l, "terrestrial_latency_min_ms", c.terrestrial_latency_min_ms);
    c.terrestrial_latency_max_ms =
        get_num(l, "terrestrial_latency_max_ms", c.terrestrial_latency_max_ms);
    c.ground_sat_links =
        static_cast<int>(get_int(l, "ground_sat_links", c.ground_sat_links));
    c.terrestrial_neighbors = static_cast<int>(
        get_int(l, "terrestrial_neighbors", c.terrestrial_neighbors));
    c.eo_uplinks = static_cast<int>(get_int(l, "eo_uplinks", c.eo_uplinks));
    c.min_elevation_deg = get_num(l, "min_elevation_deg", c.min_elevation_deg);
    c.grazing_margin_km = get_num(l, "grazing_margin_km", c.grazing_margin_km);
    if (l.contains("jitter_policy")) {
      std::string p = l["jitter_policy"].get<std::string>();
      if (p == "sum")
        c.jitter_policy = JitterPolicy::Sum;
      else if (p == "max")
        c.jitter_policy = JitterPolicy::Max;
      else
        throw ConfigError("links.jitter_policy must be 'sum' or 'max'");
    }
  }

  if (j.contains("vicinity")) {
    const auto& v = j["vicinity"];
    check_keys(v,
               {"cloud_radius_km", "edge_radius_km", "ground_station_radius_km",
                "satellite_radius_km", "candidate_set_size", "quotas"},
               "vicinity.");
    auto& c = cfg.vicinity;
    c.cloud_radius_km = get_num(v, "cloud_radius_km", c.cloud_radius_km);
    c.edge_radius_km = get_num(v, "edge_radius_km", c.edge_radius_km);
    c.ground_station_radius_km =
        get_num(v, "ground_station_radius_km", c.ground_station_radius_km);
    c.satellite_radius_km = get_num(v, "satellite_radius_km", c.satellite_radius_km);
    c.candidate_set_size =
        static_cast<int>(get_int(v, "candidate_set_size", c.candidate_set_size));
    if (v.contains("quotas")) {
      const auto& q = v["quotas"];
      check_keys(q, {"cloud", "edge", "ground_station", "satellite"},
                 "vicinity.quotas.");
      c.cloud_quota = get_num(q, "cloud", c.cloud_quota);
      c.edge_quota = get_num(q, "edge", c.edge_quota);
      c.ground_station_quota = get_num(q, "ground_station", c.ground_station_quota);
      c.satellite_quota = get_num(q, "satellite", c.satellite_quota);
    }
    if (!c.valid()) throw ConfigError("invalid vicinity config");
  }

  if (j.contains("scheduling")) {
    const auto& s = j["scheduling"];
    check_keys(s,
               {"latency_weight", "temperature_weight", "commit_attempts",
                "max_restarts", "workflow_start_s", "seed_stagger_s",
                "steps_between_tasks"},
               "scheduling.");
    auto& c = cfg.scheduling;
    c.latency_weight = get_num(s, "latency_weight", c.latency_weight);
    c.temperature_weight = get_num(s, "temperature_weight", c.temperature_weight);
    c.commit_attempts =
        static_cast<int>(get_int(s, "commit_attempts", c.commit_attempts));
    c.max_restarts = static_cast<int>(get_int(s, "max_restarts", c.max_restarts));
    c.workflow_start_s = get_num(s, "workflow_start_s", c.workflow_start_s);
    c.seed_stagger_s = get_num(s, "seed_stagger_s", c.seed_stagger_s);
    c.steps_between_tasks = static_cast<int>(
        get_int(s, "steps_between_tasks", c.steps_between_tasks));
  }

  if (j.contains("workflow"))
    cfg.workflow = workflow_from_json_obj(j["workflow"], "workflow.");

  if (j.contains("pinned")) {
    cfg.pinned.clear();
    for (const auto& [task, node] : j["pinned"].items())
      cfg.pinned[task] = node.get<std::string>();
  }

  if (j.contains("schedulers")) {
    cfg.schedulers = j["schedulers"].get<std::vector<std::string>>();
    for (const auto& s : cfg.schedulers) {
      if (s != "hyperdrive" && s != "random" && s != "first_fit" &&
          s != "round_robin")
        throw ConfigError("unknown scheduler: " + s);
    }
  }
  if (j.contains("sizes")) cfg.sizes = j["sizes"].get<std::vector<int>>();
  if (j.contains("seeds"))
    cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("output_dir"))
    cfg.output_dir = j["output_dir"].get<std::string>();

  if (cfg.sizes.empty()) throw ConfigError("sizes must not be empty");
  if (cfg.seeds.empty()) throw ConfigError("seeds must not be empty");
  if (cfg.schedulers.empty()) throw ConfigError("schedulers must not be empty");

  auto report = validate_workflow(cfg.workflow);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << origin << ": invalid workflow:";
    for (const auto& v : report.violations) msg << " [" << v.detail << "]";
    throw ConfigError(msg.str());
  }
  for (const auto& [task, node] : cfg.pinned) {
    if (!cfg.workflow.find_task(task))
      throw ConfigError("pinned task not in workflow: " + task);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string save_scenario(const ScenarioConfig& cfg) {
  json j;
  j["time_step_s"] = cfg.time_step_s;
  j["constellation"] = {{"planes", cfg.constellation.planes},
                        {"sats_per_plane", cfg.constellation.sats_per_plane},
                        {"altitude_km", cfg.constellation.altitude_km},
                        {"inclination_deg", cfg.constellation.inclination_deg},
                        {"phasing_offset_deg", cfg.constellation.phasing_offset_deg}};
  j["eo_satellite"] = {{"altitude_km", cfg.eo.altitude_km},
                       {"inclination_deg", cfg.eo.inclination_deg}};
  j["region"] = {{"lat_deg", cfg.region.lat_deg},
                 {"lon_deg", cfg.region.lon_deg},
                 {"edge_radius_km", cfg.region.edge_radius_km},
                 {"cloud_radius_km", cfg.region.cloud_radius_km}};
  j["size_model"] = {{"unit_total", cfg.size_model.unit_total},
                     {"unit_satellites", cfg.size_model.unit_satellites},
                     {"unit_edge", cfg.size_model.unit_edge},
                     {"unit_cloud", cfg.size_model.unit_cloud}};
  j["templates"] = json::object();
  for (const auto& [name, tpl] : cfg.templates) {
    json tj;
    tj["resources"] = resources_to_json(tpl.capacity);
    if (tpl.battery_charge) tj["battery_charge"] = *tpl.battery_charge;
    tj["thermal"] = thermal_to_json(tpl.thermal);
    j["templates"][name] = tj;
  }
  j["thermal_env"] = {{"shade_c", cfg.thermal_env.shade_c},
                      {"sun_c", cfg.thermal_env.sun_c},
                      {"lag_tau_s", cfg.thermal_env.lag_tau_s},
                      {"comp_ceiling_c", cfg.thermal_env.comp_ceiling_c}};
  j["links"] = {
      {"isl_bandwidth_bps", cfg.links.isl_bandwidth_bps},
      {"ground_sat_bandwidth_bps", cfg.links.ground_sat_bandwidth_bps},
      {"terrestrial_bandwidth_bps", cfg.links.terrestrial_bandwidth_bps},
      {"per_hop_overhead_ms", cfg.links.per_hop_overhead_ms},
      {"terrestrial_latency_min_ms", cfg.links.terrestrial_latency_min_ms},
      {"terrestrial_latency_max_ms", cfg.links.terrestrial_latency_max_ms},
      {"ground_sat_links", cfg.links.ground_sat_links},
      {"terrestrial_neighbors", cfg.links.terrestrial_neighbors},
      {"eo_uplinks", cfg.links.eo_uplinks},
      {"min_elevation_deg", cfg.links.min_elevation_deg},
      {"grazing_margin_km", cfg.links.grazing_margin_km},
      {"jitter_policy",
       cfg.links.jitter_policy == JitterPolicy::Sum ? "sum" : "max"}};
  j["vicinity"] = {
      {"cloud_radius_km", cfg.vicinity.cloud_radius_km},
      {"edge_radius_km", cfg.vicinity.edge_radius_km},
      {"ground_station_radius_km", cfg.vicinity.ground_station_radius_km},
      {"satellite_radius_km", cfg.vicinity.satellite_radius_km},
      {"candidate_set_size", cfg.vicinity.candidate_set_size},
      {"quotas",
       {{"cloud", cfg.vicinity.cloud_quota},
        {"edge", cfg.vicinity.edge_quota},
        {"ground_station", cfg.vicinity.ground_station_quota},
        {"satellite", cfg.vicinity.satellite_quota}}}};
  j["scheduling"] = {{"latency_weight", cfg.scheduling.latency_weight},
                     {"temperature_weight", cfg.scheduling.temperature_weight},
                     {"commit_attempts", cfg.scheduling.commit_attempts},
                     {"max_restarts", cfg.scheduling.max_restarts},
                     {"workflow_start_s", cfg.scheduling.workflow_start_s},
                     {"seed_stagger_s", cfg.scheduling.seed_stagger_s},
                     {"steps_between_tasks", cfg.scheduling.steps_between_tasks}};
  j["workflow"] = workflow_to_json_obj(cfg.workflow);
  j["pinned"] = json::object();
  for (const auto& [task, node] : cfg.pinned) j["pinned"][task] = node;
  j["schedulers"] = cfg.schedulers;
  j["sizes"] = cfg.sizes;
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

}  // namespace hyperdrive
