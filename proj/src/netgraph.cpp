#include "hyperdrive/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

#include "hyperdrive/errors.hpp"
#include "hyperdrive/rng.hpp"

namespace hyperdrive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double propagation_latency_ms(const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b, double overhead_ms) {
  return (b - a).norm() / kSpeedOfLightKmS * 1000.0 + overhead_ms;
}

// Static latency for one terrestrial pair, stable across refreshes.
double terrestrial_latency_ms(const TopologyConfig& cfg, const std::string& a,
                              const std::string& b) {
  const std::string& lo = a < b ? a : b;
  const std::string& hi = a < b ? b : a;
  std::uint64_t key = hash_mix(cfg.terrestrial_seed,
                               hash_mix(hash_str(lo), hash_str(hi)));
  return cfg.terrestrial_latency_min_ms +
         hash01(key) * (cfg.terrestrial_latency_max_ms -
                        cfg.terrestrial_latency_min_ms);
}

}  // namespace

NetworkGraph NetworkGraph::from_links(std::vector<std::string> ids,
                                      std::vector<Link> links,
                                      JitterPolicy policy, double time_s) {
  NetworkGraph g;
  g.ids_ = std::move(ids);
  g.links_ = std::move(links);
  g.jitter_policy_ = policy;
  g.time_s_ = time_s;
  for (int i = 0; i < static_cast<int>(g.ids_.size()); ++i)
    g.index_.emplace(g.ids_[i], i);
  for (const auto& l : g.links_) {
    if (l.a < 0 || l.b < 0 || l.a >= g.node_count() || l.b >= g.node_count())
      throw ConfigError("link endpoint out of range");
  }
  g.rebuild_adjacency();
  return g;
}

int NetworkGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

std::span<const int> NetworkGraph::adjacent(int node) const {
  return adjacency_[node];
}

void NetworkGraph::rebuild_adjacency() {
  adjacency_.assign(ids_.size(), {});
  for (int i = 0; i < static_cast<int>(links_.size()); ++i) {
    adjacency_[links_[i].a].push_back(i);
    adjacency_[links_[i].b].push_back(i);
  }
}

NetworkGraph build_topology(const Infrastructure& infra,
                            const TopologyConfig& cfg) {
  const auto& nodes = infra.nodes();
  NetworkGraph g;
  g.jitter_policy_ = cfg.jitter_policy;
  g.time_s_ = infra.time_s();
  g.ids_.reserve(nodes.size());
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    g.ids_.push_back(nodes[i].id);
    g.index_.emplace(nodes[i].id, i);
  }

  std::set<std::pair<int, int>> seen;
  auto add_link = [&](int a, int b, LinkKind kind, double latency,
                      double bandwidth) {
    if (a == b) return;
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) return;
    g.links_.push_back({a, b, kind, latency, bandwidth, 0.0, 0.0});
  };

  // Shell coordinates for the +grid pattern.
  std::map<std::pair<int, int>, int> shell;  // (plane, slot) -> node index
  int planes = 0, per_plane = 0;
  std::vector<int> shell_sats, off_shell_sats, terrestrial;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    const auto& n = nodes[i];
    if (n.kind == NodeKind::Satellite) {
      if (n.plane >= 0 && n.slot >= 0) {
        shell.emplace(std::make_pair(n.plane, n.slot), i);
        planes = std::max(planes, n.plane + 1);
        per_plane = std::max(per_plane, n.slot + 1);
        shell_sats.push_back(i);
      } else {
        off_shell_sats.push_back(i);
      }
    } else {
      terrestrial.push_back(i);
    }
  }

  auto try_isl = [&](int a, int b) {
    if (visible_sat_sat(nodes[a].position_km, nodes[b].position_km,
                        cfg.grazing_margin_km)) {
      add_link(a, b, LinkKind::Isl,
               propagation_latency_ms(nodes[a].position_km,
                                      nodes[b].position_km,
                                      cfg.per_hop_overhead_ms),
               cfg.isl_bandwidth_bps);
    }
  };

  // +grid: two intra-plane neighbors, two same-slot neighbors in adjacent planes.
  for (const auto& [coord, idx] : shell) {
    auto [p, s] = coord;
    if (per_plane > 1) {
      auto it = shell.find({p, (s + 1) % per_plane});
      if (it != shell.end()) try_isl(idx, it->second);
    }
    if (planes > 1) {
      auto it = shell.find({(p + 1) % planes, s});
      if (it != shell.end()) try_isl(idx, it->second);
    }
  }

  // Off-shell satellites (e.g. imaging satellites) uplink into the shell.
  for (int eo : off_shell_sats) {
    std::vector<std::pair<double, int>> in_view;
    for (int s : shell_sats) {
      if (visible_sat_sat(nodes[eo].position_km, nodes[s].position_km,
                          cfg.grazing_margin_km))
        in_view.emplace_back((nodes[eo].position_km - nodes[s].position_km).norm(), s);
    }
    int take = std::min<int>(cfg.eo_uplinks, static_cast<int>(in_view.size()));
    std::partial_sort(in_view.begin(), in_view.begin() + take, in_view.end());
    for (int k = 0; k < take; ++k)
      try_isl(eo, in_view[k].second);
  }

  // Ground nodes: K nearest visible satellites.
  std::vector<int> all_sats = shell_sats;
  all_sats.insert(all_sats.end(), off_shell_sats.begin(), off_shell_sats.end());
  for (int t : terrestrial) {
    std::vector<std::pair<double, int>> in_view;
    for (int s : all_sats) {
      if (visible_ground_sat(nodes[t].position_km, nodes[s].position_km,
                             cfg.min_elevation_deg))
        in_view.emplace_back((nodes[t].position_km - nodes[s].position_km).norm(), s);
    }
    int take = std::min<int>(cfg.ground_sat_links, static_cast<int>(in_view.size()));
    std::partial_sort(in_view.begin(), in_view.begin() + take, in_view.end());
    for (int k = 0; k < take; ++k) {
      int s = in_view[k].second;
      add_link(t, s, LinkKind::GroundSat,
               propagation_latency_ms(nodes[t].position_km,
                                      nodes[s].position_km,
                                      cfg.per_hop_overhead_ms),
               cfg.ground_sat_bandwidth_bps);
    }
  }

  // Terrestrial mesh: K nearest neighbors, static seeded latencies.
  for (int t : terrestrial) {
    std::vector<std::pair<double, int>> near;
    for (int u : terrestrial) {
      if (u != t)
        near.emplace_back((nodes[t].position_km - nodes[u].position_km).norm(), u);
    }
    int take = std::min<int>(cfg.terrestrial_neighbors, static_cast<int>(near.size()));
    std::partial_sort(near.begin(), near.begin() + take, near.end());
    for (int k = 0; k < take; ++k) {
      int u = near[k].second;
      add_link(t, u, LinkKind::Terrestrial,
               terrestrial_latency_ms(cfg, nodes[t].id, nodes[u].id),
               cfg.terrestrial_bandwidth_bps);
    }
  }

  g.rebuild_adjacency();
  return g;
}

NetworkGraph refresh(const Infrastructure& infra, const TopologyConfig& cfg) {
  return build_topology(infra, cfg);
}

PathSource::PathSource(const NetworkGraph& graph, int source)
    : graph_(&graph), source_(source) {
  int n = graph.node_count();
  dist_.assign(n, kInf);
  hops_.assign(n, std::numeric_limits<int>::max());
  dist_[source] = 0.0;
  hops_[source] = 0;

  using Entry = std::tuple<double, int, int>;  // dist, hops, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  pq.emplace(0.0, 0, source);
  while (!pq.empty()) {
    auto [d, h, u] = pq.top();
    pq.pop();
    if (d != dist_[u] || h != hops_[u]) continue;
    for (int li : graph.adjacent(u)) {
      const Link& l = graph.links()[li];
      int v = l.a == u ? l.b : l.a;
      double nd = d + l.latency_ms;
      int nh = h + 1;
      if (nd < dist_[v] || (nd == dist_[v] && nh < hops_[v])) {
        dist_[v] = nd;
        hops_[v] = nh;
        pq.emplace(nd, nh, v);
      }
    }
  }
}

bool PathSource::reachable(int target) const { return dist_[target] < kInf; }

double PathSource::latency_ms(int target) const { return dist_[target]; }

const std::vector<int>& PathSource::lex_path(int target) const {
  auto found = memo_.find(target);
  if (found != memo_.end()) return found->second;

  auto id_less = [&](const std::vector<int>& a, const std::vector<int>& b) {
    // equal length by construction (same hop count)
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (a[i] == b[i]) continue;
      return graph_->id(a[i]) < graph_->id(b[i]);
    }
    return false;
  };

  std::vector<int> stack{target};
  while (!stack.empty()) {
    int x = stack.back();
    if (memo_.count(x)) {
      stack.pop_back();
      continue;
    }
    if (x == source_) {
      memo_.emplace(x, std::vector<int>{source_});
      stack.pop_back();
      continue;
    }
    bool ready = true;
    std::vector<int> parents;
    for (int li : graph_->adjacent(x)) {
      const Link& l = graph_->links()[li];
      int p = l.a == x ? l.b : l.a;
      if (dist_[p] + l.latency_ms == dist_[x] && hops_[p] + 1 == hops_[x]) {
        parents.push_back(p);
        if (!memo_.count(p)) {
          ready = false;
          stack.push_back(p);
        }
      }
    }
    if (!ready) continue;
    const std::vector<int>* best = nullptr;
    for (int p : parents) {
      const auto& path = memo_.at(p);
      if (!best || id_less(path, *best)) best = &path;
    }
    std::vector<int> path = *best;
    path.push_back(x);
    memo_.emplace(x, std::move(path));
    stack.pop_back();
  }
  return memo_.at(target);
}

std::optional<PathResult> PathSource::path_to(int target) const {
  if (target == source_) {
    return PathResult{{source_}, NetworkQos{0.0, kInf, 0.0, 0.0}};
  }
  if (!reachable(target)) return std::nullopt;

  PathResult result;
  result.node_path = lex_path(target);
  NetworkQos qos;
  qos.latency_ms = dist_[target];
  qos.bandwidth_bps = kInf;
  double pass_through = 1.0;
  for (std::size_t i = 0; i + 1 < result.node_path.size(); ++i) {
    int a = result.node_path[i];
    int b = result.node_path[i + 1];
    // pick the link that realized the optimal labels; ties by link order
    const Link* used = nullptr;
    for (int li : graph_->adjacent(a)) {
      const Link& l = graph_->links()[li];
      int v = l.a == a ? l.b : l.a;
      if (v != b) continue;
      if (dist_[a] + l.latency_ms == dist_[b]) {
        used = &l;
        break;
      }
    }
    if (!used) return std::nullopt;  // unreachable given label consistency
    qos.bandwidth_bps = std::min(qos.bandwidth_bps, used->bandwidth_bps);
    if (graph_->jitter_policy() == JitterPolicy::Sum)
      qos.jitter_ms += used->jitter_ms;
    else
      qos.jitter_ms = std::max(qos.jitter_ms, used->jitter_ms);
    pass_through *= (1.0 - used->packet_drop);
  }
  qos.packet_drop = 1.0 - pass_through;
  result.qos = qos;
  return result;
}

std::optional<NetworkQos> PathSource::qos_to(int target) const {
  auto res = path_to(target);
  if (!res) return std::nullopt;
  return res->qos;
}

std::optional<PathResult> lowest_latency_path(const NetworkGraph& graph,
                                              const std::string& u,
                                              const std::string& v) {
  int ui = graph.index_of(u);
  int vi = graph.index_of(v);
  if (ui < 0) throw LookupError("unknown node: " + u);
  if (vi < 0) throw LookupError("unknown node: " + v);
  if (ui == vi) throw std::invalid_argument("path endpoints must differ");
  PathSource source(graph, ui);
  return source.path_to(vi);
}

std::optional<NetworkQos> query_qos(const NetworkGraph& graph,
                                    const std::string& u,
                                    const std::string& v) {
  auto res = lowest_latency_path(graph, u, v);
  if (!res) return std::nullopt;
  return res->qos;
}

}  // namespace hyperdrive
