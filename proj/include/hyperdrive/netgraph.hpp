#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperdrive/infrastructure.hpp"
#include "hyperdrive/types.hpp"

namespace hyperdrive {

enum class LinkKind { Isl, GroundSat, Terrestrial };
enum class JitterPolicy { Sum, Max };

struct Link {
  int a = 0;
  int b = 0;
  LinkKind kind = LinkKind::Terrestrial;
  double latency_ms = 0.0;
  double bandwidth_bps = 0.0;
  double jitter_ms = 0.0;
  double packet_drop = 0.0;
};

struct TopologyConfig {
  double isl_bandwidth_bps = 20e9;
  double ground_sat_bandwidth_bps = 5e9;
  double terrestrial_bandwidth_bps = 10e9;
  double per_hop_overhead_ms = 1.0;
  double terrestrial_latency_min_ms = 5.0;
  double terrestrial_latency_max_ms = 40.0;
  int ground_sat_links = 1;      // K nearest visible satellites per ground node
  int terrestrial_neighbors = 5; // K nearest terrestrial neighbors
  int eo_uplinks = 2;            // links from off-shell satellites into the shell
  double min_elevation_deg = 25.0;
  double grazing_margin_km = 30.0;
  JitterPolicy jitter_policy = JitterPolicy::Sum;
  std::uint64_t terrestrial_seed = 0;

  bool operator==(const TopologyConfig&) const = default;
};

/// Immutable snapshot of the continuum network at one time index.
class NetworkGraph {
 public:
  NetworkGraph() = default;

  static NetworkGraph from_links(std::vector<std::string> ids,
                                 std::vector<Link> links,
                                 JitterPolicy policy = JitterPolicy::Sum,
                                 double time_s = 0.0);

  int node_count() const { return static_cast<int>(ids_.size()); }
  int index_of(const std::string& id) const;
  const std::string& id(int index) const { return ids_[index]; }
  const std::vector<Link>& links() const { return links_; }
  std::span<const int> adjacent(int node) const;
  double time_s() const { return time_s_; }
  JitterPolicy jitter_policy() const { return jitter_policy_; }

 private:
  friend NetworkGraph build_topology(const Infrastructure&,
                                     const TopologyConfig&);
  void rebuild_adjacency();

  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> adjacency_;
  JitterPolicy jitter_policy_ = JitterPolicy::Sum;
  double time_s_ = 0.0;
};

/// Builds the graph for the infrastructure's current time: +grid ISLs
/// between mutually visible shell satellites, K nearest visible satellites
/// per ground node, and a K-nearest-neighbor terrestrial mesh with static
/// seeded latencies. ISL and ground-satellite latencies are
/// distance / c + per-hop overhead.
NetworkGraph build_topology(const Infrastructure& infra,
                            const TopologyConfig& cfg);

/// Recomputes the time-varying part of the graph for the infrastructure's
/// current time. Terrestrial links are static, so refreshing at the same
/// time index reproduces the identical graph.
NetworkGraph refresh(const Infrastructure& infra, const TopologyConfig& cfg);

struct PathResult {
  std::vector<int> node_path;  // graph indices, source first
  NetworkQos qos;
};

/// Single-source lowest-latency paths with the documented tie-breaking:
/// minimal latency, then fewest hops, then lexicographically smallest
/// node-id sequence. Construction runs Dijkstra once; per-target path
/// reconstruction is memoized.
class PathSource {
 public:
  PathSource(const NetworkGraph& graph, int source);

  bool reachable(int target) const;
  double latency_ms(int target) const;  // +inf when unreachable
  std::optional<PathResult> path_to(int target) const;
  std::optional<NetworkQos> qos_to(int target) const;

 private:
  const std::vector<int>& lex_path(int target) const;

  const NetworkGraph* graph_;
  int source_;
  std::vector<double> dist_;
  std::vector<int> hops_;
  mutable std::unordered_map<int, std::vector<int>> memo_;
};

/// Latency-minimal path between two distinct nodes, or absent when
/// disconnected. Throws LookupError for unknown ids and
/// std::invalid_argument when u == v.
std::optional<PathResult> lowest_latency_path(const NetworkGraph& graph,
                                              const std::string& u,
                                              const std::string& v);

/// QoS projection of lowest_latency_path.
std::optional<NetworkQos> query_qos(const NetworkGraph& graph,
                                    const std::string& u,
                                    const std::string& v);

}  // namespace hyperdrive
