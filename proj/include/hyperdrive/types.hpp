#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hyperdrive {

using NodeId = std::string;
using TaskId = std::string;

enum class NodeKind { Cloud, Edge, GroundStation, Satellite };

inline constexpr int kNodeKindCount = 4;

const char* to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view s);

/// Resource demand (task side) or capacity (node side). Quantities are
/// integers -- millicores and bytes -- so capacity checks are exact.
/// min_battery_charge only has meaning on the demand side, when requesting
/// a battery-powered node.
struct ResourceSpec {
  std::string cpu_arch;  // empty = any architecture
  std::int64_t cpu_millicores = 0;
  std::int64_t memory_bytes = 0;
  std::int64_t gpu_cores = 0;
  std::int64_t local_storage_bytes = 0;
  double min_battery_charge = 0.0;  // fraction in [0,1]

  bool valid() const {
    return cpu_millicores >= 0 && memory_bytes >= 0 && gpu_cores >= 0 &&
           local_storage_bytes >= 0 && min_battery_charge >= 0.0 &&
           min_battery_charge <= 1.0;
  }

  bool operator==(const ResourceSpec&) const = default;
};

struct NodeResources {
  ResourceSpec total;
  ResourceSpec free;
  std::optional<double> battery_charge;  // present iff battery powered

  /// 0 <= free <= total componentwise, battery in [0,1] when present.
  bool valid() const {
    bool within = free.cpu_millicores >= 0 && free.memory_bytes >= 0 &&
                  free.gpu_cores >= 0 && free.local_storage_bytes >= 0 &&
                  free.cpu_millicores <= total.cpu_millicores &&
                  free.memory_bytes <= total.memory_bytes &&
                  free.gpu_cores <= total.gpu_cores &&
                  free.local_storage_bytes <= total.local_storage_bytes;
    bool battery_ok =
        !battery_charge || (*battery_charge >= 0.0 && *battery_charge <= 1.0);
    return within && battery_ok && total.valid();
  }

  bool operator==(const NodeResources&) const = default;
};

/// Per-link network objective. Absent fields are unconstrained.
struct NetworkSlo {
  std::optional<double> max_latency_ms;
  std::optional<double> min_bandwidth_bps;
  std::optional<double> max_jitter_ms;
  std::optional<double> max_packet_drop;  // fraction in [0,1]

  bool valid() const {
    auto nonneg = [](const std::optional<double>& v) { return !v || *v >= 0.0; };
    return nonneg(max_latency_ms) && nonneg(min_bandwidth_bps) &&
           nonneg(max_jitter_ms) && nonneg(max_packet_drop) &&
           (!max_packet_drop || *max_packet_drop <= 1.0);
  }

  bool unconstrained() const {
    return !max_latency_ms && !min_bandwidth_bps && !max_jitter_ms &&
           !max_packet_drop;
  }

  bool operator==(const NetworkSlo&) const = default;
};

/// Aggregated QoS of a network path.
struct NetworkQos {
  double latency_ms = 0.0;
  double bandwidth_bps = 0.0;
  double jitter_ms = 0.0;
  double packet_drop = 0.0;
};

/// True iff qos satisfies every present field of the objective.
/// Rejection is strict: latency > max, bandwidth < min, and so on.
inline bool qos_meets(const NetworkQos& qos, const NetworkSlo& slo) {
  if (slo.max_latency_ms && qos.latency_ms > *slo.max_latency_ms) return false;
  if (slo.min_bandwidth_bps && qos.bandwidth_bps < *slo.min_bandwidth_bps)
    return false;
  if (slo.max_jitter_ms && qos.jitter_ms > *slo.max_jitter_ms) return false;
  if (slo.max_packet_drop && qos.packet_drop > *slo.max_packet_drop)
    return false;
  return true;
}

/// Candidate preselection: per-kind vicinity radius around a task's location
/// anchor, a cap on the candidate set, and per-kind composition quotas.
/// Quotas may sum to less than 1; the shortfall is redistributed
/// proportionally to kinds that still have nodes available.
struct VicinityConfig {
  double cloud_radius_km = 500.0;
  double edge_radius_km = 200.0;
  double ground_station_radius_km = 200.0;
  double satellite_radius_km = 2000.0;
  int candidate_set_size = 500;
  double cloud_quota = 0.4;
  double edge_quota = 0.4;
  double ground_station_quota = 0.0;
  double satellite_quota = 0.1;

  double radius_for(NodeKind k) const;
  double quota_for(NodeKind k) const;

  bool valid() const {
    auto q_ok = [](double q) { return q >= 0.0 && q <= 1.0; };
    return cloud_radius_km > 0 && edge_radius_km > 0 &&
           ground_station_radius_km > 0 && satellite_radius_km > 0 &&
           candidate_set_size >= 1 && q_ok(cloud_quota) && q_ok(edge_quota) &&
           q_ok(ground_station_quota) && q_ok(satellite_quota);
  }

  bool operator==(const VicinityConfig&) const = default;
};

}  // namespace hyperdrive
