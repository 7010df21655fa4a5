#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperdrive/constellation.hpp"
#include "hyperdrive/thermal.hpp"
#include "hyperdrive/types.hpp"

namespace hyperdrive {

/// One compute node of the continuum. Satellites carry orbital elements and
/// a (plane, slot) shell coordinate; terrestrial nodes have fixed positions.
struct NodeRecord {
  NodeId id;
  std::string name;
  NodeKind kind = NodeKind::Cloud;
  bool schedulable = true;
  NodeResources resources;
  Eigen::Vector3d position_km = Eigen::Vector3d::Zero();
  std::optional<OrbitalElements> orbit;
  int plane = -1;  // shell coordinates; -1 for off-shell satellites
  int slot = -1;
  ThermalSpec thermal;
  ThermalState thermal_state;
};

/// Node table with id/name lookup and the simulation clock. Positions and
/// thermal state advance only through advance_to (single-writer contract).
class Infrastructure {
 public:
  Infrastructure() = default;
  explicit Infrastructure(std::vector<NodeRecord> nodes);

  /// Propagates satellite positions to t_s and ticks the thermal state.
  void advance_to(double t_s, const ThermalEnvConfig& env);

  double time_s() const { return time_s_; }
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  std::vector<NodeRecord>& nodes_mutable() { return nodes_; }

  int index_of(const NodeId& id) const;  // -1 when absent
  const NodeRecord* find(const NodeId& id) const;
  NodeRecord* find_mutable(const NodeId& id);
  const NodeRecord* find_by_name(const std::string& name) const;

 private:
  std::vector<NodeRecord> nodes_;
  std::unordered_map<NodeId, int> index_;
  std::unordered_map<std::string, int> name_index_;
  double time_s_ = 0.0;
};

}  // namespace hyperdrive
