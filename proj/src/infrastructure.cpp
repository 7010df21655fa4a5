#include "hyperdrive/infrastructure.hpp"

#include <algorithm>
#include <cmath>

namespace hyperdrive {

Infrastructure::Infrastructure(std::vector<NodeRecord> nodes)
    : nodes_(std::move(nodes)) {
  index_.reserve(nodes_.size());
  name_index_.reserve(nodes_.size());
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    index_.emplace(nodes_[i].id, i);
    name_index_.emplace(nodes_[i].name, i);
  }
}

void Infrastructure::advance_to(double t_s, const ThermalEnvConfig& env) {
  for (auto& node : nodes_) {
    if (node.orbit) node.position_km = propagate(*node.orbit, t_s);
    if (node.kind != NodeKind::Satellite) continue;
    auto& ts = node.thermal_state;
    double dt = t_s - ts.last_update_s;
    if (dt <= 0.0) {
      ts.last_update_s = t_s;
      continue;
    }
    double lit = is_sunlit(node.position_km, t_s) ? 1.0 : 0.0;
    ts.sun_exposure += (lit - ts.sun_exposure) *
                       (1.0 - std::exp(-dt / env.lag_tau_s));
    double ambient = env.ambient_c(ts.sun_exposure);
    double max_step = node.thermal.passive_cooling_rate_c_per_s * dt;
    double delta = std::clamp(ambient - ts.current_temp_c, -max_step, max_step);
    ts.current_temp_c =
        std::clamp(ts.current_temp_c + delta, -120.0, 120.0 + env.comp_ceiling_c);
    ts.last_update_s = t_s;
  }
  time_s_ = t_s;
}

int Infrastructure::index_of(const NodeId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

const NodeRecord* Infrastructure::find(const NodeId& id) const {
  int i = index_of(id);
  return i < 0 ? nullptr : &nodes_[i];
}

NodeRecord* Infrastructure::find_mutable(const NodeId& id) {
  int i = index_of(id);
  return i < 0 ? nullptr : &nodes_[i];
}

const NodeRecord* Infrastructure::find_by_name(const std::string& name) const {
  auto it = name_index_.find(name);
  return it == name_index_.end() ? nullptr : &nodes_[it->second];
}

}  // namespace hyperdrive
