#include "hyperdrive/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperdrive/errors.hpp"
#include "hyperdrive/infrastructure.hpp"

namespace hyperdrive {

int calc_score(double temp_exp_c, double temp_rec_c, double temp_max_c) {
  if (!(temp_rec_c < temp_max_c))
    throw ConfigError("temp_rec must be below temp_max");
  if (temp_exp_c <= temp_rec_c) return 100;
  if (temp_exp_c > temp_max_c) return 0;
  double range = temp_max_c - temp_rec_c;
  double over_rec = temp_exp_c - temp_rec_c;
  return static_cast<int>(std::floor((1.0 - over_rec / range) * 100.0));
}

double estimate_comp_temp_increase(const ThermalSpec& spec,
                                   const ThermalEnvConfig& env, double d_t_s,
                                   double cpu_cores, double gpu_cores) {
  if (d_t_s <= 0.0) throw std::invalid_argument("d_t must be positive");
  if (cpu_cores < 0.0 || gpu_cores < 0.0)
    throw std::invalid_argument("resource request must be non-negative");
  double inc = spec.cpu_heat_rate_c_per_core_s * cpu_cores * d_t_s +
               spec.gpu_heat_rate_c_per_core_s * gpu_cores * d_t_s;
  return std::min(inc, env.comp_ceiling_c);
}

double estimate_comp_temp_increase(const NodeRecord& node,
                                   const ThermalEnvConfig& env, double d_t_s,
                                   double cpu_cores, double gpu_cores) {
  return estimate_comp_temp_increase(node.thermal, env, d_t_s, cpu_cores,
                                     gpu_cores);
}

double estimate_max_orbit_temp(const NodeRecord& node,
                               const ThermalEnvConfig& env, double t_now_s,
                               double d_t_s, double step_s) {
  if (d_t_s <= 0.0) throw std::invalid_argument("d_t must be positive");
  auto position_at = [&](double t) {
    return node.orbit ? propagate(*node.orbit, t) : node.position_km;
  };
  double step = std::max(step_s, 1e-3);
  double exposure = is_sunlit(position_at(t_now_s), t_now_s) ? 1.0 : 0.0;
  double max_env = env.ambient_c(exposure);
  for (double t = t_now_s + step; t <= t_now_s + d_t_s + 1e-9; t += step) {
    double lit = is_sunlit(position_at(t), t) ? 1.0 : 0.0;
    exposure += (lit - exposure) * (1.0 - std::exp(-step / env.lag_tau_s));
    max_env = std::max(max_env, env.ambient_c(exposure));
  }
  return max_env;
}

std::optional<double> effective_duration_s(const WorkflowTask& task) {
  if (task.expected_duration_s) return task.expected_duration_s;
  return task.max_response_time_slo_s;
}

std::optional<double> predicted_peak_temp_c(const WorkflowTask& task,
                                            const NodeRecord& node,
                                            const ThermalEnvConfig& env,
                                            double t_now_s, double step_s) {
  auto d_t = effective_duration_s(task);
  if (!d_t) return std::nullopt;
  double cpu_cores = static_cast<double>(task.resources.cpu_millicores) / 1000.0;
  double gpu_cores = static_cast<double>(task.resources.gpu_cores);
  return estimate_max_orbit_temp(node, env, t_now_s, *d_t, step_s) +
         estimate_comp_temp_increase(node.thermal, env, *d_t, cpu_cores,
                                     gpu_cores);
}

int score_node_temperature(const WorkflowTask& task, const NodeRecord& node,
                           const ThermalEnvConfig& env, double t_now_s,
                           double step_s) {
  if (node.kind != NodeKind::Satellite) return 100;
  auto peak = predicted_peak_temp_c(task, node, env, t_now_s, step_s);
  if (!peak)
    return calc_score(node.thermal_state.current_temp_c, node.thermal.temp_rec_c,
                      node.thermal.temp_max_c);
  return calc_score(*peak, node.thermal.temp_rec_c, node.thermal.temp_max_c);
}

}  // namespace hyperdrive
