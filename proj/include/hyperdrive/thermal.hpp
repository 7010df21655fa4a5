#pragma once

#include <optional>

#include "hyperdrive/workflow.hpp"

namespace hyperdrive {

struct NodeRecord;

/// Per-node thermal parameters. Heat rates are degrees C contributed per
/// core-second of load; passive cooling pulls the component temperature
/// toward the ambient profile.
struct ThermalSpec {
  double temp_rec_c = 55.0;  // recommended high temperature
  double temp_max_c = 75.0;  // maximum operating temperature
  double cpu_heat_rate_c_per_core_s = 0.002;
  double gpu_heat_rate_c_per_core_s = 0.004;
  double passive_cooling_rate_c_per_s = 0.05;

  bool valid() const {
    return temp_rec_c < temp_max_c && cpu_heat_rate_c_per_core_s >= 0.0 &&
           gpu_heat_rate_c_per_core_s >= 0.0 &&
           passive_cooling_rate_c_per_s >= 0.0;
  }

  bool operator==(const ThermalSpec&) const = default;
};

struct ThermalState {
  double current_temp_c = 20.0;
  double sun_exposure = 0.0;  // first-order lagged sunlit fraction, [0,1]
  double accumulated_exc_c = 0.0;  // sum of committed computational heat
  double last_update_s = 0.0;
};

/// Environment model shared by all satellites: the external sunlit/shade
/// extremes are attenuated by the enclosure to an internal range, the sunlit
/// boolean is smoothed with a first-order lag, and computational heating
/// saturates at a ceiling.
struct ThermalEnvConfig {
  double shade_c = -20.0;
  double sun_c = 60.0;
  double lag_tau_s = 600.0;
  double comp_ceiling_c = 30.0;

  double ambient_c(double sun_exposure) const {
    return shade_c + (sun_c - shade_c) * sun_exposure;
  }

  bool operator==(const ThermalEnvConfig&) const = default;
};

/// 100 at or below the recommended temperature, 0 above the maximum,
/// linear floor in between. Throws ConfigError unless temp_rec < temp_max.
int calc_score(double temp_exp_c, double temp_rec_c, double temp_max_c);

/// Heating caused by cpu_cores + gpu_cores of load for d_t seconds, capped
/// at the configured ceiling. Throws std::invalid_argument for d_t <= 0 or
/// negative loads.
double estimate_comp_temp_increase(const ThermalSpec& spec,
                                   const ThermalEnvConfig& env, double d_t_s,
                                   double cpu_cores, double gpu_cores);
double estimate_comp_temp_increase(const NodeRecord& node,
                                   const ThermalEnvConfig& env, double d_t_s,
                                   double cpu_cores, double gpu_cores);

/// Maximum ambient (internal) temperature over [t_now, t_now + d_t], swept
/// at step_s with the lag initialized from the node's sunlit state at t_now.
double estimate_max_orbit_temp(const NodeRecord& node,
                               const ThermalEnvConfig& env, double t_now_s,
                               double d_t_s, double step_s);

/// expected_duration, falling back to the max response time objective.
std::optional<double> effective_duration_s(const WorkflowTask& task);

/// Peak temperature expected for the node while it runs the task: max orbit
/// ambient plus computational heating. Absent when no duration is known.
std::optional<double> predicted_peak_temp_c(const WorkflowTask& task,
                                            const NodeRecord& node,
                                            const ThermalEnvConfig& env,
                                            double t_now_s, double step_s);

/// Temperature score in [0,100]. Non-satellite nodes always score 100;
/// satellites with no known duration are scored on their current
/// temperature; otherwise on the predicted peak.
int score_node_temperature(const WorkflowTask& task, const NodeRecord& node,
                           const ThermalEnvConfig& env, double t_now_s,
                           double step_s);

}  // namespace hyperdrive
