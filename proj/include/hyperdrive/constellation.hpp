#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "hyperdrive/workflow.hpp"

namespace hyperdrive {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kMuKm3S2 = 398600.4418;
inline constexpr double kSpeedOfLightKmS = 299792.458;
inline constexpr double kSolarDayS = 86400.0;

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Walker-style shell: evenly spaced planes, evenly spaced satellites per
/// plane, adjacent planes offset in phase by phasing_offset_deg.
struct ConstellationSpec {
  int planes = 1;
  int sats_per_plane = 1;
  double altitude_km = 550.0;
  double inclination_deg = 53.0;
  double phasing_offset_deg = 0.0;

  bool valid() const {
    return planes >= 1 && sats_per_plane >= 1 && altitude_km > 0.0 &&
           inclination_deg >= 0.0 && inclination_deg <= 180.0;
  }

  bool operator==(const ConstellationSpec&) const = default;
};

/// ECEF point with geodetic accessors (spherical Earth model).
struct GeoPosition {
  Eigen::Vector3d ecef_km = Eigen::Vector3d::Zero();

  double lat_deg() const;
  double lon_deg() const;
  double alt_km() const;

  static GeoPosition from_lat_lon_alt(double lat_deg, double lon_deg,
                                      double alt_km);
};

/// Circular two-body orbit. The argument of latitude at time t is
/// anomaly_epoch_rad + mean_motion * t.
struct OrbitalElements {
  double semi_major_km = kEarthRadiusKm + 550.0;
  double inclination_rad = 0.0;
  double raan_rad = 0.0;
  double anomaly_epoch_rad = 0.0;

  double mean_motion_rad_s() const {
    return std::sqrt(kMuKm3S2 /
                     (semi_major_km * semi_major_km * semi_major_km));
  }
  double period_s() const {
    return 2.0 * std::numbers::pi / mean_motion_rad_s();
  }

  bool operator==(const OrbitalElements&) const = default;
};

struct SatelliteSeed {
  int plane = 0;
  int slot = 0;
  OrbitalElements orbit;
};

struct SunState {
  bool sunlit = true;
  double fraction_of_orbit_in_sun = 1.0;
};

/// planes x sats_per_plane satellites, evenly spaced in mean anomaly within
/// each plane and in RAAN across planes. Deterministic for a given spec.
/// Throws ConfigError on an invalid spec.
std::vector<SatelliteSeed> build_constellation(const ConstellationSpec& spec,
                                               double epoch_s = 0.0);

/// Position on the circular orbit at epoch + t_s seconds.
Eigen::Vector3d propagate(const OrbitalElements& orbit, double t_s);

/// Unit sun direction; rotates once per solar day in the equatorial plane.
Eigen::Vector3d sun_direction(double t_s);

/// False iff the position is inside Earth's cylindrical shadow at t_s.
bool is_sunlit(const Eigen::Vector3d& pos_km, double t_s);

/// Instantaneous sunlit flag plus the sunlit fraction of one orbital period
/// starting at t_s, swept at sweep_step_s.
SunState sun_state(const OrbitalElements& orbit, double t_s,
                   double sweep_step_s = 10.0);

/// Ground-to-satellite visibility: elevation above the local horizon must
/// reach min_elevation_deg (in [0, 90]).
bool visible_ground_sat(const Eigen::Vector3d& ground_km,
                        const Eigen::Vector3d& sat_km,
                        double min_elevation_deg);

/// Satellite-to-satellite visibility: the straight segment must clear
/// Earth's surface plus a grazing margin.
bool visible_sat_sat(const Eigen::Vector3d& a_km, const Eigen::Vector3d& b_km,
                     double grazing_margin_km);

/// Orbit whose subsatellite point at time t_s is (lat, lon). Requires
/// |lat| <= inclination for inclinations up to 90 degrees.
OrbitalElements orbit_overhead(double lat_deg, double lon_deg,
                               double altitude_km, double inclination_deg,
                               double t_s);

/// Great-circle destination on the spherical Earth, at zero altitude.
LatLonAlt geo_destination(double lat_deg, double lon_deg, double bearing_deg,
                          double distance_km);

}  // namespace hyperdrive
