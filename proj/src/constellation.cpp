#include "hyperdrive/constellation.hpp"

#include <algorithm>
#include <stdexcept>

#include "hyperdrive/errors.hpp"

namespace hyperdrive {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}
}  // namespace

double GeoPosition::lat_deg() const {
  double r = ecef_km.norm();
  if (r == 0.0) return 0.0;
  return rad2deg(std::asin(ecef_km.z() / r));
}

double GeoPosition::lon_deg() const {
  if (ecef_km.x() == 0.0 && ecef_km.y() == 0.0) return 0.0;
  return rad2deg(std::atan2(ecef_km.y(), ecef_km.x()));
}

double GeoPosition::alt_km() const { return ecef_km.norm() - kEarthRadiusKm; }

GeoPosition GeoPosition::from_lat_lon_alt(double lat_deg, double lon_deg,
                                          double alt_km) {
  double lat = deg2rad(lat_deg);
  double lon = deg2rad(lon_deg);
  double r = kEarthRadiusKm + alt_km;
  return GeoPosition{Eigen::Vector3d(r * std::cos(lat) * std::cos(lon),
                                     r * std::cos(lat) * std::sin(lon),
                                     r * std::sin(lat))};
}

std::vector<SatelliteSeed> build_constellation(const ConstellationSpec& spec,
                                               double epoch_s) {
  if (!spec.valid()) throw ConfigError("invalid constellation spec");
  const double a = kEarthRadiusKm + spec.altitude_km;
  const double inc = deg2rad(spec.inclination_deg);
  const double phase = deg2rad(spec.phasing_offset_deg);
  const double n = OrbitalElements{a, inc, 0.0, 0.0}.mean_motion_rad_s();

  std::vector<SatelliteSeed> out;
  out.reserve(static_cast<std::size_t>(spec.planes) * spec.sats_per_plane);
  for (int p = 0; p < spec.planes; ++p) {
    double raan = kTwoPi * p / spec.planes;
    for (int s = 0; s < spec.sats_per_plane; ++s) {
      double m0 = kTwoPi * s / spec.sats_per_plane + phase * p + n * epoch_s;
      out.push_back({p, s, OrbitalElements{a, inc, raan, wrap_angle(m0)}});
    }
  }
  return out;
}

Eigen::Vector3d propagate(const OrbitalElements& orbit, double t_s) {
  double u = wrap_angle(orbit.anomaly_epoch_rad +
                        orbit.mean_motion_rad_s() * t_s);
  double cu = std::cos(u), su = std::sin(u);
  double co = std::cos(orbit.raan_rad), so = std::sin(orbit.raan_rad);
  double ci = std::cos(orbit.inclination_rad);
  double si = std::sin(orbit.inclination_rad);
  return orbit.semi_major_km *
         Eigen::Vector3d(co * cu - so * su * ci, so * cu + co * su * ci,
                         su * si);
}

Eigen::Vector3d sun_direction(double t_s) {
  double theta = kTwoPi * (t_s / kSolarDayS);
  return {std::cos(theta), std::sin(theta), 0.0};
}

bool is_sunlit(const Eigen::Vector3d& pos_km, double t_s) {
  Eigen::Vector3d s = sun_direction(t_s);
  double along = pos_km.dot(s);
  if (along >= 0.0) return true;
  return (pos_km - along * s).norm() >= kEarthRadiusKm;
}

SunState sun_state(const OrbitalElements& orbit, double t_s,
                   double sweep_step_s) {
  SunState state;
  state.sunlit = is_sunlit(propagate(orbit, t_s), t_s);
  double period = orbit.period_s();
  double step = std::max(sweep_step_s, 1e-3);
  long samples = 0, lit = 0;
  for (double t = t_s; t < t_s + period; t += step) {
    ++samples;
    if (is_sunlit(propagate(orbit, t), t)) ++lit;
  }
  state.fraction_of_orbit_in_sun =
      samples > 0 ? static_cast<double>(lit) / samples : 1.0;
  return state;
}

bool visible_ground_sat(const Eigen::Vector3d& ground_km,
                        const Eigen::Vector3d& sat_km,
                        double min_elevation_deg) {
  if (min_elevation_deg < 0.0 || min_elevation_deg > 90.0)
    throw std::invalid_argument("min_elevation must be in [0, 90]");
  Eigen::Vector3d rel = sat_km - ground_km;
  double rn = rel.norm();
  if (rn == 0.0) return true;
  double gn = ground_km.norm();
  if (gn == 0.0) return true;
  double sin_el = ground_km.dot(rel) / (gn * rn);
  return sin_el >= std::sin(deg2rad(min_elevation_deg));
}

bool visible_sat_sat(const Eigen::Vector3d& a_km, const Eigen::Vector3d& b_km,
                     double grazing_margin_km) {
  Eigen::Vector3d d = b_km - a_km;
  double len2 = d.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(-a_km.dot(d) / len2, 0.0, 1.0);
  double closest = (a_km + t * d).norm();
  return closest >= kEarthRadiusKm + grazing_margin_km;
}

OrbitalElements orbit_overhead(double lat_deg, double lon_deg,
                               double altitude_km, double inclination_deg,
                               double t_s) {
  double inc = deg2rad(inclination_deg);
  double lat = deg2rad(lat_deg);
  double si = std::sin(inc);
  if (std::abs(si) < 1e-12 && std::abs(lat) > 1e-9)
    throw ConfigError("equatorial orbit cannot pass over a nonzero latitude");
  double ratio = std::clamp(si == 0.0 ? 0.0 : std::sin(lat) / si, -1.0, 1.0);
  double u = std::asin(ratio);  // ascending pass
  OrbitalElements orbit;
  orbit.semi_major_km = kEarthRadiusKm + altitude_km;
  orbit.inclination_rad = inc;
  double lon_in_plane = std::atan2(std::sin(u) * std::cos(inc), std::cos(u));
  orbit.raan_rad = wrap_angle(deg2rad(lon_deg) - lon_in_plane);
  orbit.anomaly_epoch_rad = wrap_angle(u - orbit.mean_motion_rad_s() * t_s);
  return orbit;
}

LatLonAlt geo_destination(double lat_deg, double lon_deg, double bearing_deg,
                          double distance_km) {
  double lat1 = deg2rad(lat_deg);
  double lon1 = deg2rad(lon_deg);
  double brng = deg2rad(bearing_deg);
  double dr = distance_km / kEarthRadiusKm;
  double lat2 = std::asin(std::sin(lat1) * std::cos(dr) +
                          std::cos(lat1) * std::sin(dr) * std::cos(brng));
  double lon2 =
      lon1 + std::atan2(std::sin(brng) * std::sin(dr) * std::cos(lat1),
                        std::cos(dr) - std::sin(lat1) * std::sin(lat2));
  return {rad2deg(lat2), rad2deg(std::remainder(lon2, kTwoPi)), 0.0};
}

}  // namespace hyperdrive
