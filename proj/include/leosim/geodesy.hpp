#pragma once

// Spherical-earth geometry: coverage of a satellite at altitude H seen under
// a minimum elevation angle, ground-to-satellite visibility, and conversion
// of geodetic coordinates to an earth-centered inertial frame.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace leosim::geodesy {

inline constexpr double kEarthRadiusKm = 6378.0;
inline constexpr double kEarthRotationRadS = 7.2921159e-5;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct GeoPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
};

// Position in the inertial frame. epoch_s records the simulation time the
// coordinates refer to.
struct EciPosition {
  double x_km = 0.0;
  double y_km = 0.0;
  double z_km = 0.0;
  double epoch_s = 0.0;
};

// Solution of the coverage triangle for one (altitude, min elevation) pair.
// The three angles close a right spherical triangle:
//   elevation_eps0 + nadir_alpha0 + central_beta0 = 90 degrees.
struct CoverageGeometry {
  double elevation_eps0_deg = 0.0;
  double nadir_alpha0_deg = 0.0;
  double central_beta0_deg = 0.0;
  double slant_range_d_km = 0.0;     // ground station to satellite at threshold
  double cap_height_h_km = 0.0;      // height of the covered spherical cap
  double coverage_fraction = 0.0;    // cap area / full sphere area
  double footprint_radius_km = 0.0;  // cap radius measured along the surface
  double altitude_H_km = 0.0;
};

inline CoverageGeometry coverage_geometry(double altitude_km, double min_elevation_deg) {
  if (!(altitude_km > 0.0))
    throw std::domain_error("coverage_geometry: altitude must be positive, got " +
                            std::to_string(altitude_km));
  if (!(min_elevation_deg >= 0.0) || !(min_elevation_deg < 90.0))
    throw std::domain_error("coverage_geometry: elevation must lie in [0, 90), got " +
                            std::to_string(min_elevation_deg));

  const double r = kEarthRadiusKm + altitude_km;
  const double eps = deg_to_rad(min_elevation_deg);
  const double sin_alpha = kEarthRadiusKm / r * std::cos(eps);
  const double alpha = std::asin(sin_alpha);
  const double beta = std::numbers::pi / 2.0 - eps - alpha;

  CoverageGeometry g;
  g.elevation_eps0_deg = min_elevation_deg;
  g.nadir_alpha0_deg = rad_to_deg(alpha);
  g.central_beta0_deg = rad_to_deg(beta);
  // Law of cosines in the ground-station / satellite / earth-center triangle,
  // solved for the slant range.
  g.slant_range_d_km =
      -kEarthRadiusKm * std::sin(eps) +
      std::sqrt(kEarthRadiusKm * kEarthRadiusKm * std::sin(eps) * std::sin(eps) +
                r * r - kEarthRadiusKm * kEarthRadiusKm);
  g.cap_height_h_km = kEarthRadiusKm * (1.0 - std::cos(beta));
  g.coverage_fraction = 0.5 * (1.0 - std::cos(beta));
  g.footprint_radius_km = kEarthRadiusKm * beta;
  g.altitude_H_km = altitude_km;
  return g;
}

// CSV table of coverage percentages. Header row lists the elevation angles,
// each following row starts with the altitude. Cells carry two decimals.
inline std::string coverage_table(const std::vector<double>& altitudes_km,
                                  const std::vector<double>& elevations_deg) {
  if (altitudes_km.empty() || elevations_deg.empty())
    throw std::domain_error("coverage_table: empty altitude or elevation list");

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };

  std::string out = "altitude_km";
  for (double e : elevations_deg) out += "," + fmt(e);
  out += "\n";
  for (double h : altitudes_km) {
    out += fmt(h);
    for (double e : elevations_deg) {
      char buf[32];
      std::snprintf(buf, sizeof buf, ",%.2f", coverage_geometry(h, e).coverage_fraction * 100.0);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

// Haversine distance over the sphere of radius kEarthRadiusKm; altitudes are
// ignored on purpose, the result is a surface distance.
inline double great_circle_distance(const GeoPoint& a, const GeoPoint& b) {
  const double p1 = deg_to_rad(a.latitude_deg);
  const double p2 = deg_to_rad(b.latitude_deg);
  const double dp = p2 - p1;
  const double dl = deg_to_rad(b.longitude_deg - a.longitude_deg);
  const double s = std::sin(dp / 2.0) * std::sin(dp / 2.0) +
                   std::cos(p1) * std::cos(p2) * std::sin(dl / 2.0) * std::sin(dl / 2.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(s)));
}

// Earth-fixed point rotated into the inertial frame. The prime meridian sits
// at right ascension theta0 + rotation_rate * t; theta0 defaults to zero and
// is configurable per scenario.
inline EciPosition geodetic_to_eci(const GeoPoint& p, double time_s, double theta0_deg = 0.0) {
  const double rho = kEarthRadiusKm + p.altitude_m / 1000.0;
  const double lat = deg_to_rad(p.latitude_deg);
  const double lon = deg_to_rad(p.longitude_deg) + deg_to_rad(theta0_deg) +
                     kEarthRotationRadS * time_s;
  EciPosition e;
  e.x_km = rho * std::cos(lat) * std::cos(lon);
  e.y_km = rho * std::cos(lat) * std::sin(lon);
  e.z_km = rho * std::sin(lat);
  e.epoch_s = time_s;
  return e;
}

// Elevation of the satellite above the station's local horizon, in degrees.
// Positive when the satellite is above the horizon plane, negative below.
inline double elevation_angle(const EciPosition& station, const EciPosition& satellite) {
  const double dx = satellite.x_km - station.x_km;
  const double dy = satellite.y_km - station.y_km;
  const double dz = satellite.z_km - station.z_km;
  const double range = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (range < 1e-3)  // below one meter the direction is undefined
    throw std::domain_error("elevation_angle: station and satellite coincide");
  const double sn = std::sqrt(station.x_km * station.x_km + station.y_km * station.y_km +
                              station.z_km * station.z_km);
  if (sn < 1e-3)
    throw std::domain_error("elevation_angle: station sits at the earth's center");
  const double dot = (station.x_km * dx + station.y_km * dy + station.z_km * dz) / (sn * range);
  return rad_to_deg(std::asin(std::max(-1.0, std::min(1.0, dot))));
}

// Visibility under a minimum elevation threshold; the threshold itself counts
// as visible.
inline bool is_visible(const EciPosition& station, const EciPosition& satellite,
                       double min_elevation_deg) {
  return elevation_angle(station, satellite) >= min_elevation_deg;
}

}  // namespace leosim::geodesy
