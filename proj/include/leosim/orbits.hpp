#pragma once

// Circular two-body orbits and Walker-style constellation construction.
// Propagation advances the mean anomaly at the Keplerian rate and rotates the
// in-plane position through inclination and RAAN. Eccentric orbits are outside
// the model: anything with e >= 0.01 is rejected instead of approximated.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosim/geodesy.hpp"

namespace leosim::orbits {

inline constexpr double kMuEarthKm3S2 = 398600.4418;

// Tolerance below which an orbit is treated as circular.
inline constexpr double kMaxEccentricity = 0.01;

struct OrbitalElements {
  double semi_major_axis_km = 0.0;
  double eccentricity = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double arg_perigee_deg = 0.0;
  double mean_anomaly_deg = 0.0;  // at epoch_s
  double epoch_s = 0.0;           // simulation time of the elements
};

struct ConstellationSpec {
  int num_planes = 0;
  int sats_per_plane = 0;
  double altitude_km = 0.0;
  double inclination_deg = 53.0;
  double raan_spread_deg = 360.0;  // planes spread over this much RAAN
  int phase_factor = 0;            // inter-plane phasing, Walker F
  double min_elevation_deg = 25.0;
};

// One constellation member with its grid label.
struct SatelliteElement {
  int plane = -1;
  int slot = -1;
  OrbitalElements elements;
};

inline double period_from_semi_major_axis(double a_km) {
  if (!(a_km > 0.0))
    throw std::domain_error("period: semi-major axis must be positive, got " +
                            std::to_string(a_km));
  return 2.0 * std::numbers::pi * std::sqrt(a_km * a_km * a_km / kMuEarthKm3S2);
}

inline double period_from_altitude(double altitude_km) {
  if (!(altitude_km > 0.0))
    throw std::domain_error("period_from_altitude: altitude must be positive, got " +
                            std::to_string(altitude_km));
  return period_from_semi_major_axis(geodesy::kEarthRadiusKm + altitude_km);
}

inline double mean_motion_rad_s(const OrbitalElements& el) {
  const double a = el.semi_major_axis_km;
  if (!(a > 0.0))
    throw std::domain_error("mean_motion: semi-major axis must be positive");
  return std::sqrt(kMuEarthKm3S2 / (a * a * a));
}

// Evenly spaced planes and slots. Plane j takes raan = j * spread / P, the
// satellite in slot k of plane j starts at mean anomaly
// k * 360 / S + j * F * 360 / (P * S). Order: plane-major, slot-minor.
inline std::vector<SatelliteElement> build_constellation(const ConstellationSpec& spec) {
  if (spec.num_planes <= 0 || spec.sats_per_plane <= 0)
    throw std::domain_error("build_constellation: plane and slot counts must be positive");
  if (!(spec.altitude_km > 0.0))
    throw std::domain_error("build_constellation: altitude must be positive");

  const int planes = spec.num_planes;
  const int per_plane = spec.sats_per_plane;
  std::vector<SatelliteElement> sats;
  sats.reserve(static_cast<size_t>(planes) * per_plane);
  for (int j = 0; j < planes; ++j) {
    const double raan = j * spec.raan_spread_deg / planes;
    const double plane_phase = j * spec.phase_factor * 360.0 / (planes * per_plane);
    for (int k = 0; k < per_plane; ++k) {
      SatelliteElement s;
      s.plane = j;
      s.slot = k;
      s.elements.semi_major_axis_km = geodesy::kEarthRadiusKm + spec.altitude_km;
      s.elements.eccentricity = 0.0;
      s.elements.inclination_deg = spec.inclination_deg;
      s.elements.raan_deg = std::fmod(raan, 360.0);
      s.elements.arg_perigee_deg = 0.0;
      s.elements.mean_anomaly_deg = std::fmod(k * 360.0 / per_plane + plane_phase, 360.0);
      s.elements.epoch_s = 0.0;
      sats.push_back(s);
    }
  }
  return sats;
}

// Position at time t for a near-circular orbit. The argument of latitude is
// arg_perigee + mean anomaly, advanced at the constant mean motion.
inline geodesy::EciPosition propagate(const OrbitalElements& el, double time_s) {
  if (!(el.eccentricity < kMaxEccentricity) || el.eccentricity < 0.0)
    throw std::domain_error("propagate: unsupported eccentricity " +
                            std::to_string(el.eccentricity) +
                            " (the circular model requires e in [0, 0.01))");
  const double n = mean_motion_rad_s(el);
  const double u = geodesy::deg_to_rad(el.arg_perigee_deg + el.mean_anomaly_deg) +
                   n * (time_s - el.epoch_s);
  const double i = geodesy::deg_to_rad(el.inclination_deg);
  const double om = geodesy::deg_to_rad(el.raan_deg);
  const double a = el.semi_major_axis_km;

  const double xp = a * std::cos(u);
  const double yp = a * std::sin(u);

  geodesy::EciPosition p;
  p.x_km = xp * std::cos(om) - yp * std::cos(i) * std::sin(om);
  p.y_km = xp * std::sin(om) + yp * std::cos(i) * std::cos(om);
  p.z_km = yp * std::sin(i);
  p.epoch_s = time_s;
  return p;
}

}  // namespace leosim::orbits
