#pragma once

// Scenario files: a small INI-style format, one key per line, with repeatable
// [ground_station] and [ping_app] blocks. Every key is checked against the
// known set and rejected otherwise, so typos fail before the run starts.
//
//   sim_time_limit_s = 1200        # required
//   update_interval_s = 10         # required, topology refresh period
//   tx_duration_s = 0.001          # relay channel occupancy per packet
//   processing_delay_s = 0
//   histogram_bin_ms = 0.1
//   earth_phase_theta0_deg = 0     # prime meridian offset at t = 0
//   dump_topology = false          # write per-snapshot edge lists
//
//   [constellation]                # required; walker grid or a TLE file
//   planes = 15
//   sats_per_plane = 10
//   altitude_km = 600
//   inclination_deg = 53
//   raan_spread_deg = 360
//   phase_factor = 0
//   # tle_file = path.tle          # alternative to the six keys above
//
//   [links]
//   enable_intersatellite_links = false
//   min_elevation_deg = 25
//   isl_mode = ring                # or same_plane_in_range
//   max_isl_range_km = inf
//   allow_gs_gs = false
//
//   [ground_station]               # repeat per station
//   name = london
//   role = sender                  # sender | receiver | relay
//   latitude_deg = 51.5074
//   longitude_deg = -0.1278
//   altitude_m = 0
//
//   [trace]                        # optional, for trace-driven applications
//   file = sensors.csv             # raw trace or a derived schedule CSV
//
//   [ping_app]                     # repeat per application
//   source = london
//   destination = kenmare
//   start_time_s = 0
//   send_interval_s = 0.5          # periodic mode ...
//   # sensor_id = 110              # ... or trace mode, driven by [trace]
//   # count = 100                  # optional cap on sends

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "leosim/errors.hpp"
#include "leosim/geodesy.hpp"
#include "leosim/orbits.hpp"
#include "leosim/topology.hpp"

namespace leosim::scenario {

enum class StationRole { Sender, Receiver, Relay };

inline const char* to_string(StationRole r) {
  switch (r) {
    case StationRole::Sender: return "sender";
    case StationRole::Receiver: return "receiver";
    case StationRole::Relay: return "relay";
  }
  return "?";
}

struct GroundStationConfig {
  std::string name;
  StationRole role = StationRole::Relay;
  geodesy::GeoPoint location;
};

struct PingAppConfig {
  std::string source;
  std::string destination;
  double start_time_s = 0.0;
  double send_interval_s = 0.0;  // periodic mode when > 0
  long long sensor_id = -1;      // trace mode when >= 0
  long long count = -1;          // optional cap
};

struct ScenarioConfig {
  double sim_time_limit_s = 0.0;
  double update_interval_s = 0.0;
  double tx_duration_s = 0.001;
  double processing_delay_s = 0.0;
  double histogram_bin_ms = 0.1;
  double earth_phase_theta0_deg = 0.0;
  bool dump_topology = false;

  std::optional<orbits::ConstellationSpec> constellation;  // walker grid
  std::string tle_file;                                    // or elements from file

  topology::LinkRules link_rules;

  std::vector<GroundStationConfig> ground_stations;
  std::string trace_file;  // optional feed for trace-driven apps
  std::vector<PingAppConfig> apps;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void fail(size_t line_no, const std::string& why) {
  throw ParseError("scenario line " + std::to_string(line_no) + ": " + why);
}

inline double to_double(const std::string& v, size_t line_no, const std::string& key) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end == v.c_str() || *end != '\0')
    fail(line_no, "key '" + key + "' needs a number, got '" + v + "'");
  return d;
}

inline long long to_int(const std::string& v, size_t line_no, const std::string& key) {
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end == v.c_str() || *end != '\0')
    fail(line_no, "key '" + key + "' needs an integer, got '" + v + "'");
  return i;
}

inline bool to_bool(const std::string& v, size_t line_no, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(line_no, "key '" + key + "' needs true or false, got '" + v + "'");
}

}  // namespace detail

// Parses without semantic validation; call validate() afterwards (the file
// loader does both). base_dir resolves relative tle/trace paths.
inline ScenarioConfig parse_scenario(std::istream& in, const std::string& base_dir = "") {
  using namespace detail;
  ScenarioConfig cfg;
  orbits::ConstellationSpec walker;
  bool walker_touched = false;
  bool in_constellation = false;

  std::string section;  // empty = top level
  GroundStationConfig* gs = nullptr;
  PingAppConfig* app = nullptr;

  auto resolve = [&base_dir](const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_absolute() || base_dir.empty()) return p;
    return (std::filesystem::path(base_dir) / path).string();
  };

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') fail(line_no, "unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      gs = nullptr;
      app = nullptr;
      in_constellation = false;
      if (section == "ground_station") {
        cfg.ground_stations.emplace_back();
        gs = &cfg.ground_stations.back();
      } else if (section == "ping_app") {
        cfg.apps.emplace_back();
        app = &cfg.apps.back();
      } else if (section == "constellation") {
        in_constellation = true;
      } else if (section != "links" && section != "trace") {
        fail(line_no, "unknown section '[" + section + "]'");
      }
      continue;
    }

    const size_t eq = text.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "key '" + key + "' has no value");

    if (section.empty()) {
      if (key == "sim_time_limit_s") cfg.sim_time_limit_s = to_double(value, line_no, key);
      else if (key == "update_interval_s") cfg.update_interval_s = to_double(value, line_no, key);
      else if (key == "tx_duration_s") cfg.tx_duration_s = to_double(value, line_no, key);
      else if (key == "processing_delay_s") cfg.processing_delay_s = to_double(value, line_no, key);
      else if (key == "histogram_bin_ms") cfg.histogram_bin_ms = to_double(value, line_no, key);
      else if (key == "earth_phase_theta0_deg")
        cfg.earth_phase_theta0_deg = to_double(value, line_no, key);
      else if (key == "dump_topology") cfg.dump_topology = to_bool(value, line_no, key);
      else fail(line_no, "unknown key '" + key + "'");
    } else if (in_constellation) {
      if (key == "planes") walker.num_planes = static_cast<int>(to_int(value, line_no, key));
      else if (key == "sats_per_plane")
        walker.sats_per_plane = static_cast<int>(to_int(value, line_no, key));
      else if (key == "altitude_km") walker.altitude_km = to_double(value, line_no, key);
      else if (key == "inclination_deg") walker.inclination_deg = to_double(value, line_no, key);
      else if (key == "raan_spread_deg") walker.raan_spread_deg = to_double(value, line_no, key);
      else if (key == "phase_factor")
        walker.phase_factor = static_cast<int>(to_int(value, line_no, key));
      else if (key == "tle_file") cfg.tle_file = resolve(value);
      else fail(line_no, "unknown key '" + key + "' in [constellation]");
      if (key != "tle_file") walker_touched = true;
    } else if (section == "links") {
      auto& rules = cfg.link_rules;
      if (key == "enable_intersatellite_links")
        rules.enable_intersatellite_links = to_bool(value, line_no, key);
      else if (key == "min_elevation_deg") rules.min_elevation_deg = to_double(value, line_no, key);
      else if (key == "allow_gs_gs") rules.allow_gs_gs = to_bool(value, line_no, key);
      else if (key == "max_isl_range_km") rules.max_isl_range_km = to_double(value, line_no, key);
      else if (key == "isl_mode") {
        if (value == "ring") rules.isl_mode = topology::IslMode::RingAdjacent;
        else if (value == "same_plane_in_range")
          rules.isl_mode = topology::IslMode::SamePlaneInRange;
        else fail(line_no, "isl_mode must be 'ring' or 'same_plane_in_range', got '" + value + "'");
      } else fail(line_no, "unknown key '" + key + "' in [links]");
    } else if (section == "trace") {
      if (key == "file") cfg.trace_file = resolve(value);
      else fail(line_no, "unknown key '" + key + "' in [trace]");
    } else if (section == "ground_station") {
      if (key == "name") gs->name = value;
      else if (key == "role") {
        if (value == "sender") gs->role = StationRole::Sender;
        else if (value == "receiver") gs->role = StationRole::Receiver;
        else if (value == "relay") gs->role = StationRole::Relay;
        else fail(line_no, "role must be sender, receiver or relay, got '" + value + "'");
      } else if (key == "latitude_deg") gs->location.latitude_deg = to_double(value, line_no, key);
      else if (key == "longitude_deg") gs->location.longitude_deg = to_double(value, line_no, key);
      else if (key == "altitude_m") gs->location.altitude_m = to_double(value, line_no, key);
      else fail(line_no, "unknown key '" + key + "' in [ground_station]");
    } else if (section == "ping_app") {
      if (key == "source") app->source = value;
      else if (key == "destination") app->destination = value;
      else if (key == "start_time_s") app->start_time_s = to_double(value, line_no, key);
      else if (key == "send_interval_s") app->send_interval_s = to_double(value, line_no, key);
      else if (key == "sensor_id") app->sensor_id = to_int(value, line_no, key);
      else if (key == "count") app->count = to_int(value, line_no, key);
      else fail(line_no, "unknown key '" + key + "' in [ping_app]");
    }
  }

  if (walker_touched) cfg.constellation = walker;
  return cfg;
}

// Cross-field checks; everything here throws ConfigError before a run starts.
inline void validate(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& why) { throw ConfigError("scenario: " + why); };

  if (!(cfg.sim_time_limit_s > 0.0)) fail("sim_time_limit_s must be positive");
  if (!(cfg.update_interval_s > 0.0)) fail("update_interval_s must be positive");
  if (cfg.tx_duration_s < 0.0) fail("tx_duration_s must not be negative");
  if (cfg.processing_delay_s < 0.0) fail("processing_delay_s must not be negative");
  if (!(cfg.histogram_bin_ms > 0.0)) fail("histogram_bin_ms must be positive");

  if (!cfg.constellation.has_value() && cfg.tle_file.empty())
    fail("a [constellation] block is required (walker keys or tle_file)");
  if (cfg.constellation.has_value() && !cfg.tle_file.empty())
    fail("[constellation] cannot mix walker keys with tle_file");
  if (cfg.constellation.has_value()) {
    const auto& w = *cfg.constellation;
    if (w.num_planes <= 0 || w.sats_per_plane <= 0)
      fail("[constellation] planes and sats_per_plane must be positive");
    if (!(w.altitude_km > 0.0)) fail("[constellation] altitude_km must be positive");
    if (!(w.raan_spread_deg > 0.0) || w.raan_spread_deg > 360.0)
      fail("[constellation] raan_spread_deg must lie in (0, 360]");
    if (w.phase_factor < 0) fail("[constellation] phase_factor must not be negative");
  }

  if (!(cfg.link_rules.min_elevation_deg >= 0.0) || cfg.link_rules.min_elevation_deg >= 90.0)
    fail("[links] min_elevation_deg must lie in [0, 90)");
  if (cfg.link_rules.isl_mode == topology::IslMode::SamePlaneInRange &&
      !(cfg.link_rules.max_isl_range_km < std::numeric_limits<double>::infinity()))
    fail("[links] same_plane_in_range needs a finite max_isl_range_km");

  std::set<std::string> names;
  for (const auto& gs : cfg.ground_stations) {
    if (gs.name.empty()) fail("every [ground_station] needs a name");
    if (!names.insert(gs.name).second) fail("duplicate ground station name '" + gs.name + "'");
    if (gs.location.latitude_deg < -90.0 || gs.location.latitude_deg > 90.0 ||
        gs.location.longitude_deg < -180.0 || gs.location.longitude_deg > 180.0)
      fail("ground station '" + gs.name + "' has out-of-range coordinates");
  }

  if (cfg.apps.empty()) fail("at least one [ping_app] is required");
  for (size_t i = 0; i < cfg.apps.size(); ++i) {
    const auto& app = cfg.apps[i];
    const std::string where = "[ping_app] #" + std::to_string(i + 1);
    if (!names.count(app.source))
      fail(where + " references unknown source '" + app.source + "'");
    if (!names.count(app.destination))
      fail(where + " references unknown destination '" + app.destination + "'");
    if (app.source == app.destination) fail(where + " has identical source and destination");
    if (app.start_time_s < 0.0) fail(where + " start_time_s must not be negative");
    const bool periodic = app.send_interval_s > 0.0;
    const bool traced = app.sensor_id >= 0;
    if (periodic == traced)
      fail(where + " needs exactly one of send_interval_s or sensor_id");
    if (traced && cfg.trace_file.empty())
      fail(where + " uses sensor_id but no [trace] file is configured");
  }
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  const std::string dir = std::filesystem::path(path).parent_path().string();
  ScenarioConfig cfg = parse_scenario(in, dir);
  validate(cfg);
  return cfg;
}

// Canonical key=value rendering of the effective configuration; embedded in
// run artifacts so a result directory records what produced it.
inline std::string config_echo(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "sim_time_limit_s=" << cfg.sim_time_limit_s << "\n"
      << "update_interval_s=" << cfg.update_interval_s << "\n"
      << "tx_duration_s=" << cfg.tx_duration_s << "\n"
      << "processing_delay_s=" << cfg.processing_delay_s << "\n"
      << "histogram_bin_ms=" << cfg.histogram_bin_ms << "\n"
      << "earth_phase_theta0_deg=" << cfg.earth_phase_theta0_deg << "\n"
      << "dump_topology=" << (cfg.dump_topology ? "true" : "false") << "\n";
  if (cfg.constellation) {
    const auto& w = *cfg.constellation;
    out << "constellation.planes=" << w.num_planes << "\n"
        << "constellation.sats_per_plane=" << w.sats_per_plane << "\n"
        << "constellation.altitude_km=" << w.altitude_km << "\n"
        << "constellation.inclination_deg=" << w.inclination_deg << "\n"
        << "constellation.raan_spread_deg=" << w.raan_spread_deg << "\n"
        << "constellation.phase_factor=" << w.phase_factor << "\n";
  }
  if (!cfg.tle_file.empty()) out << "constellation.tle_file=" << cfg.tle_file << "\n";
  out << "links.enable_intersatellite_links="
      << (cfg.link_rules.enable_intersatellite_links ? "true" : "false") << "\n"
      << "links.min_elevation_deg=" << cfg.link_rules.min_elevation_deg << "\n"
      << "links.isl_mode="
      << (cfg.link_rules.isl_mode == topology::IslMode::RingAdjacent ? "ring"
                                                                     : "same_plane_in_range")
      << "\n"
      << "links.max_isl_range_km=" << cfg.link_rules.max_isl_range_km << "\n"
      << "links.allow_gs_gs=" << (cfg.link_rules.allow_gs_gs ? "true" : "false") << "\n";
  if (!cfg.trace_file.empty()) out << "trace.file=" << cfg.trace_file << "\n";
  for (const auto& gs : cfg.ground_stations)
    out << "ground_station." << gs.name << "=" << to_string(gs.role) << ","
        << gs.location.latitude_deg << "," << gs.location.longitude_deg << ","
        << gs.location.altitude_m << "\n";
  for (const auto& app : cfg.apps) {
    out << "ping_app." << app.source << ">" << app.destination << "=start:" << app.start_time_s;
    if (app.send_interval_s > 0.0) out << ",interval:" << app.send_interval_s;
    if (app.sensor_id >= 0) out << ",sensor:" << app.sensor_id;
    if (app.count >= 0) out << ",count:" << app.count;
    out << "\n";
  }
  return out.str();
}

}  // namespace leosim::scenario
