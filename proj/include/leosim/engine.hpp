#pragma once

// Deterministic scenario execution. All send times are known up front, so the
// event loop is a static schedule processed in (time, kind, source, seq)
// order: at equal times a topology refresh precedes any send, sends order by
// source node id, then sequence number. Two identical runs produce identical
// outcome logs byte for byte.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "leosim/errors.hpp"
#include "leosim/ingest.hpp"
#include "leosim/metrics.hpp"
#include "leosim/scenario.hpp"
#include "leosim/tle.hpp"
#include "leosim/topology.hpp"
#include "leosim/traffic.hpp"

namespace leosim::engine {

struct SenderReport {
  std::string label;  // unique per app; derived from the source station name
  int app_index = -1;
  int source_node = -1;
  int destination_node = -1;
  std::vector<traffic::PingOutcome> outcomes;
  metrics::MetricsSummary summary;
};

struct RunResult {
  std::vector<SenderReport> senders;  // in [ping_app] declaration order
  long long snapshot_count = 0;
  std::string config_echo;
  std::string outcome_log_csv;        // canonical per-ping log, fingerprint input
  std::uint64_t fingerprint = 0;
  std::string node_table_csv;         // node id to label mapping
  std::string topology_dump_csv;      // only with dump_topology = true
  std::vector<std::string> warnings;
};

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace detail {

struct Event {
  double time_s = 0.0;
  int tier = 0;  // 0 = topology refresh, 1 = ping send
  int source_node = -1;
  long long seq = 0;
  int app_index = -1;

  bool operator<(const Event& other) const {
    if (time_s != other.time_s) return time_s < other.time_s;
    if (tier != other.tier) return tier < other.tier;
    if (source_node != other.source_node) return source_node < other.source_node;
    if (seq != other.seq) return seq < other.seq;
    return app_index < other.app_index;
  }
};

inline std::string format_outcome_row(int sender_id, const traffic::PingOutcome& o) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%lld,%.6f,%s,%.6f,%d,%zu\n", sender_id, o.seq, o.send_time_s,
                traffic::to_string(o.status), o.rtt_ms, o.drop_node, o.path.size());
  return buf;
}

inline std::string sat_label(const topology::NodeRef& n) {
  if (n.plane >= 0)
    return "sat(" + std::to_string(n.plane) + "," + std::to_string(n.slot) + ")";
  return "sat[" + std::to_string(n.id) + "]";
}

}  // namespace detail

inline RunResult run_scenario(const scenario::ScenarioConfig& cfg) {
  scenario::validate(cfg);

  // Satellites: a walker grid, or unlabeled elements from a TLE file. TLE
  // sets carry no plane information, so those satellites never form
  // inter-satellite links.
  std::vector<orbits::SatelliteElement> satellites;
  if (cfg.constellation) {
    orbits::ConstellationSpec spec = *cfg.constellation;
    spec.min_elevation_deg = cfg.link_rules.min_elevation_deg;
    satellites = orbits::build_constellation(spec);
  } else {
    for (const auto& rec : orbits::parse_tle_file(cfg.tle_file)) {
      orbits::SatelliteElement s;
      s.elements = orbits::elements_from_tle(rec);
      satellites.push_back(s);
    }
    if (satellites.empty()) throw ConfigError("TLE file '" + cfg.tle_file + "' holds no records");
  }

  RunResult result;
  result.config_echo = scenario::config_echo(cfg);

  const int sat_count = static_cast<int>(satellites.size());
  std::vector<geodesy::GeoPoint> gs_points;
  std::vector<std::string> gs_names;
  for (const auto& gs : cfg.ground_stations) {
    gs_points.push_back(gs.location);
    gs_names.push_back(gs.name);
  }
  auto node_of = [&](const std::string& name) {
    for (size_t i = 0; i < gs_names.size(); ++i)
      if (gs_names[i] == name) return sat_count + static_cast<int>(i);
    throw ConfigError("unknown ground station '" + name + "'");  // unreachable after validate
  };

  // Trace-driven applications pull their send times from the shared source.
  ingest::ScheduleSet schedules;
  if (!cfg.trace_file.empty())
    schedules = ingest::load_schedule_source(cfg.trace_file, &result.warnings);

  std::vector<traffic::PingAppConfig> apps;
  std::vector<std::string> labels;
  for (size_t i = 0; i < cfg.apps.size(); ++i) {
    const auto& a = cfg.apps[i];
    traffic::PingAppConfig t;
    t.source_node = node_of(a.source);
    t.destination_node = node_of(a.destination);
    t.start_time_s = a.start_time_s;
    t.send_interval_s = a.send_interval_s;
    t.count_limit = a.count;
    if (a.sensor_id >= 0) {
      const ingest::ScheduleSet::Entry* entry = nullptr;
      for (const auto& e : schedules.entries)
        if (e.sensor_id == a.sensor_id) entry = &e;
      if (entry == nullptr)
        throw ConfigError("sensor " + std::to_string(a.sensor_id) +
                          " is not present in the trace");
      t.schedule_s.reserve(entry->times_s.size());
      for (long long ts : entry->times_s)
        t.schedule_s.push_back(a.start_time_s + static_cast<double>(ts));
    }
    std::string label = a.source;
    int suffix = 2;
    while (std::find(labels.begin(), labels.end(), label) != labels.end())
      label = a.source + "_" + std::to_string(suffix++);
    labels.push_back(label);
    t.label = label;
    apps.push_back(std::move(t));
  }

  // Static event schedule.
  std::vector<detail::Event> events;
  for (long long k = 0; static_cast<double>(k) * cfg.update_interval_s < cfg.sim_time_limit_s; ++k) {
    detail::Event e;
    e.time_s = static_cast<double>(k) * cfg.update_interval_s;
    e.tier = 0;
    events.push_back(e);
    ++result.snapshot_count;
  }
  std::vector<std::vector<double>> send_times(apps.size());
  for (size_t i = 0; i < apps.size(); ++i) {
    send_times[i] = traffic::schedule_sends(apps[i], cfg.sim_time_limit_s);
    for (size_t k = 0; k < send_times[i].size(); ++k) {
      detail::Event e;
      e.time_s = send_times[i][k];
      e.tier = 1;
      e.source_node = apps[i].source_node;
      e.seq = static_cast<long long>(k);
      e.app_index = static_cast<int>(i);
      events.push_back(e);
    }
  }
  std::sort(events.begin(), events.end());

  result.senders.resize(apps.size());
  for (size_t i = 0; i < apps.size(); ++i) {
    auto& rep = result.senders[i];
    rep.label = apps[i].label;
    rep.app_index = static_cast<int>(i);
    rep.source_node = apps[i].source_node;
    rep.destination_node = apps[i].destination_node;
    rep.outcomes.reserve(send_times[i].size());
  }

  const size_t node_count = static_cast<size_t>(sat_count) + gs_points.size();
  std::vector<traffic::NodeChannel> channels(node_count);
  traffic::TransmitParams params;
  params.tx_duration_s = cfg.tx_duration_s;
  params.processing_delay_s = cfg.processing_delay_s;

  std::string log = "sender_id,seq,send_time_s,status,rtt_ms,drop_node,path_len\n";
  std::string dump;
  if (cfg.dump_topology) dump = "time_s,node_a,node_b,delay_ms\n";

  std::optional<topology::TopologySnapshot> snapshot;
  for (const auto& ev : events) {
    if (ev.tier == 0) {
      snapshot = topology::build_snapshot(ev.time_s, satellites, gs_points, cfg.link_rules,
                                          cfg.earth_phase_theta0_deg);
      for (auto& ch : channels) ch.release_before(ev.time_s);
      if (cfg.dump_topology) {
        char buf[96];
        for (const auto& e : snapshot->edges) {
          std::snprintf(buf, sizeof buf, "%.6f,%d,%d,%.6f\n", ev.time_s, e.a, e.b, e.delay_ms);
          dump += buf;
        }
      }
      continue;
    }
    auto& rep = result.senders[static_cast<size_t>(ev.app_index)];
    traffic::PingOutcome out = traffic::transmit(*snapshot, channels,
                                                 apps[static_cast<size_t>(ev.app_index)], ev.seq,
                                                 ev.time_s, params);
    log += detail::format_outcome_row(ev.source_node, out);
    rep.outcomes.push_back(std::move(out));
  }

  for (auto& rep : result.senders)
    rep.summary = metrics::summarize(rep.outcomes, cfg.histogram_bin_ms);

  result.outcome_log_csv = std::move(log);
  result.fingerprint = fnv1a64(result.outcome_log_csv);
  result.topology_dump_csv = std::move(dump);

  std::string nodes = "id,kind,label\n";
  if (snapshot) {
    for (const auto& n : snapshot->nodes) {
      nodes += std::to_string(n.id);
      if (n.kind == topology::NodeKind::Satellite)
        nodes += ",satellite," + detail::sat_label(n);
      else
        nodes += ",ground_station," + gs_names[static_cast<size_t>(n.gs_index)];
      nodes += "\n";
    }
  }
  result.node_table_csv = std::move(nodes);
  return result;
}

}  // namespace leosim::engine
