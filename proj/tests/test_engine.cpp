#include "leosim/engine.hpp"

#include <filesystem>
#include <fstream>

#include "catch2/catch_amalgamated.hpp"

using namespace leosim;
using namespace leosim::engine;
using Catch::Approx;

namespace {

// Tiny single-satellite world: one equatorial satellite at 600 km starting
// over (0, 0), two stations a couple of degrees along its track.
scenario::ScenarioConfig tiny_world() {
  scenario::ScenarioConfig cfg;
  cfg.sim_time_limit_s = 1.0;
  cfg.update_interval_s = 1.0;
  orbits::ConstellationSpec walker;
  walker.num_planes = 1;
  walker.sats_per_plane = 1;
  walker.altitude_km = 600.0;
  walker.inclination_deg = 0.0;
  cfg.constellation = walker;
  scenario::GroundStationConfig a;
  a.name = "east";
  a.role = scenario::StationRole::Sender;
  a.location = {0.0, 2.0, 0.0};
  scenario::GroundStationConfig b;
  b.name = "west";
  b.role = scenario::StationRole::Receiver;
  b.location = {0.0, -2.0, 0.0};
  cfg.ground_stations = {a, b};
  scenario::PingAppConfig app;
  app.source = "east";
  app.destination = "west";
  app.send_interval_s = 1.0;
  cfg.apps = {app};
  return cfg;
}

}  // namespace

TEST_CASE("snapshot counts cover every refresh strictly before the limit") {
  auto cfg = tiny_world();
  cfg.sim_time_limit_s = 1200.0;
  cfg.update_interval_s = 10.0;
  CHECK(run_scenario(cfg).snapshot_count == 120);

  cfg.sim_time_limit_s = 100.0;
  cfg.update_interval_s = 30.0;
  CHECK(run_scenario(cfg).snapshot_count == 4);  // 0, 30, 60, 90

  cfg.sim_time_limit_s = 90.0;
  CHECK(run_scenario(cfg).snapshot_count == 3);  // 90 itself excluded
}

TEST_CASE("a single relayed ping matches the routing answer") {
  const auto cfg = tiny_world();
  const auto result = run_scenario(cfg);

  REQUIRE(result.senders.size() == 1);
  const auto& rep = result.senders[0];
  REQUIRE(rep.outcomes.size() == 1);
  const auto& out = rep.outcomes[0];
  CHECK(out.status == traffic::PingStatus::Delivered);
  CHECK(out.path.size() == 3);  // east, the satellite, west

  // replaying the same geometry through the topology layer must agree
  orbits::ConstellationSpec spec = *cfg.constellation;
  const auto sats = orbits::build_constellation(spec);
  const std::vector<geodesy::GeoPoint> gs = {cfg.ground_stations[0].location,
                                             cfg.ground_stations[1].location};
  const auto snap = topology::build_snapshot(0.0, sats, gs, cfg.link_rules);
  const auto expected = topology::route(snap, 1, 2);
  REQUIRE(expected.reachable);
  CHECK(out.rtt_ms == Approx(2.0 * expected.delay_ms).epsilon(1e-12));
  CHECK(rep.summary.pings_transmitted == 1);
  CHECK(rep.summary.pings_received == 1);
  CHECK(rep.summary.ping_loss_pct == 0.0);
}

TEST_CASE("sends use the snapshot of their own window, refreshed at the boundary") {
  // station "far" sits ahead of the satellite track, below a 60 degree
  // elevation threshold at t = 0 but above it by t = 10
  auto cfg = tiny_world();
  cfg.sim_time_limit_s = 11.0;
  cfg.update_interval_s = 10.0;
  cfg.link_rules.min_elevation_deg = 60.0;
  cfg.ground_stations[0].location = {0.0, 3.2, 0.0};  // far, the sender
  cfg.ground_stations[1].location = {0.0, 1.0, 0.0};  // near, always visible
  cfg.apps[0].start_time_s = 5.0;
  cfg.apps[0].send_interval_s = 5.0;  // sends at 5 and 10

  // the test geometry must actually straddle the threshold; verify with the
  // geometry primitives, then check the engine observed the same thing
  const auto sats = orbits::build_constellation(*cfg.constellation);
  auto elevation_at = [&](double t) {
    const auto sat = orbits::propagate(sats[0].elements, t);
    const auto far_station = geodesy::geodetic_to_eci(cfg.ground_stations[0].location, t);
    return geodesy::elevation_angle(far_station, sat);
  };
  REQUIRE(elevation_at(0.0) < 60.0);
  REQUIRE(elevation_at(10.0) >= 60.0);

  const auto result = run_scenario(cfg);
  REQUIRE(result.senders[0].outcomes.size() == 2);
  // t = 5 send still lives in the t = 0 window: no route yet
  CHECK(result.senders[0].outcomes[0].status == traffic::PingStatus::DroppedUnreachable);
  // t = 10 send happens after the boundary refresh and gets through
  CHECK(result.senders[0].outcomes[1].status == traffic::PingStatus::Delivered);
}

TEST_CASE("identical runs are byte-identical") {
  auto cfg = tiny_world();
  cfg.sim_time_limit_s = 60.0;
  cfg.update_interval_s = 10.0;
  cfg.apps[0].send_interval_s = 0.5;
  const auto first = run_scenario(cfg);
  const auto second = run_scenario(cfg);
  CHECK(first.outcome_log_csv == second.outcome_log_csv);
  CHECK(first.fingerprint == second.fingerprint);
  CHECK(first.node_table_csv == second.node_table_csv);
  CHECK(first.config_echo == second.config_echo);
  CHECK(first.config_echo == scenario::config_echo(cfg));
}

TEST_CASE("the outcome log is one formatted row per ping") {
  auto cfg = tiny_world();
  cfg.sim_time_limit_s = 2.0;
  const auto result = run_scenario(cfg);
  CHECK(result.outcome_log_csv.rfind("sender_id,seq,send_time_s,status,rtt_ms,drop_node,path_len\n",
                                     0) == 0);
  // sender node 1 (after the one satellite), seq 0, sent at 0
  CHECK(result.outcome_log_csv.find("\n1,0,0.000000,delivered,") != std::string::npos);
  CHECK(result.outcome_log_csv.find("\n1,1,1.000000,delivered,") != std::string::npos);
  CHECK(result.fingerprint == fnv1a64(result.outcome_log_csv));
}

TEST_CASE("node tables list satellites before stations") {
  const auto result = run_scenario(tiny_world());
  CHECK(result.node_table_csv ==
        "id,kind,label\n"
        "0,satellite,sat(0,0)\n"
        "1,ground_station,east\n"
        "2,ground_station,west\n");
}

TEST_CASE("duplicate sender names get numbered labels") {
  auto cfg = tiny_world();
  scenario::PingAppConfig again = cfg.apps[0];
  cfg.apps.push_back(again);
  const auto result = run_scenario(cfg);
  REQUIRE(result.senders.size() == 2);
  CHECK(result.senders[0].label == "east");
  CHECK(result.senders[1].label == "east_2");
}

TEST_CASE("trace-driven apps shift the shared schedule by their start time") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "leosim_engine_test";
  fs::create_directories(dir);
  const fs::path schedule = dir / "schedule.csv";
  std::ofstream(schedule) << "sensor_id,relative_time_s\n5,0\n5,60\n5,3600\n";

  auto cfg = tiny_world();
  cfg.sim_time_limit_s = 100.0;
  cfg.update_interval_s = 10.0;
  cfg.trace_file = schedule.string();
  cfg.apps[0].send_interval_s = 0.0;
  cfg.apps[0].sensor_id = 5;
  cfg.apps[0].start_time_s = 20.0;

  const auto result = run_scenario(cfg);
  const auto& outs = result.senders[0].outcomes;
  // 3600 s entry falls beyond the 100 s limit
  REQUIRE(outs.size() == 2);
  CHECK(outs[0].send_time_s == 20.0);
  CHECK(outs[1].send_time_s == 80.0);

  cfg.apps[0].sensor_id = 99;  // not in the schedule
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("trace parser warnings surface in the run result") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "leosim_engine_warn";
  fs::create_directories(dir);
  const fs::path raw = dir / "raw.csv";
  std::ofstream(raw) << "sensor_id,urn,latitude,longitude,timestamp,type,value\n"
                     << "5,urn:x:weird9,43.0,-3.0,1000,stable,1\n"
                     << "5,urn:x:weird9,43.0,-3.0,1060,stable,1\n";
  auto cfg = tiny_world();
  cfg.trace_file = raw.string();
  cfg.apps[0].send_interval_s = 0.0;
  cfg.apps[0].sensor_id = 5;
  const auto result = run_scenario(cfg);
  REQUIRE_FALSE(result.warnings.empty());
  CHECK(result.warnings[0].find("weird9") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("TLE-sourced satellites carry no plane and form no ring links") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "leosim_engine_tle";
  fs::create_directories(dir);
  const fs::path tle = dir / "sat.tle";
  std::ofstream(tle)
      << "1 23455U 94089A   97320.90946019  .00000140  00000-0  10191-3 0  2621\n"
      << "2 23455  99.0090 272.6745 0008546 223.1686 136.8816 14.11711747148495\n";

  auto cfg = tiny_world();
  cfg.constellation.reset();
  cfg.tle_file = tle.string();
  cfg.link_rules.enable_intersatellite_links = true;
  const auto result = run_scenario(cfg);
  CHECK(result.node_table_csv.find("0,satellite,sat[0]\n") != std::string::npos);
  // single polar satellite, equatorial stations: nothing gets through,
  // but the run completes and accounts for the ping
  REQUIRE(result.senders[0].outcomes.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("topology dumps are opt-in") {
  auto cfg = tiny_world();
  CHECK(run_scenario(cfg).topology_dump_csv.empty());

  cfg.sim_time_limit_s = 20.0;
  cfg.update_interval_s = 10.0;
  cfg.dump_topology = true;
  const auto result = run_scenario(cfg);
  CHECK(result.topology_dump_csv.rfind("time_s,node_a,node_b,delay_ms\n", 0) == 0);
  CHECK(result.topology_dump_csv.find("0.000000,0,1,") != std::string::npos);
  CHECK(result.topology_dump_csv.find("10.000000,0,1,") != std::string::npos);
}

TEST_CASE("invalid configurations are rejected before running") {
  auto cfg = tiny_world();
  cfg.apps[0].destination = "east";
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);

  auto cfg2 = tiny_world();
  cfg2.sim_time_limit_s = -5.0;
  CHECK_THROWS_AS(run_scenario(cfg2), ConfigError);
}
