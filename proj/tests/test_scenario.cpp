#include "leosim/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"

using namespace leosim;
using namespace leosim::scenario;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

ScenarioConfig parse_text(const std::string& text, const std::string& base_dir = "") {
  std::stringstream in(text);
  return parse_scenario(in, base_dir);
}

// Minimal configuration that passes validate(); tests mutate it to probe
// individual rules.
ScenarioConfig valid_config() {
  ScenarioConfig cfg;
  cfg.sim_time_limit_s = 1200.0;
  cfg.update_interval_s = 10.0;
  orbits::ConstellationSpec walker;
  walker.num_planes = 15;
  walker.sats_per_plane = 10;
  walker.altitude_km = 600.0;
  cfg.constellation = walker;
  GroundStationConfig a;
  a.name = "london";
  a.role = StationRole::Sender;
  a.location = {51.5074, -0.1278, 0.0};
  GroundStationConfig b;
  b.name = "kenmare";
  b.role = StationRole::Receiver;
  b.location = {51.9, -9.66, 0.0};
  cfg.ground_stations = {a, b};
  PingAppConfig app;
  app.source = "london";
  app.destination = "kenmare";
  app.send_interval_s = 0.5;
  cfg.apps = {app};
  return cfg;
}

const std::string kFullScenario =
    "# round trip between two stations\n"
    "sim_time_limit_s = 1200\n"
    "update_interval_s = 10   # refresh cadence\n"
    "tx_duration_s = 0.002\n"
    "processing_delay_s = 0.0005\n"
    "histogram_bin_ms = 0.25\n"
    "earth_phase_theta0_deg = 12.5\n"
    "dump_topology = true\n"
    "\n"
    "[constellation]\n"
    "planes = 15\n"
    "sats_per_plane = 10\n"
    "altitude_km = 600\n"
    "inclination_deg = 53\n"
    "raan_spread_deg = 360\n"
    "phase_factor = 1\n"
    "\n"
    "[links]\n"
    "enable_intersatellite_links = true\n"
    "min_elevation_deg = 25\n"
    "isl_mode = same_plane_in_range\n"
    "max_isl_range_km = 4000\n"
    "allow_gs_gs = false\n"
    "\n"
    "[ground_station]\n"
    "name = london\n"
    "role = sender\n"
    "latitude_deg = 51.5074\n"
    "longitude_deg = -0.1278\n"
    "altitude_m = 11\n"
    "\n"
    "[ground_station]\n"
    "name = kenmare\n"
    "role = receiver\n"
    "latitude_deg = 51.9\n"
    "longitude_deg = -9.66\n"
    "\n"
    "[trace]\n"
    "file = traces/sample.csv\n"
    "\n"
    "[ping_app]\n"
    "source = london\n"
    "destination = kenmare\n"
    "start_time_s = 0\n"
    "send_interval_s = 0.5\n"
    "count = 100\n"
    "\n"
    "[ping_app]\n"
    "source = kenmare\n"
    "destination = london\n"
    "start_time_s = 20\n"
    "sensor_id = 110\n";

}  // namespace

TEST_CASE("a full scenario file parses field by field") {
  const auto cfg = parse_text(kFullScenario, "/data");

  CHECK(cfg.sim_time_limit_s == 1200.0);
  CHECK(cfg.update_interval_s == 10.0);
  CHECK(cfg.tx_duration_s == 0.002);
  CHECK(cfg.processing_delay_s == 0.0005);
  CHECK(cfg.histogram_bin_ms == 0.25);
  CHECK(cfg.earth_phase_theta0_deg == 12.5);
  CHECK(cfg.dump_topology);

  REQUIRE(cfg.constellation.has_value());
  CHECK(cfg.constellation->num_planes == 15);
  CHECK(cfg.constellation->sats_per_plane == 10);
  CHECK(cfg.constellation->altitude_km == 600.0);
  CHECK(cfg.constellation->inclination_deg == 53.0);
  CHECK(cfg.constellation->raan_spread_deg == 360.0);
  CHECK(cfg.constellation->phase_factor == 1);
  CHECK(cfg.tle_file.empty());

  CHECK(cfg.link_rules.enable_intersatellite_links);
  CHECK(cfg.link_rules.min_elevation_deg == 25.0);
  CHECK(cfg.link_rules.isl_mode == topology::IslMode::SamePlaneInRange);
  CHECK(cfg.link_rules.max_isl_range_km == 4000.0);
  CHECK_FALSE(cfg.link_rules.allow_gs_gs);

  REQUIRE(cfg.ground_stations.size() == 2);
  CHECK(cfg.ground_stations[0].name == "london");
  CHECK(cfg.ground_stations[0].role == StationRole::Sender);
  CHECK(cfg.ground_stations[0].location.latitude_deg == Approx(51.5074));
  CHECK(cfg.ground_stations[0].location.altitude_m == 11.0);
  CHECK(cfg.ground_stations[1].name == "kenmare");
  CHECK(cfg.ground_stations[1].role == StationRole::Receiver);

  // relative paths resolve against the scenario directory
  CHECK(cfg.trace_file == "/data/traces/sample.csv");

  REQUIRE(cfg.apps.size() == 2);
  CHECK(cfg.apps[0].source == "london");
  CHECK(cfg.apps[0].destination == "kenmare");
  CHECK(cfg.apps[0].send_interval_s == 0.5);
  CHECK(cfg.apps[0].sensor_id == -1);
  CHECK(cfg.apps[0].count == 100);
  CHECK(cfg.apps[1].start_time_s == 20.0);
  CHECK(cfg.apps[1].sensor_id == 110);
  CHECK(cfg.apps[1].send_interval_s == 0.0);

  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("defaults hold when optional keys are omitted") {
  const auto cfg = parse_text(
      "sim_time_limit_s = 100\nupdate_interval_s = 5\n"
      "[constellation]\nplanes = 2\nsats_per_plane = 3\naltitude_km = 600\n");
  CHECK(cfg.tx_duration_s == 0.001);
  CHECK(cfg.processing_delay_s == 0.0);
  CHECK(cfg.histogram_bin_ms == 0.1);
  CHECK(cfg.earth_phase_theta0_deg == 0.0);
  CHECK_FALSE(cfg.dump_topology);
  CHECK_FALSE(cfg.link_rules.enable_intersatellite_links);
  CHECK(cfg.link_rules.min_elevation_deg == 25.0);
  CHECK(cfg.link_rules.isl_mode == topology::IslMode::RingAdjacent);
  CHECK(cfg.link_rules.max_isl_range_km == std::numeric_limits<double>::infinity());
  CHECK(cfg.constellation->inclination_deg == 53.0);  // walker default
}

TEST_CASE("infinity is spelled inf") {
  const auto cfg = parse_text("[links]\nmax_isl_range_km = inf\n");
  CHECK(cfg.link_rules.max_isl_range_km == std::numeric_limits<double>::infinity());
}

TEST_CASE("parse errors name the line") {
  using Catch::Matchers::MessageMatches;
  CHECK_THROWS_MATCHES(parse_text("sim_time_limit_s = 10\nnonsense_key = 1\n"), ParseError,
                       MessageMatches(ContainsSubstring("line 2") &&
                                      ContainsSubstring("nonsense_key")));
  CHECK_THROWS_MATCHES(parse_text("[warp_drive]\n"), ParseError,
                       MessageMatches(ContainsSubstring("unknown section")));
  CHECK_THROWS_MATCHES(parse_text("[constellation]\nwings = 4\n"), ParseError,
                       MessageMatches(ContainsSubstring("[constellation]")));
  CHECK_THROWS_MATCHES(parse_text("[links]\ncolor = red\n"), ParseError,
                       MessageMatches(ContainsSubstring("[links]")));
  CHECK_THROWS_MATCHES(parse_text("[trace]\npath = x\n"), ParseError,
                       MessageMatches(ContainsSubstring("[trace]")));
  CHECK_THROWS_MATCHES(parse_text("[ground_station]\nheight = 3\n"), ParseError,
                       MessageMatches(ContainsSubstring("[ground_station]")));
  CHECK_THROWS_MATCHES(parse_text("[ping_app]\nrate = 3\n"), ParseError,
                       MessageMatches(ContainsSubstring("[ping_app]")));

  CHECK_THROWS_MATCHES(parse_text("sim_time_limit_s = ten\n"), ParseError,
                       MessageMatches(ContainsSubstring("needs a number")));
  CHECK_THROWS_MATCHES(parse_text("[constellation]\nplanes = 2.5\n"), ParseError,
                       MessageMatches(ContainsSubstring("needs an integer")));
  CHECK_THROWS_MATCHES(parse_text("dump_topology = maybe\n"), ParseError,
                       MessageMatches(ContainsSubstring("true or false")));
  CHECK_THROWS_MATCHES(parse_text("[ground_station]\nrole = observer\n"), ParseError,
                       MessageMatches(ContainsSubstring("sender, receiver or relay")));
  CHECK_THROWS_MATCHES(parse_text("[links]\nisl_mode = mesh\n"), ParseError,
                       MessageMatches(ContainsSubstring("ring")));

  CHECK_THROWS_MATCHES(parse_text("just some words\n"), ParseError,
                       MessageMatches(ContainsSubstring("key = value")));
  CHECK_THROWS_MATCHES(parse_text("[links\n"), ParseError,
                       MessageMatches(ContainsSubstring("unterminated")));
  CHECK_THROWS_MATCHES(parse_text("= 5\n"), ParseError,
                       MessageMatches(ContainsSubstring("empty key")));
  CHECK_THROWS_MATCHES(parse_text("sim_time_limit_s =\n"), ParseError,
                       MessageMatches(ContainsSubstring("no value")));
}

TEST_CASE("validation covers every cross-field rule") {
  CHECK_NOTHROW(validate(valid_config()));

  auto expect = [](ScenarioConfig cfg, const std::string& fragment) {
    CHECK_THROWS_MATCHES(validate(cfg), ConfigError,
                         Catch::Matchers::MessageMatches(ContainsSubstring(fragment)));
  };

  {
    auto cfg = valid_config();
    cfg.sim_time_limit_s = 0.0;
    expect(cfg, "sim_time_limit_s");
  }
  {
    auto cfg = valid_config();
    cfg.update_interval_s = -1.0;
    expect(cfg, "update_interval_s");
  }
  {
    auto cfg = valid_config();
    cfg.tx_duration_s = -0.001;
    expect(cfg, "tx_duration_s");
  }
  {
    auto cfg = valid_config();
    cfg.histogram_bin_ms = 0.0;
    expect(cfg, "histogram_bin_ms");
  }
  {
    auto cfg = valid_config();
    cfg.constellation.reset();
    expect(cfg, "[constellation]");
  }
  {
    auto cfg = valid_config();
    cfg.tle_file = "x.tle";
    expect(cfg, "mix");
  }
  {
    auto cfg = valid_config();
    cfg.constellation->num_planes = 0;
    expect(cfg, "planes");
  }
  {
    auto cfg = valid_config();
    cfg.constellation->raan_spread_deg = 0.0;
    expect(cfg, "raan_spread_deg");
  }
  {
    auto cfg = valid_config();
    cfg.constellation->raan_spread_deg = 400.0;
    expect(cfg, "raan_spread_deg");
  }
  {
    auto cfg = valid_config();
    cfg.link_rules.min_elevation_deg = 90.0;
    expect(cfg, "min_elevation_deg");
  }
  {
    auto cfg = valid_config();
    cfg.link_rules.min_elevation_deg = -5.0;
    expect(cfg, "min_elevation_deg");
  }
  {
    auto cfg = valid_config();
    cfg.link_rules.isl_mode = topology::IslMode::SamePlaneInRange;
    expect(cfg, "max_isl_range_km");
  }
  {
    auto cfg = valid_config();
    cfg.ground_stations[0].name.clear();
    expect(cfg, "name");
  }
  {
    auto cfg = valid_config();
    cfg.ground_stations[1].name = "london";
    expect(cfg, "duplicate");
  }
  {
    auto cfg = valid_config();
    cfg.ground_stations[0].location.latitude_deg = 95.0;
    expect(cfg, "coordinates");
  }
  {
    auto cfg = valid_config();
    cfg.apps.clear();
    expect(cfg, "[ping_app]");
  }
  {
    auto cfg = valid_config();
    cfg.apps[0].source = "atlantis";
    expect(cfg, "atlantis");
  }
  {
    auto cfg = valid_config();
    cfg.apps[0].destination = "atlantis";
    expect(cfg, "atlantis");
  }
  {
    auto cfg = valid_config();
    cfg.apps[0].destination = "london";
    expect(cfg, "identical");
  }
  {
    auto cfg = valid_config();
    cfg.apps[0].start_time_s = -1.0;
    expect(cfg, "start_time_s");
  }
  {
    auto cfg = valid_config();
    cfg.apps[0].sensor_id = 110;  // both modes at once
    expect(cfg, "exactly one");
  }
  {
    auto cfg = valid_config();
    cfg.apps[0].send_interval_s = 0.0;  // neither mode
    expect(cfg, "exactly one");
  }
  {
    auto cfg = valid_config();
    cfg.apps[0].send_interval_s = 0.0;
    cfg.apps[0].sensor_id = 110;  // trace mode without a trace file
    expect(cfg, "[trace]");
  }
}

TEST_CASE("scenario files load from disk with resolved paths") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "leosim_scenario_test";
  fs::create_directories(dir);
  const fs::path file = dir / "two_stations.scn";
  std::ofstream(file) << "sim_time_limit_s = 60\nupdate_interval_s = 10\n"
                      << "[constellation]\nplanes = 2\nsats_per_plane = 2\naltitude_km = 600\n"
                      << "[trace]\nfile = readings.csv\n"
                      << "[ground_station]\nname = a\nlatitude_deg = 0\nlongitude_deg = 0\n"
                      << "[ground_station]\nname = b\nlatitude_deg = 1\nlongitude_deg = 1\n"
                      << "[ping_app]\nsource = a\ndestination = b\nsensor_id = 1\n";
  const auto cfg = load_scenario_file(file.string());
  CHECK(cfg.trace_file == (dir / "readings.csv").string());
  fs::remove_all(dir);

  CHECK_THROWS_AS(load_scenario_file("/nonexistent/missing.scn"), ParseError);
}

TEST_CASE("the configuration echo is canonical") {
  const auto echo = config_echo(valid_config());
  CHECK(echo ==
        "sim_time_limit_s=1200\n"
        "update_interval_s=10\n"
        "tx_duration_s=0.001\n"
        "processing_delay_s=0\n"
        "histogram_bin_ms=0.1\n"
        "earth_phase_theta0_deg=0\n"
        "dump_topology=false\n"
        "constellation.planes=15\n"
        "constellation.sats_per_plane=10\n"
        "constellation.altitude_km=600\n"
        "constellation.inclination_deg=53\n"
        "constellation.raan_spread_deg=360\n"
        "constellation.phase_factor=0\n"
        "links.enable_intersatellite_links=false\n"
        "links.min_elevation_deg=25\n"
        "links.isl_mode=ring\n"
        "links.max_isl_range_km=inf\n"
        "links.allow_gs_gs=false\n"
        "ground_station.london=sender,51.5074,-0.1278,0\n"
        "ground_station.kenmare=receiver,51.9,-9.66,0\n"
        "ping_app.london>kenmare=start:0,interval:0.5\n");
}
