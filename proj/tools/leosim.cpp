// Command line front end: coverage tables, scenario runs, trace ingestion and
// run comparison. All heavy lifting lives in the headers under include/.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leosim/engine.hpp"
#include "leosim/geodesy.hpp"
#include "leosim/ingest.hpp"
#include "leosim/reports.hpp"
#include "leosim/scenario.hpp"

namespace fs = std::filesystem;

namespace {

std::string default_base_dir() {
  const char* env = std::getenv("LEOSIM_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : ".";
}

std::string stem_of(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  return stem.empty() ? "out" : stem;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string iso_utc(long long epoch_s) {
  std::time_t t = static_cast<std::time_t>(epoch_s);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int cmd_coverage(const std::vector<double>& altitudes, const std::vector<double>& elevations,
                 const std::string& out_path) {
  const std::string table = leosim::geodesy::coverage_table(altitudes, elevations);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    write_text(out_path, table);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_run(const std::string& scenario_path, std::string out_dir, bool dump_topology) {
  leosim::scenario::ScenarioConfig cfg = leosim::scenario::load_scenario_file(scenario_path);
  if (dump_topology) cfg.dump_topology = true;

  if (out_dir.empty()) out_dir = (fs::path(default_base_dir()) / stem_of(scenario_path)).string();
  const leosim::engine::RunResult result = leosim::engine::run_scenario(cfg);
  leosim::reports::write_run_artifacts(out_dir, result, cfg.histogram_bin_ms);

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "run " << out_dir << "\n"
            << "snapshots " << result.snapshot_count << "\n";
  for (const auto& rep : result.senders) {
    const auto& s = rep.summary;
    std::printf("%s: tx=%lld rx=%lld loss=%.2f%% rtt[ms] min=%.3f mean=%.3f max=%.3f modal=%.1f@%lld\n",
                rep.label.c_str(), s.pings_transmitted, s.pings_received, s.ping_loss_pct,
                s.rtt_min_ms, s.rtt_mean_ms, s.rtt_max_ms, s.modal_bin.rtt_value_ms,
                s.modal_bin.frequency);
  }
  std::cout << "fingerprint " << leosim::reports::fingerprint_hex(result.fingerprint) << "\n";
  return 0;
}

int cmd_ingest(const std::string& trace_path, std::string out_dir) {
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open trace file '" + trace_path + "'");
  const leosim::ingest::TraceParseResult parsed = leosim::ingest::parse_trace(in);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";

  const leosim::ingest::ScheduleSet schedules = leosim::ingest::derive_schedules(parsed.traces);
  const long long gcd = leosim::ingest::interval_gcd_s(parsed.traces);

  if (out_dir.empty())
    out_dir = (fs::path(default_base_dir()) / (stem_of(trace_path) + "_ingest")).string();
  fs::create_directories(out_dir);
  write_text((fs::path(out_dir) / "schedule.csv").string(),
             leosim::ingest::schedule_to_csv(schedules));

  std::string offsets = "sensor_id,kind,start_offset_s,sends\n";
  std::string intervals = "sensor_id,relative_time_s,delta_to_next_s\n";
  for (const auto& t : parsed.traces) {
    long long offset = 0;
    size_t sends = t.timestamps_s.size();
    for (const auto& e : schedules.entries)
      if (e.sensor_id == t.sensor_id) offset = e.start_offset_s;
    offsets += std::to_string(t.sensor_id) + "," + leosim::ingest::to_string(t.kind) + "," +
               std::to_string(offset) + "," + std::to_string(sends) + "\n";
    for (const auto& [at, gap] : leosim::ingest::interval_histogram(t))
      intervals += std::to_string(t.sensor_id) + "," +
                   std::to_string(at - schedules.t0_epoch_s) + "," + std::to_string(gap) + "\n";
  }
  write_text((fs::path(out_dir) / "offsets.csv").string(), offsets);
  write_text((fs::path(out_dir) / "intervals.csv").string(), intervals);

  std::cout << "trace " << trace_path << "\n"
            << "sensors " << parsed.traces.size() << "\n"
            << "t0 " << iso_utc(schedules.t0_epoch_s) << " (epoch " << schedules.t0_epoch_s
            << ")\n";
  for (const auto& t : parsed.traces) {
    long long offset = 0;
    for (const auto& e : schedules.entries)
      if (e.sensor_id == t.sensor_id) offset = e.start_offset_s;
    std::printf("sensor %lld: kind=%s sends=%zu first_offset_s=%lld\n", t.sensor_id,
                leosim::ingest::to_string(t.kind), t.timestamps_s.size(), offset);
  }
  std::cout << "recommended_update_interval_s " << gcd << "\n"
            << "wrote " << out_dir << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_path) {
  std::vector<leosim::reports::RunSummaries> runs;
  for (const auto& dir : run_dirs) runs.push_back(leosim::reports::load_run_summaries(dir));
  const auto table = leosim::reports::compare_runs(runs);
  if (table.mismatched)
    std::cerr << "warning: sender sets differ between runs; gaps are marked with dashes\n";
  std::cout << leosim::reports::comparison_text(table);
  if (!out_path.empty()) {
    write_text(out_path, leosim::reports::comparison_csv(table));
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leosim: satellite relay simulation toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::simple);

  // coverage
  std::vector<double> altitudes = {160, 500, 600, 700, 800, 900, 1000, 1500};
  std::vector<double> elevations = {0, 2, 4, 6, 8, 10, 25, 40};
  std::string coverage_out;
  auto* coverage = app.add_subcommand("coverage", "coverage table over altitude and elevation");
  coverage->add_option("--altitudes", altitudes, "altitudes in km")->delimiter(',');
  coverage->add_option("--elevations", elevations, "minimum elevations in degrees")
      ->delimiter(',');
  coverage->add_option("--out", coverage_out, "write CSV here instead of stdout");

  // run
  std::string scenario_path, run_out_dir;
  bool dump_topology = false;
  auto* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--out-dir", run_out_dir,
                  "artifact directory (default: $LEOSIM_OUT_DIR/<scenario stem>)");
  run->add_flag("--dump-topology", dump_topology, "also write per-snapshot edge lists");

  // ingest
  std::string trace_path, ingest_out_dir;
  auto* ingest = app.add_subcommand("ingest", "derive send schedules from a sensor trace");
  ingest->add_option("--trace", trace_path, "trace CSV")->required();
  ingest->add_option("--out", ingest_out_dir,
                     "output directory (default: $LEOSIM_OUT_DIR/<trace stem>_ingest)");

  // compare
  std::vector<std::string> run_dirs;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "line up summaries of several runs");
  compare->add_option("dirs", run_dirs, "run directories")->expected(2, -1);
  compare->add_option("--out", compare_out, "also write a comparison CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (coverage->parsed()) return cmd_coverage(altitudes, elevations, coverage_out);
    if (run->parsed()) return cmd_run(scenario_path, run_out_dir, dump_topology);
    if (ingest->parsed()) return cmd_ingest(trace_path, ingest_out_dir);
    if (compare->parsed()) return cmd_compare(run_dirs, compare_out);
  } catch (const std::exception& e) {
    std::cerr << "leosim: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
