#pragma once

// Run artifacts on disk. A run directory holds:
//   outcomes.csv                    per-ping log (fingerprint input)
//   run_meta.json                   fingerprint, snapshot count, config echo
//   nodes.csv                       node id -> label
//   summary_<sender>.json           one MetricsSummary per application
//   rtt_vector_<sender>.csv         (send_time_s, rtt_ms) for delivered pings
//   rtt_histogram_<sender>.csv      (bin_start_ms, count)
//   topology.csv                    per-snapshot edge list, when requested
// compare_runs() re-reads the summaries of several directories and lines the
// senders up side by side.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "leosim/engine.hpp"
#include "leosim/errors.hpp"
#include "leosim/metrics.hpp"

namespace leosim::reports {

using ordered_json = nlohmann::ordered_json;

inline std::string fingerprint_hex(std::uint64_t fp) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

inline std::string sanitize_label(const std::string& label) {
  std::string out;
  for (char c : label)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "sender" : out;
}

inline ordered_json summary_to_json(const std::string& sender,
                                    const metrics::MetricsSummary& s) {
  ordered_json j;
  j["sender"] = sender;
  j["pings_transmitted"] = s.pings_transmitted;
  j["pings_received"] = s.pings_received;
  j["rtt_min_ms"] = s.rtt_min_ms;
  j["rtt_max_ms"] = s.rtt_max_ms;
  j["rtt_mean_ms"] = s.rtt_mean_ms;
  j["ping_loss_pct"] = s.ping_loss_pct;
  j["modal_bin"] = ordered_json{{"rtt_value_ms", s.modal_bin.rtt_value_ms},
                                {"frequency", s.modal_bin.frequency}};
  j["dropped_unreachable"] = s.dropped_unreachable;
  j["dropped_collision"] = s.dropped_collision;
  return j;
}

inline metrics::MetricsSummary summary_from_json(const ordered_json& j, std::string* sender) {
  metrics::MetricsSummary s;
  if (sender != nullptr) *sender = j.at("sender").get<std::string>();
  s.pings_transmitted = j.at("pings_transmitted").get<long long>();
  s.pings_received = j.at("pings_received").get<long long>();
  s.rtt_min_ms = j.at("rtt_min_ms").get<double>();
  s.rtt_max_ms = j.at("rtt_max_ms").get<double>();
  s.rtt_mean_ms = j.at("rtt_mean_ms").get<double>();
  s.ping_loss_pct = j.at("ping_loss_pct").get<double>();
  s.modal_bin.rtt_value_ms = j.at("modal_bin").at("rtt_value_ms").get<double>();
  s.modal_bin.frequency = j.at("modal_bin").at("frequency").get<long long>();
  s.dropped_unreachable = j.at("dropped_unreachable").get<long long>();
  s.dropped_collision = j.at("dropped_collision").get<long long>();
  return s;
}

inline std::string rtt_vector_csv(const std::vector<traffic::PingOutcome>& outcomes) {
  std::string out = "send_time_s,rtt_ms\n";
  char buf[64];
  for (const auto& [t, rtt] : metrics::rtt_vector(outcomes)) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", t, rtt);
    out += buf;
  }
  return out;
}

inline std::string rtt_histogram_csv(const std::vector<traffic::PingOutcome>& outcomes,
                                     double bin_ms) {
  std::string out = "bin_start_ms,count\n";
  char buf[64];
  for (const auto& [edge, count] : metrics::rtt_histogram(outcomes, bin_ms)) {
    std::snprintf(buf, sizeof buf, "%.6f,%lld\n", edge, count);
    out += buf;
  }
  return out;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace detail

// Writes every artifact of one run. histogram_bin_ms must match the value the
// run was summarized with so the histogram files agree with the modal bins.
inline void write_run_artifacts(const std::string& dir, const engine::RunResult& result,
                                double histogram_bin_ms) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  detail::write_file(fs::path(dir) / "outcomes.csv", result.outcome_log_csv);
  detail::write_file(fs::path(dir) / "nodes.csv", result.node_table_csv);
  if (!result.topology_dump_csv.empty())
    detail::write_file(fs::path(dir) / "topology.csv", result.topology_dump_csv);

  ordered_json meta;
  meta["fingerprint"] = fingerprint_hex(result.fingerprint);
  meta["snapshot_count"] = result.snapshot_count;
  meta["senders"] = ordered_json::array();
  for (const auto& rep : result.senders) meta["senders"].push_back(rep.label);
  meta["warnings"] = result.warnings;
  {
    ordered_json cfg = ordered_json::array();
    std::istringstream lines(result.config_echo);
    std::string line;
    while (std::getline(lines, line)) cfg.push_back(line);
    meta["config"] = cfg;
  }
  detail::write_file(fs::path(dir) / "run_meta.json", meta.dump(2) + "\n");

  for (const auto& rep : result.senders) {
    const std::string tag = sanitize_label(rep.label);
    detail::write_file(fs::path(dir) / ("summary_" + tag + ".json"),
                       summary_to_json(rep.label, rep.summary).dump(2) + "\n");
    detail::write_file(fs::path(dir) / ("rtt_vector_" + tag + ".csv"),
                       rtt_vector_csv(rep.outcomes));
    detail::write_file(fs::path(dir) / ("rtt_histogram_" + tag + ".csv"),
                       rtt_histogram_csv(rep.outcomes, histogram_bin_ms));
  }
}

// Summaries of one stored run, keyed for comparison.
struct RunSummaries {
  std::string label;  // defaults to the directory name
  std::vector<std::pair<std::string, metrics::MetricsSummary>> senders;
};

inline RunSummaries load_run_summaries(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ParseError("'" + dir + "' is not a run directory");
  RunSummaries run;
  run.label = fs::path(dir).filename().string();
  if (run.label.empty()) run.label = fs::path(dir).parent_path().filename().string();

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("summary_", 0) == 0 && entry.path().extension() == ".json")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ParseError("no summary_*.json files under '" + dir + "'");

  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw ParseError("cannot read '" + f.string() + "'");
    ordered_json j;
    in >> j;
    std::string sender;
    metrics::MetricsSummary s = summary_from_json(j, &sender);
    run.senders.emplace_back(sender, s);
  }
  return run;
}

struct ComparisonTable {
  std::vector<std::string> run_labels;
  struct Row {
    std::string sender;
    std::vector<std::optional<metrics::MetricsSummary>> per_run;
  };
  std::vector<Row> rows;     // senders in sorted order
  bool mismatched = false;   // some sender is missing from some run
};

inline ComparisonTable compare_runs(const std::vector<RunSummaries>& runs) {
  if (runs.size() < 2) throw ConfigError("compare_runs: need at least two runs");
  ComparisonTable table;
  std::vector<std::string> senders;
  for (const auto& run : runs) {
    table.run_labels.push_back(run.label);
    for (const auto& [name, s] : run.senders)
      if (std::find(senders.begin(), senders.end(), name) == senders.end())
        senders.push_back(name);
  }
  std::sort(senders.begin(), senders.end());

  for (const auto& name : senders) {
    ComparisonTable::Row row;
    row.sender = name;
    for (const auto& run : runs) {
      std::optional<metrics::MetricsSummary> cell;
      for (const auto& [n, s] : run.senders)
        if (n == name) cell = s;
      if (!cell.has_value()) table.mismatched = true;
      row.per_run.push_back(cell);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Wide CSV: one row per sender, a column group per run, blanks where a run
// lacks the sender. Non-first runs also get mean and loss deltas vs the
// first run.
inline std::string comparison_csv(const ComparisonTable& table) {
  std::string out = "sender";
  for (const auto& run : table.run_labels) {
    for (const char* f :
         {"pings_transmitted", "pings_received", "rtt_min_ms", "rtt_max_ms", "rtt_mean_ms",
          "ping_loss_pct", "modal_rtt_ms", "modal_frequency"})
      out += "," + run + "_" + f;
  }
  for (size_t r = 1; r < table.run_labels.size(); ++r)
    out += "," + table.run_labels[r] + "_delta_mean_ms," + table.run_labels[r] + "_delta_loss_pct";
  out += "\n";

  char buf[64];
  for (const auto& row : table.rows) {
    out += row.sender;
    for (const auto& cell : row.per_run) {
      if (!cell) {
        out += ",,,,,,,,";
        continue;
      }
      std::snprintf(buf, sizeof buf, ",%lld,%lld", cell->pings_transmitted, cell->pings_received);
      out += buf;
      std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f", cell->rtt_min_ms, cell->rtt_max_ms,
                    cell->rtt_mean_ms, cell->ping_loss_pct);
      out += buf;
      std::snprintf(buf, sizeof buf, ",%.6f,%lld", cell->modal_bin.rtt_value_ms,
                    cell->modal_bin.frequency);
      out += buf;
    }
    for (size_t r = 1; r < row.per_run.size(); ++r) {
      if (!row.per_run[0] || !row.per_run[r]) {
        out += ",,";
        continue;
      }
      std::snprintf(buf, sizeof buf, ",%.6f,%.6f",
                    row.per_run[r]->rtt_mean_ms - row.per_run[0]->rtt_mean_ms,
                    row.per_run[r]->ping_loss_pct - row.per_run[0]->ping_loss_pct);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

// Aligned text, one line per (sender, run) pair; missing combinations are
// marked with dashes.
inline std::string comparison_text(const ComparisonTable& table) {
  size_t sender_w = 6, run_w = 3;
  for (const auto& row : table.rows) sender_w = std::max(sender_w, row.sender.size());
  for (const auto& run : table.run_labels) run_w = std::max(run_w, run.size());

  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %8s %8s %8s %9s %9s %9s %10s %8s\n",
                static_cast<int>(sender_w), "sender", static_cast<int>(run_w), "run", "tx", "rx",
                "loss%", "min_ms", "mean_ms", "max_ms", "modal_ms", "modal_n");
  std::string out = buf;
  for (const auto& row : table.rows) {
    for (size_t r = 0; r < row.per_run.size(); ++r) {
      const auto& cell = row.per_run[r];
      if (!cell) {
        std::snprintf(buf, sizeof buf, "%-*s  %-*s  %8s %8s %8s %9s %9s %9s %10s %8s\n",
                      static_cast<int>(sender_w), row.sender.c_str(), static_cast<int>(run_w),
                      table.run_labels[r].c_str(), "-", "-", "-", "-", "-", "-", "-", "-");
        out += buf;
        continue;
      }
      std::snprintf(buf, sizeof buf,
                    "%-*s  %-*s  %8lld %8lld %8.2f %9.3f %9.3f %9.3f %10.3f %8lld\n",
                    static_cast<int>(sender_w), row.sender.c_str(), static_cast<int>(run_w),
                    table.run_labels[r].c_str(), cell->pings_transmitted, cell->pings_received,
                    cell->ping_loss_pct, cell->rtt_min_ms, cell->rtt_mean_ms, cell->rtt_max_ms,
                    cell->modal_bin.rtt_value_ms, cell->modal_bin.frequency);
      out += buf;
    }
  }
  return out;
}

}  // namespace leosim::reports
