#pragma once

// Sensor trace ingestion. A trace is a CSV export with one reading per row:
//   sensor_id,urn,latitude,longitude,timestamp,type,value
// The sensor kind is inferred from the trailing urn token (np..., t..., ar...).
// Readings become per-sensor send schedules relative to the earliest reading
// in the file, and the GCD of all successive send intervals suggests how often
// the topology needs refreshing.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "leosim/errors.hpp"
#include "leosim/geodesy.hpp"

namespace leosim::ingest {

enum class SensorKind { Parking, Measure, Mobile };

inline const char* to_string(SensorKind k) {
  switch (k) {
    case SensorKind::Parking: return "parking";
    case SensorKind::Measure: return "measure";
    case SensorKind::Mobile: return "mobile";
  }
  return "?";
}

struct SensorTrace {
  long long sensor_id = 0;
  std::string urn;
  SensorKind kind = SensorKind::Measure;
  geodesy::GeoPoint location;           // frozen to the first row seen
  std::vector<long long> timestamps_s;  // epoch seconds, sorted, deduplicated
};

struct TraceParseResult {
  std::vector<SensorTrace> traces;  // ordered by sensor id
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] inline void bad_row(size_t line_no, const std::string& why) {
  throw ParseError("trace line " + std::to_string(line_no) + ": " + why);
}

// Epoch seconds from either a plain number or an ISO-8601 timestamp such as
// 2022-12-03T09:24:00 (optional fractional seconds, optional trailing Z).
// Fractions round to the nearest whole second.
inline long long parse_timestamp(const std::string& raw, size_t line_no) {
  const std::string s = trim(raw);
  if (s.empty()) bad_row(line_no, "empty timestamp");

  const bool plain_number =
      s.find_first_not_of("0123456789.+-") == std::string::npos && s.find('-', 1) == std::string::npos;
  if (plain_number) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') bad_row(line_no, "malformed timestamp '" + raw + "'");
    return std::llround(v);
  }

  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double sec = 0.0;
  char sep = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%lf%n", &y, &mo, &d, &sep, &h, &mi, &sec,
                  &consumed) != 7 ||
      (sep != 'T' && sep != ' '))
    bad_row(line_no, "malformed timestamp '" + raw + "'");
  const std::string rest = trim(s.substr(static_cast<size_t>(consumed)));
  if (!rest.empty() && rest != "Z") bad_row(line_no, "malformed timestamp '" + raw + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec >= 61.0)
    bad_row(line_no, "timestamp out of range '" + raw + "'");

  using namespace std::chrono;
  const auto ymd = year{y} / month{static_cast<unsigned>(mo)} / day{static_cast<unsigned>(d)};
  if (!ymd.ok()) bad_row(line_no, "invalid calendar date '" + raw + "'");
  const long long days = sys_days(ymd).time_since_epoch().count();
  return days * 86400LL + h * 3600LL + mi * 60LL + std::llround(sec);
}

inline double parse_number(const std::string& raw, size_t line_no, const char* what) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end == s.c_str() || *end != '\0')
    bad_row(line_no, std::string("malformed ") + what + " '" + raw + "'");
  return v;
}

inline SensorKind kind_from_urn(const std::string& urn, bool& known) {
  known = true;
  const size_t colon = urn.rfind(':');
  const std::string tail = colon == std::string::npos ? urn : urn.substr(colon + 1);
  if (tail.rfind("np", 0) == 0) return SensorKind::Parking;
  if (tail.rfind("ar", 0) == 0) return SensorKind::Mobile;
  if (tail.rfind("t", 0) == 0) return SensorKind::Measure;
  known = false;
  return SensorKind::Measure;
}

}  // namespace detail

inline TraceParseResult parse_trace(std::istream& in) {
  using namespace detail;
  TraceParseResult result;

  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto header = split_csv(line);
    const std::vector<std::string> expected = {"sensor_id", "urn",  "latitude", "longitude",
                                               "timestamp", "type", "value"};
    if (header.size() != expected.size()) bad_row(1, "header must list 7 columns");
    for (size_t i = 0; i < expected.size(); ++i)
      if (trim(header[i]) != expected[i])
        bad_row(1, "unexpected header column '" + header[i] + "', want '" + expected[i] + "'");
  }

  std::vector<SensorTrace> traces;
  auto find = [&traces](long long id) -> SensorTrace* {
    for (auto& t : traces)
      if (t.sensor_id == id) return &t;
    return nullptr;
  };

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 7)
      bad_row(line_no, "expected 7 fields, got " + std::to_string(fields.size()));

    const std::string id_text = trim(fields[0]);
    char* end = nullptr;
    const long long id = std::strtoll(id_text.c_str(), &end, 10);
    if (id_text.empty() || end == id_text.c_str() || *end != '\0')
      bad_row(line_no, "malformed sensor_id '" + fields[0] + "'");

    const double lat = parse_number(fields[2], line_no, "latitude");
    const double lon = parse_number(fields[3], line_no, "longitude");
    if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0)
      bad_row(line_no, "coordinates out of range");
    const long long ts = parse_timestamp(fields[4], line_no);

    SensorTrace* t = find(id);
    if (t == nullptr) {
      SensorTrace fresh;
      fresh.sensor_id = id;
      fresh.urn = trim(fields[1]);
      bool known = true;
      fresh.kind = kind_from_urn(fresh.urn, known);
      if (!known)
        result.warnings.push_back("line " + std::to_string(line_no) + ": unknown kind token in '" +
                                  fresh.urn + "', treating sensor " + std::to_string(id) +
                                  " as a fixed measure");
      fresh.location = {lat, lon, 0.0};  // later rows never move the sensor
      traces.push_back(std::move(fresh));
      t = &traces.back();
    }

    if (std::find(t->timestamps_s.begin(), t->timestamps_s.end(), ts) != t->timestamps_s.end()) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": duplicate reading for sensor " +
                                std::to_string(id) + " at t=" + std::to_string(ts) + ", dropped");
      continue;
    }
    t->timestamps_s.push_back(ts);
  }

  for (auto& t : traces) std::sort(t.timestamps_s.begin(), t.timestamps_s.end());
  std::sort(traces.begin(), traces.end(),
            [](const SensorTrace& a, const SensorTrace& b) { return a.sensor_id < b.sensor_id; });
  result.traces = std::move(traces);
  return result;
}

inline TraceParseResult parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

struct ScheduleSet {
  long long t0_epoch_s = 0;  // earliest reading in the whole trace
  struct Entry {
    long long sensor_id = 0;
    long long start_offset_s = 0;       // first send relative to t0
    std::vector<long long> times_s;     // all sends relative to t0
  };
  std::vector<Entry> entries;  // ordered by sensor id
};

inline ScheduleSet derive_schedules(const std::vector<SensorTrace>& traces) {
  if (traces.empty()) throw std::domain_error("derive_schedules: no traces");
  long long t0 = 0;
  bool have_t0 = false;
  for (const auto& t : traces) {
    if (t.timestamps_s.empty())
      throw std::domain_error("derive_schedules: sensor " + std::to_string(t.sensor_id) +
                              " has no readings");
    if (!have_t0 || t.timestamps_s.front() < t0) {
      t0 = t.timestamps_s.front();
      have_t0 = true;
    }
  }
  ScheduleSet set;
  set.t0_epoch_s = t0;
  for (const auto& t : traces) {
    ScheduleSet::Entry e;
    e.sensor_id = t.sensor_id;
    e.start_offset_s = t.timestamps_s.front() - t0;
    e.times_s.reserve(t.timestamps_s.size());
    for (long long ts : t.timestamps_s) e.times_s.push_back(ts - t0);
    set.entries.push_back(std::move(e));
  }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const auto& a, const auto& b) { return a.sensor_id < b.sensor_id; });
  return set;
}

// GCD of every successive send interval across all sensors. Each sensor needs
// at least two readings, otherwise it contributes no interval at all and the
// recommendation would silently ignore it.
inline long long interval_gcd_s(const std::vector<SensorTrace>& traces) {
  if (traces.empty()) throw std::domain_error("interval_gcd_s: no traces");
  long long g = 0;
  for (const auto& t : traces) {
    if (t.timestamps_s.size() < 2)
      throw std::domain_error("interval_gcd_s: sensor " + std::to_string(t.sensor_id) +
                              " has fewer than two readings");
    for (size_t i = 1; i < t.timestamps_s.size(); ++i) {
      const long long d = t.timestamps_s[i] - t.timestamps_s[i - 1];
      g = std::gcd(g, d);
    }
  }
  return g;
}

// Schedule CSV, the consumable form of a trace: one row per send.
inline std::string schedule_to_csv(const ScheduleSet& set) {
  std::string out = "sensor_id,relative_time_s\n";
  for (const auto& e : set.entries)
    for (long long t : e.times_s)
      out += std::to_string(e.sensor_id) + "," + std::to_string(t) + "\n";
  return out;
}

inline ScheduleSet parse_schedule_csv(std::istream& in) {
  using namespace detail;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("schedule is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto header = split_csv(line);
    if (header.size() != 2 || trim(header[0]) != "sensor_id" ||
        trim(header[1]) != "relative_time_s")
      throw ParseError("schedule header must be 'sensor_id,relative_time_s'");
  }
  ScheduleSet set;
  auto entry = [&set](long long id) -> ScheduleSet::Entry& {
    for (auto& e : set.entries)
      if (e.sensor_id == id) return e;
    set.entries.emplace_back();
    set.entries.back().sensor_id = id;
    return set.entries.back();
  };
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) bad_row(line_no, "expected 2 fields");
    const std::string id_text = trim(fields[0]);
    const std::string t_text = trim(fields[1]);
    char* end = nullptr;
    const long long id = std::strtoll(id_text.c_str(), &end, 10);
    if (id_text.empty() || *end != '\0') bad_row(line_no, "malformed sensor_id");
    end = nullptr;
    const long long t = std::strtoll(t_text.c_str(), &end, 10);
    if (t_text.empty() || *end != '\0' || t < 0) bad_row(line_no, "malformed relative_time_s");
    entry(id).times_s.push_back(t);
  }
  for (auto& e : set.entries) {
    std::sort(e.times_s.begin(), e.times_s.end());
    e.start_offset_s = e.times_s.empty() ? 0 : e.times_s.front();
  }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const auto& a, const auto& b) { return a.sensor_id < b.sensor_id; });
  return set;
}

// Loads either a raw trace or an already-derived schedule, decided by the
// header of the file. Warnings from raw-trace parsing are appended.
inline ScheduleSet load_schedule_source(const std::string& path,
                                        std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file '" + path + "'");
  std::string first;
  if (!std::getline(in, first)) throw ParseError("trace file '" + path + "' is empty");
  in.seekg(0);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  if (detail::trim(first) == "sensor_id,relative_time_s") return parse_schedule_csv(in);
  TraceParseResult parsed = parse_trace(in);
  if (warnings != nullptr)
    warnings->insert(warnings->end(), parsed.warnings.begin(), parsed.warnings.end());
  return derive_schedules(parsed.traces);
}

// Chronological (reading time, gap to the next reading) pairs: the raw series
// behind a send-interval plot. Times are epoch seconds as read.
inline std::vector<std::pair<long long, long long>> interval_histogram(const SensorTrace& t) {
  if (t.timestamps_s.size() < 2)
    throw std::domain_error("interval_histogram: sensor " + std::to_string(t.sensor_id) +
                            " has fewer than two readings");
  std::vector<std::pair<long long, long long>> series;
  series.reserve(t.timestamps_s.size() - 1);
  for (size_t i = 1; i < t.timestamps_s.size(); ++i)
    series.emplace_back(t.timestamps_s[i - 1], t.timestamps_s[i] - t.timestamps_s[i - 1]);
  return series;
}

}  // namespace leosim::ingest
