#pragma once

// Two-line element set reader and writer. The fixed column layout follows the
// NORAD convention; both lines end in a modulo-10 checksum where digits count
// their value, minus signs count one, and everything else counts zero.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "leosim/errors.hpp"
#include "leosim/orbits.hpp"

namespace leosim::orbits {

inline constexpr int kTleLineLength = 69;

// Orbits with periods above this are outside the near-earth regime this
// library models and are rejected at conversion time.
inline constexpr double kMaxPeriodS = 225.0 * 60.0;

struct TleRecord {
  std::string name;  // line 0, trimmed; may be empty

  // Line 1
  int satellite_number = 0;
  char classification = 'U';
  std::string intl_designator;  // launch year, number and piece, trimmed
  int epoch_year = 0;           // two digits as written
  double epoch_day = 0.0;       // day of year with fraction
  double mean_motion_dot = 0.0;
  double mean_motion_ddot = 0.0;  // implied leading decimal point
  double bstar_drag = 0.0;        // implied leading decimal point
  int ephemeris_type = 0;
  int element_number = 0;

  // Line 2
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double eccentricity = 0.0;  // implied leading decimal point
  double arg_perigee_deg = 0.0;
  double mean_anomaly_deg = 0.0;
  double mean_motion_rev_day = 0.0;
  int rev_number = 0;

  // Raw text of the three drag-related fields. They are carried through so a
  // record can be written back byte for byte; their exponent notation is not
  // uniquely recoverable from the decoded doubles.
  std::string raw_mean_motion_dot;   // columns 34-43 of line 1
  std::string raw_mean_motion_ddot;  // columns 45-52 of line 1
  std::string raw_bstar;             // columns 54-61 of line 1
};

inline int tle_checksum(const std::string& line) {
  int sum = 0;
  const size_t n = std::min<size_t>(line.size(), kTleLineLength - 1);
  for (size_t i = 0; i < n; ++i) {
    const char c = line[i];
    if (c >= '0' && c <= '9') sum += c - '0';
    else if (c == '-') sum += 1;
  }
  return sum % 10;
}

namespace detail {

// 1-based inclusive column range, matching the layout tables.
inline std::string field(const std::string& line, int first, int last) {
  return line.substr(static_cast<size_t>(first - 1), static_cast<size_t>(last - first + 1));
}

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(' ');
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(' ');
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void malformed(int line_no, int first, int last, const std::string& what,
                                   const std::string& text) {
  throw ParseError("TLE line " + std::to_string(line_no) + " columns " + std::to_string(first) +
                   "-" + std::to_string(last) + ": malformed " + what + " '" + text + "'");
}

inline long parse_int(const std::string& line, int line_no, int first, int last,
                      const std::string& what) {
  const std::string raw = trim(field(line, first, last));
  if (raw.empty()) malformed(line_no, first, last, what, field(line, first, last));
  char* end = nullptr;
  const long v = std::strtol(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0')
    malformed(line_no, first, last, what, field(line, first, last));
  return v;
}

inline double parse_double(const std::string& line, int line_no, int first, int last,
                           const std::string& what) {
  const std::string raw = trim(field(line, first, last));
  if (raw.empty()) malformed(line_no, first, last, what, field(line, first, last));
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || *end != '\0')
    malformed(line_no, first, last, what, field(line, first, last));
  return v;
}

// Seven digits with an implied leading "0." (the eccentricity field).
inline double parse_implied_fraction(const std::string& line, int line_no, int first, int last,
                                     const std::string& what) {
  const std::string raw = field(line, first, last);
  double scale = 1.0;
  long digits = 0;
  for (char c : raw) {
    if (c < '0' || c > '9') malformed(line_no, first, last, what, raw);
    digits = digits * 10 + (c - '0');
    scale *= 10.0;
  }
  return digits / scale;
}

// Exponent notation with an implied decimal point: " 10191-3" is 0.10191e-3.
inline double parse_implied_exponent(const std::string& line, int line_no, int first, int last,
                                     const std::string& what) {
  const std::string raw = field(line, first, last);
  if (raw.size() != 8) malformed(line_no, first, last, what, raw);
  double sign = 1.0;
  if (raw[0] == '-') sign = -1.0;
  else if (raw[0] != ' ' && raw[0] != '+') malformed(line_no, first, last, what, raw);
  double mant = 0.0;
  for (int i = 1; i <= 5; ++i) {
    const char c = raw[static_cast<size_t>(i)];
    if (c == ' ') continue;  // blank counts as zero, same as the checksum rule
    if (c < '0' || c > '9') malformed(line_no, first, last, what, raw);
    mant = mant * 10.0 + (c - '0');
  }
  double esign = 1.0;
  if (raw[6] == '-') esign = -1.0;
  else if (raw[6] != '+' && raw[6] != ' ') malformed(line_no, first, last, what, raw);
  const char ed = raw[7];
  if (ed < '0' || ed > '9') malformed(line_no, first, last, what, raw);
  return sign * (mant / 1e5) * std::pow(10.0, esign * (ed - '0'));
}

inline void check_line(const std::string& line, int line_no, char expected_tag) {
  if (line.size() != kTleLineLength)
    throw ParseError("TLE line " + std::to_string(line_no) + " must be " +
                     std::to_string(kTleLineLength) + " characters, got " +
                     std::to_string(line.size()));
  if (line[0] != expected_tag)
    throw ParseError("TLE line " + std::to_string(line_no) + " must start with '" +
                     std::string(1, expected_tag) + "', got '" + std::string(1, line[0]) + "'");
  const char stored = line[kTleLineLength - 1];
  if (stored < '0' || stored > '9')
    throw ParseError("TLE line " + std::to_string(line_no) + " checksum column is not a digit");
  const int computed = tle_checksum(line);
  if (computed != stored - '0')
    throw ParseError("TLE line " + std::to_string(line_no) + " checksum mismatch: computed " +
                     std::to_string(computed) + ", line carries " + std::string(1, stored));
}

}  // namespace detail

inline TleRecord parse_tle(const std::string& line1, const std::string& line2,
                           const std::string& name = "") {
  using namespace detail;
  check_line(line1, 1, '1');
  check_line(line2, 2, '2');

  TleRecord r;
  r.name = trim(name);

  r.satellite_number = static_cast<int>(parse_int(line1, 1, 3, 7, "satellite number"));
  r.classification = line1[7];
  r.intl_designator = trim(field(line1, 10, 17));
  r.epoch_year = static_cast<int>(parse_int(line1, 1, 19, 20, "epoch year"));
  r.epoch_day = parse_double(line1, 1, 21, 32, "epoch day");
  r.raw_mean_motion_dot = field(line1, 34, 43);
  r.mean_motion_dot = parse_double(line1, 1, 34, 43, "mean motion derivative");
  r.raw_mean_motion_ddot = field(line1, 45, 52);
  r.mean_motion_ddot =
      parse_implied_exponent(line1, 1, 45, 52, "second mean motion derivative");
  r.raw_bstar = field(line1, 54, 61);
  r.bstar_drag = parse_implied_exponent(line1, 1, 54, 61, "BSTAR drag");
  r.ephemeris_type = static_cast<int>(parse_int(line1, 1, 63, 63, "ephemeris type"));
  r.element_number = static_cast<int>(parse_int(line1, 1, 65, 68, "element number"));

  const int sat2 = static_cast<int>(parse_int(line2, 2, 3, 7, "satellite number"));
  if (sat2 != r.satellite_number)
    throw ParseError("TLE satellite numbers disagree between lines: " +
                     std::to_string(r.satellite_number) + " vs " + std::to_string(sat2));
  r.inclination_deg = parse_double(line2, 2, 9, 16, "inclination");
  r.raan_deg = parse_double(line2, 2, 18, 25, "RAAN");
  r.eccentricity = parse_implied_fraction(line2, 2, 27, 33, "eccentricity");
  r.arg_perigee_deg = parse_double(line2, 2, 35, 42, "argument of perigee");
  r.mean_anomaly_deg = parse_double(line2, 2, 44, 51, "mean anomaly");
  r.mean_motion_rev_day = parse_double(line2, 2, 53, 63, "mean motion");
  if (!(r.mean_motion_rev_day > 0.0))
    detail::malformed(2, 53, 63, "mean motion", field(line2, 53, 63));
  r.rev_number = static_cast<int>(parse_int(line2, 2, 64, 68, "revolution number"));
  return r;
}

namespace detail {

inline void place(std::string& line, int first, const std::string& text) {
  for (size_t i = 0; i < text.size(); ++i) line[static_cast<size_t>(first - 1) + i] = text[i];
}

inline std::string fixed(const char* fmt, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace detail

// Writes the record back at the standard column layout. The checksum columns
// are recomputed from the serialized content.
inline std::pair<std::string, std::string> serialize_tle(const TleRecord& r) {
  using detail::fixed;
  using detail::place;
  char buf[32];

  std::string l1(kTleLineLength, ' ');
  l1[0] = '1';
  std::snprintf(buf, sizeof buf, "%05d", r.satellite_number);
  place(l1, 3, buf);
  l1[7] = r.classification;
  place(l1, 10, r.intl_designator.substr(0, 8));
  std::snprintf(buf, sizeof buf, "%02d", r.epoch_year);
  place(l1, 19, buf);
  place(l1, 21, fixed("%012.8f", r.epoch_day));
  place(l1, 34, r.raw_mean_motion_dot.empty() ? fixed("%10.8f", r.mean_motion_dot)
                                              : r.raw_mean_motion_dot);
  place(l1, 45, r.raw_mean_motion_ddot.empty() ? std::string(" 00000-0") : r.raw_mean_motion_ddot);
  place(l1, 54, r.raw_bstar.empty() ? std::string(" 00000-0") : r.raw_bstar);
  l1[62] = static_cast<char>('0' + r.ephemeris_type % 10);
  std::snprintf(buf, sizeof buf, "%4d", r.element_number);
  place(l1, 65, buf);
  l1[kTleLineLength - 1] = static_cast<char>('0' + tle_checksum(l1));

  std::string l2(kTleLineLength, ' ');
  l2[0] = '2';
  std::snprintf(buf, sizeof buf, "%05d", r.satellite_number);
  place(l2, 3, buf);
  place(l2, 9, fixed("%8.4f", r.inclination_deg));
  place(l2, 18, fixed("%8.4f", r.raan_deg));
  std::snprintf(buf, sizeof buf, "%07ld", std::lround(r.eccentricity * 1e7));
  place(l2, 27, buf);
  place(l2, 35, fixed("%8.4f", r.arg_perigee_deg));
  place(l2, 44, fixed("%8.4f", r.mean_anomaly_deg));
  place(l2, 53, fixed("%11.8f", r.mean_motion_rev_day));
  std::snprintf(buf, sizeof buf, "%5d", r.rev_number);
  place(l2, 64, buf);
  l2[kTleLineLength - 1] = static_cast<char>('0' + tle_checksum(l2));

  return {l1, l2};
}

// Elements for the circular propagator. The TLE epoch becomes simulation time
// zero. Deep-space sets are rejected rather than silently mis-modeled.
inline OrbitalElements elements_from_tle(const TleRecord& r) {
  const double period_s = 86400.0 / r.mean_motion_rev_day;
  if (period_s > kMaxPeriodS)
    throw std::domain_error(
        "elements_from_tle: period " + std::to_string(period_s / 60.0) +
        " min exceeds the 225 min near-earth limit; deep-space orbits are unsupported");
  const double n = r.mean_motion_rev_day * 2.0 * std::numbers::pi / 86400.0;
  OrbitalElements el;
  el.semi_major_axis_km = std::cbrt(kMuEarthKm3S2 / (n * n));
  el.eccentricity = r.eccentricity;
  el.inclination_deg = r.inclination_deg;
  el.raan_deg = r.raan_deg;
  el.arg_perigee_deg = r.arg_perigee_deg;
  el.mean_anomaly_deg = r.mean_anomaly_deg;
  el.epoch_s = 0.0;
  return el;
}

// Reads groups of records: an optional name line followed by the two data
// lines. Blank lines between groups are ignored.
inline std::vector<TleRecord> parse_tle_stream(std::istream& in) {
  std::vector<TleRecord> out;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    lines.push_back(line);
  }
  size_t i = 0;
  while (i < lines.size()) {
    std::string name;
    if (lines[i].size() >= 2 && lines[i][0] == '1' && lines[i][1] == ' ') {
      // unnamed group
    } else {
      name = lines[i];
      ++i;
    }
    if (i + 1 >= lines.size())
      throw ParseError("TLE set ends mid-record after '" + (name.empty() ? lines[i] : name) + "'");
    out.push_back(parse_tle(lines[i], lines[i + 1], name));
    i += 2;
  }
  return out;
}

inline std::vector<TleRecord> parse_tle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open TLE file '" + path + "'");
  return parse_tle_stream(in);
}

}  // namespace leosim::orbits
