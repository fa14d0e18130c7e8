#pragma once

#include <stdexcept>
#include <string>

namespace leosim {

// Malformed input text: TLE sets, sensor traces, scenario files.
// Messages carry line/column context where available.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Semantically inconsistent configuration (references to undeclared
// ground stations, missing constellation, non-positive durations, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace leosim
