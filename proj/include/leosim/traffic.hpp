#pragma once

// Ping applications over the snapshot graph. Links are bufferless: a relay
// node occupies its channel for tx_duration per packet and a packet reaching
// a busy relay is dropped, never queued. The route is pinned when the ping
// leaves its source and the reply retraces it in reverse.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosim/errors.hpp"
#include "leosim/topology.hpp"

namespace leosim::traffic {

struct PingAppConfig {
  int source_node = -1;
  int destination_node = -1;
  std::string label;  // used in reports; typically the source station name

  double start_time_s = 0.0;
  double send_interval_s = 0.0;    // periodic mode
  std::vector<double> schedule_s;  // explicit mode, absolute send times
  long long count_limit = -1;      // cap on sends, -1 means no cap
};

enum class PingStatus { Delivered, DroppedUnreachable, DroppedCollision };

inline const char* to_string(PingStatus s) {
  switch (s) {
    case PingStatus::Delivered: return "delivered";
    case PingStatus::DroppedUnreachable: return "dropped_unreachable";
    case PingStatus::DroppedCollision: return "dropped_collision";
  }
  return "?";
}

struct PingOutcome {
  long long seq = 0;
  double send_time_s = 0.0;
  PingStatus status = PingStatus::DroppedUnreachable;
  double rtt_ms = 0.0;       // Delivered only, otherwise 0
  int drop_node = -1;        // DroppedCollision only
  double drop_time_s = 0.0;  // DroppedCollision only
  std::vector<int> path;     // pinned route, empty when no route existed
};

// Busy intervals of one node's transceiver, kept sorted by start time.
// Reservations are half-open: [begin, end).
class NodeChannel {
 public:
  bool busy_during(double begin_s, double end_s) const {
    for (const auto& iv : intervals_) {
      if (iv.first >= end_s) break;
      if (iv.second > begin_s) return true;
    }
    return false;
  }

  void reserve(double begin_s, double end_s) {
    Interval iv{begin_s, end_s};
    intervals_.insert(std::upper_bound(intervals_.begin(), intervals_.end(), iv), iv);
  }

  // Drops reservations that ended before the given time.
  void release_before(double time_s) {
    intervals_.erase(
        std::remove_if(intervals_.begin(), intervals_.end(),
                       [time_s](const Interval& iv) { return iv.second <= time_s; }),
        intervals_.end());
  }

  size_t reservation_count() const { return intervals_.size(); }

 private:
  using Interval = std::pair<double, double>;
  std::vector<Interval> intervals_;
};

// Send times for one application, strictly before limit_s. Periodic sends are
// computed multiplicatively from the start time so the schedule is exactly
// reproducible; an explicit schedule is filtered and sorted. count_limit caps
// the result in both modes.
inline std::vector<double> schedule_sends(const PingAppConfig& app, double limit_s) {
  std::vector<double> times;
  if (!app.schedule_s.empty()) {
    for (double t : app.schedule_s) {
      if (t < 0.0)
        throw ConfigError("schedule_sends: negative send time " + std::to_string(t));
      if (t < limit_s) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
  } else {
    if (!(app.send_interval_s > 0.0))
      throw ConfigError("schedule_sends: send interval must be positive, got " +
                        std::to_string(app.send_interval_s));
    if (app.start_time_s < 0.0)
      throw ConfigError("schedule_sends: negative start time");
    for (long long k = 0;; ++k) {
      const double t = app.start_time_s + static_cast<double>(k) * app.send_interval_s;
      if (t >= limit_s) break;
      times.push_back(t);
    }
  }
  if (app.count_limit >= 0 && static_cast<long long>(times.size()) > app.count_limit)
    times.resize(static_cast<size_t>(app.count_limit));
  return times;
}

struct TransmitParams {
  double tx_duration_s = 0.001;    // channel occupancy per relayed packet
  double processing_delay_s = 0.0;  // extra hold at each relay before re-send
};

namespace detail {

// Walks one direction of the flight. Returns the arrival time at the far end
// or a negative value after recording a collision into the outcome.
inline double walk_path(const topology::TopologySnapshot& snap,
                        std::vector<NodeChannel>& channels, const std::vector<int>& path,
                        double depart_s, const TransmitParams& params, PingOutcome& out) {
  double t = depart_s;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    t += snap.edge_delay_ms(path[i], path[i + 1]) / 1000.0;
    const int node = path[i + 1];
    const bool is_endpoint = i + 2 == path.size();
    if (is_endpoint) continue;  // endpoints consume, they do not relay
    auto& channel = channels[static_cast<size_t>(node)];
    if (channel.busy_during(t, t + params.tx_duration_s)) {
      out.status = PingStatus::DroppedCollision;
      out.drop_node = node;
      out.drop_time_s = t;
      return -1.0;
    }
    channel.reserve(t, t + params.tx_duration_s);
    t += params.processing_delay_s;
  }
  return t;
}

}  // namespace detail

// One ping: route lookup, forward flight, instant reply, reverse flight.
// Relays are reserved in walk order, so when two pings contend the one
// transmitted first (by the caller's processing order) wins the channel.
inline PingOutcome transmit(const topology::TopologySnapshot& snap,
                            std::vector<NodeChannel>& channels, const PingAppConfig& app,
                            long long seq, double send_time_s,
                            const TransmitParams& params = {}) {
  if (channels.size() != snap.nodes.size())
    throw std::invalid_argument("transmit: channel ledger does not match the snapshot");

  PingOutcome out;
  out.seq = seq;
  out.send_time_s = send_time_s;

  const auto route = topology::route(snap, app.source_node, app.destination_node);
  if (!route.reachable) {
    out.status = PingStatus::DroppedUnreachable;
    return out;
  }
  out.path = route.path;

  const double arrive_s =
      detail::walk_path(snap, channels, route.path, send_time_s, params, out);
  if (arrive_s < 0.0) return out;

  std::vector<int> back(route.path.rbegin(), route.path.rend());
  const double return_s = detail::walk_path(snap, channels, back, arrive_s, params, out);
  if (return_s < 0.0) return out;

  out.status = PingStatus::Delivered;
  out.rtt_ms = (return_s - send_time_s) * 1000.0;
  return out;
}

}  // namespace leosim::traffic
