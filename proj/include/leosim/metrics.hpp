#pragma once

// Aggregation of ping outcomes: loss, round-trip statistics, histograms and
// the chronological RTT vector.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "leosim/traffic.hpp"

namespace leosim::metrics {

struct ModalBin {
  double rtt_value_ms = 0.0;  // lower edge of the most populated bin
  long long frequency = 0;
};

struct MetricsSummary {
  long long pings_transmitted = 0;
  long long pings_received = 0;
  double rtt_min_ms = 0.0;
  double rtt_max_ms = 0.0;
  double rtt_mean_ms = 0.0;
  double ping_loss_pct = 0.0;
  ModalBin modal_bin;
  long long dropped_unreachable = 0;
  long long dropped_collision = 0;
};

// Half-open bins [k*bin_ms, (k+1)*bin_ms) covering the observed range, with
// zero-count bins kept so the rows stay contiguous.
inline std::vector<std::pair<double, long long>> rtt_histogram(
    const std::vector<traffic::PingOutcome>& outcomes, double bin_ms = 0.1) {
  if (!(bin_ms > 0.0))
    throw std::domain_error("rtt_histogram: bin width must be positive");
  std::vector<double> rtts;
  for (const auto& o : outcomes)
    if (o.status == traffic::PingStatus::Delivered) rtts.push_back(o.rtt_ms);
  if (rtts.empty()) return {};

  const auto [lo, hi] = std::minmax_element(rtts.begin(), rtts.end());
  const long long first = static_cast<long long>(std::floor(*lo / bin_ms));
  const long long last = static_cast<long long>(std::floor(*hi / bin_ms));
  std::vector<std::pair<double, long long>> bins;
  bins.reserve(static_cast<size_t>(last - first + 1));
  for (long long k = first; k <= last; ++k) bins.emplace_back(k * bin_ms, 0);
  for (double r : rtts) {
    const long long k = static_cast<long long>(std::floor(r / bin_ms));
    bins[static_cast<size_t>(k - first)].second += 1;
  }
  return bins;
}

// Chronological (send time, rtt) points for the delivered pings. Dropped
// pings leave gaps in time rather than zero samples.
inline std::vector<std::pair<double, double>> rtt_vector(
    const std::vector<traffic::PingOutcome>& outcomes) {
  std::vector<std::pair<double, double>> v;
  for (const auto& o : outcomes)
    if (o.status == traffic::PingStatus::Delivered) v.emplace_back(o.send_time_s, o.rtt_ms);
  std::sort(v.begin(), v.end());
  return v;
}

// Loss is (transmitted - received) / transmitted, as a percentage. With zero
// received pings every RTT statistic is reported as zero, not NaN. A modal
// tie resolves toward the lower bin.
inline MetricsSummary summarize(const std::vector<traffic::PingOutcome>& outcomes,
                                double histogram_bin_ms = 0.1) {
  MetricsSummary s;
  s.pings_transmitted = static_cast<long long>(outcomes.size());
  double sum = 0.0;
  double lo = 0.0, hi = 0.0;
  for (const auto& o : outcomes) {
    switch (o.status) {
      case traffic::PingStatus::Delivered:
        if (s.pings_received == 0) {
          lo = hi = o.rtt_ms;
        } else {
          lo = std::min(lo, o.rtt_ms);
          hi = std::max(hi, o.rtt_ms);
        }
        ++s.pings_received;
        sum += o.rtt_ms;
        break;
      case traffic::PingStatus::DroppedUnreachable: ++s.dropped_unreachable; break;
      case traffic::PingStatus::DroppedCollision: ++s.dropped_collision; break;
    }
  }
  if (s.pings_transmitted > 0)
    s.ping_loss_pct = 100.0 * static_cast<double>(s.pings_transmitted - s.pings_received) /
                      static_cast<double>(s.pings_transmitted);
  if (s.pings_received > 0) {
    s.rtt_min_ms = lo;
    s.rtt_max_ms = hi;
    s.rtt_mean_ms = sum / static_cast<double>(s.pings_received);
    for (const auto& [edge, count] : rtt_histogram(outcomes, histogram_bin_ms)) {
      if (count > s.modal_bin.frequency) {  // strict: ties keep the lower bin
        s.modal_bin.rtt_value_ms = edge;
        s.modal_bin.frequency = count;
      }
    }
  }
  return s;
}

}  // namespace leosim::metrics
