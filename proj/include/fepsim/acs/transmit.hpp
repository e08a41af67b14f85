#pragma once

// On-change transmission with a per-stream rate ceiling. A stream is one
// (message id, axis) pair. Times are integer microseconds.

#include "fepsim/acs/messages.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace fepsim::acs {

inline constexpr std::int64_t kMinSendIntervalUs = 5000;  // 200 Hz

class TransmitPolicy {
 public:
  explicit TransmitPolicy(std::int64_t min_interval_us = kMinSendIntervalUs);

  /// True when `message` goes out now. A changed message arriving inside the
  /// interval is held and released by poll(); an unchanged one is dropped
  /// and cancels anything held for the stream. Status (ID20) skips the
  /// change test.
  bool offer(const AcsMessage& message, std::int64_t now_us);

  /// Held messages that are due at `now_us`, marked as sent.
  std::vector<AcsMessage> poll(std::int64_t now_us);

  /// Earliest release time of a held message.
  std::optional<std::int64_t> next_due() const;

  std::int64_t min_interval_us() const { return min_interval_us_; }

 private:
  struct Stream {
    std::optional<std::vector<std::uint8_t>> last_bytes;
    std::int64_t last_sent_us = 0;
    std::optional<AcsMessage> held;
  };
  using Key = std::pair<std::uint8_t, std::uint8_t>;

  std::int64_t min_interval_us_;
  std::map<Key, Stream> streams_;
};

/// Fixed-rate schedule for status frames, capped at 200 Hz.
class StatusSchedule {
 public:
  explicit StatusSchedule(double rate_hz);

  /// True once per period.
  bool due(std::int64_t now_us);

  std::int64_t period_us() const { return period_us_; }

 private:
  std::int64_t period_us_;
  std::optional<std::int64_t> next_us_;
};

}  // namespace fepsim::acs
