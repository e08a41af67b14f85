#include "fepsim/acs/transmit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fepsim::acs {

TransmitPolicy::TransmitPolicy(std::int64_t min_interval_us) : min_interval_us_(min_interval_us) {
  if (min_interval_us_ < 0) {
    throw std::invalid_argument("send interval must be non-negative");
  }
}

bool TransmitPolicy::offer(const AcsMessage& message, std::int64_t now_us) {
  Stream& s = streams_[{message.id(), static_cast<std::uint8_t>(message.axis)}];
  auto bytes = encode(message);
  const bool status = message.id() == 20;
  if (!status && s.last_bytes && *s.last_bytes == bytes) {
    s.held.reset();
    return false;
  }
  if (!s.last_bytes || now_us - s.last_sent_us >= min_interval_us_) {
    s.last_bytes = std::move(bytes);
    s.last_sent_us = now_us;
    s.held.reset();
    return true;
  }
  s.held = message;
  return false;
}

std::vector<AcsMessage> TransmitPolicy::poll(std::int64_t now_us) {
  std::vector<AcsMessage> out;
  for (auto& [key, s] : streams_) {
    if (s.held && now_us - s.last_sent_us >= min_interval_us_) {
      s.last_bytes = encode(*s.held);
      s.last_sent_us = now_us;
      out.push_back(std::move(*s.held));
      s.held.reset();
    }
  }
  return out;
}

std::optional<std::int64_t> TransmitPolicy::next_due() const {
  std::optional<std::int64_t> due;
  for (const auto& [key, s] : streams_) {
    if (s.held) {
      const std::int64_t t = s.last_sent_us + min_interval_us_;
      due = due ? std::min(*due, t) : t;
    }
  }
  return due;
}

StatusSchedule::StatusSchedule(double rate_hz) {
  if (!(rate_hz > 0.0) || rate_hz > 200.0) {
    throw std::invalid_argument("status rate must lie in (0, 200] Hz");
  }
  period_us_ = static_cast<std::int64_t>(std::llround(1e6 / rate_hz));
}

bool StatusSchedule::due(std::int64_t now_us) {
  if (!next_us_ || now_us >= *next_us_) {
    // keep a fixed grid; skip missed slots
    std::int64_t next = next_us_ ? *next_us_ : now_us;
    while (next <= now_us) {
      next += period_us_;
    }
    next_us_ = next;
    return true;
  }
  return false;
}

}  // namespace fepsim::acs
