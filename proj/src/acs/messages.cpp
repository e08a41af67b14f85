#include "fepsim/acs/messages.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace fepsim::acs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_f32(std::vector<std::uint8_t>& out, float f) {
  const auto bits = std::bit_cast<std::uint32_t>(f);
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

float get_f32(const std::uint8_t* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

float flag(bool b) { return b ? 1.0f : 0.0f; }

// field helpers for decode; false means out of domain
bool as_flag(float f, bool& out) {
  if (f == 0.0f || f == 1.0f) {
    out = f == 1.0f;
    return true;
  }
  return false;
}

bool as_uint(float f, unsigned max, unsigned& out) {
  if (!(f >= 0.0f) || f > static_cast<float>(max) || f != std::floor(f)) {
    return false;
  }
  out = static_cast<unsigned>(f);
  return true;
}

std::vector<float> fields_of(const AcsMessage& m) {
  return std::visit(
      overloaded{
          [](const Control& c) -> std::vector<float> {
            return {static_cast<float>(c.mode_request), flag(c.trim_enable),
                    flag(c.shaker_enable), flag(c.damping_enable)};
          },
          [](const CharacteristicControl& c) -> std::vector<float> { return {c.fade_time}; },
          [](const TrimControl& c) -> std::vector<float> { return {c.trim}; },
          [](const ShakerControl& c) -> std::vector<float> { return {c.amplitude, c.frequency}; },
          [](const DampingControl& c) -> std::vector<float> { return {c.zeta}; },
          [](const CueingForceControl& c) -> std::vector<float> {
            return {c.softstop, c.multiplier};
          },
          [](const InertiaControl& c) -> std::vector<float> { return {c.inertia}; },
          [](const RotaryStatus& s) -> std::vector<float> {
            return {s.theta, s.theta_dot, s.force, static_cast<float>(s.mode),
                    static_cast<float>(s.switches)};
          },
          [](const LimitedCharacteristic& l) -> std::vector<float> {
            return {static_cast<float>(l.status), static_cast<float>(l.message_id),
                    static_cast<float>(l.field), l.value};
          },
          [](const IpChange& ip) -> std::vector<float> {
            return {static_cast<float>(ip.octets[0]), static_cast<float>(ip.octets[1]),
                    static_cast<float>(ip.octets[2]), static_cast<float>(ip.octets[3]),
                    static_cast<float>(ip.port)};
          },
          [](const Reserved&) -> std::vector<float> {
            throw std::invalid_argument("reserved message ids cannot be encoded");
          },
      },
      m.payload);
}

// Builds the payload from decoded fields; false on a domain violation.
bool build(std::uint8_t id, const float* f, Payload& out) {
  unsigned u = 0;
  switch (id) {
    case 2: {
      Control c;
      if (!as_uint(f[0], 3, u)) return false;
      c.mode_request = static_cast<ModeRequest>(u);
      if (!as_flag(f[1], c.trim_enable) || !as_flag(f[2], c.shaker_enable) ||
          !as_flag(f[3], c.damping_enable)) {
        return false;
      }
      out = c;
      return true;
    }
    case 5:
      out = CharacteristicControl{f[0]};
      return true;
    case 6:
      out = TrimControl{f[0]};
      return true;
    case 7:
      out = ShakerControl{f[0], f[1]};
      return true;
    case 8:
      out = DampingControl{f[0]};
      return true;
    case 9:
      out = CueingForceControl{f[0], f[1]};
      return true;
    case 10:
      out = InertiaControl{f[0]};
      return true;
    case 20: {
      RotaryStatus s{f[0], f[1], f[2]};
      if (!as_uint(f[3], 2, u)) return false;
      s.mode = static_cast<std::uint8_t>(u);
      if (!as_uint(f[4], 15, u)) return false;
      s.switches = static_cast<std::uint8_t>(u);
      out = s;
      return true;
    }
    case 22: {
      LimitedCharacteristic l;
      if (!as_uint(f[0], 3, u) || u == 0) return false;
      l.status = static_cast<LimitStatus>(u);
      if (!as_uint(f[1], 255, u)) return false;
      l.message_id = static_cast<std::uint8_t>(u);
      if (!as_uint(f[2], 255, u)) return false;
      l.field = static_cast<std::uint8_t>(u);
      l.value = f[3];
      out = l;
      return true;
    }
    case 50: {
      IpChange ip;
      for (int i = 0; i < 4; ++i) {
        if (!as_uint(f[i], 255, u)) return false;
        ip.octets[i] = static_cast<std::uint8_t>(u);
      }
      if (!as_uint(f[4], 65535, u)) return false;
      ip.port = static_cast<std::uint16_t>(u);
      out = ip;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

std::uint8_t AcsMessage::id() const {
  return std::visit(overloaded{
                        [](const Control&) -> std::uint8_t { return 2; },
                        [](const CharacteristicControl&) -> std::uint8_t { return 5; },
                        [](const TrimControl&) -> std::uint8_t { return 6; },
                        [](const ShakerControl&) -> std::uint8_t { return 7; },
                        [](const DampingControl&) -> std::uint8_t { return 8; },
                        [](const CueingForceControl&) -> std::uint8_t { return 9; },
                        [](const InertiaControl&) -> std::uint8_t { return 10; },
                        [](const RotaryStatus&) -> std::uint8_t { return 20; },
                        [](const LimitedCharacteristic&) -> std::uint8_t { return 22; },
                        [](const IpChange&) -> std::uint8_t { return 50; },
                        [](const Reserved& r) -> std::uint8_t { return r.id; },
                    },
                    payload);
}

bool is_reserved_id(std::uint8_t id) {
  switch (id) {
    case 1:
    case 3:
    case 4:
    case 11:
    case 12:
    case 21:
    case 23:
    case 24:
      return true;
    default:
      return false;
  }
}

std::size_t field_count(std::uint8_t id) {
  switch (id) {
    case 2:
      return 4;
    case 5:
    case 6:
    case 8:
    case 10:
      return 1;
    case 7:
    case 9:
      return 2;
    case 20:
      return 5;
    case 22:
      return 4;
    case 50:
      return 5;
    default:
      return 0;
  }
}

std::uint16_t checksum(std::span<const std::uint8_t> bytes) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    std::uint32_t word = bytes[i];
    if (i + 1 < bytes.size()) {
      word |= static_cast<std::uint32_t>(bytes[i + 1]) << 8;
    }
    sum += word;
    sum = (sum & 0xffff) + (sum >> 16);
  }
  return static_cast<std::uint16_t>(~sum & 0xffff);
}

std::vector<std::uint8_t> encode(const AcsMessage& message) {
  const std::uint8_t id = message.id();
  if (is_reserved_id(id)) {
    throw std::invalid_argument("reserved message id " + std::to_string(id));
  }
  if (static_cast<unsigned>(message.axis) > 2) {
    throw std::invalid_argument("axis selector out of range");
  }
  const auto fields = fields_of(message);
  for (float f : fields) {
    if (!std::isfinite(f)) {
      throw std::invalid_argument("non-finite field in message id " + std::to_string(id));
    }
  }
  // domain check by decoding the fields back
  Payload probe;
  if (!build(id, fields.data(), probe)) {
    throw std::invalid_argument("field out of domain in message id " + std::to_string(id));
  }

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 4 * fields.size() + kChecksumSize);
  out.push_back(id);
  out.push_back(static_cast<std::uint8_t>(message.axis));
  put_u16(out, static_cast<std::uint16_t>(4 * fields.size()));
  for (float f : fields) {
    put_f32(out, f);
  }
  put_u16(out, checksum(out));
  return out;
}

const char* to_string(DecodeError error) {
  switch (error) {
    case DecodeError::Truncated:
      return "truncated";
    case DecodeError::BadLength:
      return "bad length";
    case DecodeError::BadChecksum:
      return "bad checksum";
    case DecodeError::UnknownId:
      return "unknown id";
    case DecodeError::BadAxis:
      return "bad axis";
    case DecodeError::BadPayloadSize:
      return "bad payload size";
    case DecodeError::BadField:
      return "bad field";
  }
  return "?";
}

DecodeResult decode(std::span<const std::uint8_t> bytes) noexcept {
  if (bytes.size() < kHeaderSize + kChecksumSize) {
    return DecodeError::Truncated;
  }
  const std::size_t length = get_u16(bytes.data() + 2);
  const std::size_t total = kHeaderSize + length + kChecksumSize;
  if (bytes.size() < total) {
    return DecodeError::Truncated;
  }
  if (bytes.size() > total) {
    return DecodeError::BadLength;
  }
  const auto body = bytes.first(kHeaderSize + length);
  if (checksum(body) != get_u16(bytes.data() + kHeaderSize + length)) {
    return DecodeError::BadChecksum;
  }

  const std::uint8_t id = bytes[0];
  const std::uint8_t axis = bytes[1];
  const bool reserved = is_reserved_id(id);
  const std::size_t n = field_count(id);
  if (!reserved && n == 0) {
    return DecodeError::UnknownId;
  }
  if (axis > 2) {
    return DecodeError::BadAxis;
  }

  AcsMessage m;
  m.axis = static_cast<AxisSelect>(axis);
  const std::uint8_t* payload = bytes.data() + kHeaderSize;
  if (reserved) {
    try {
      m.payload = Reserved{id, std::vector<std::uint8_t>(payload, payload + length)};
    } catch (...) {
      return DecodeError::BadLength;
    }
    return m;
  }
  if (length != 4 * n) {
    return DecodeError::BadPayloadSize;
  }
  std::array<float, 8> f{};
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = get_f32(payload + 4 * i);
    if (!std::isfinite(f[i])) {
      return DecodeError::BadField;
    }
  }
  if (!build(id, f.data(), m.payload)) {
    return DecodeError::BadField;
  }
  return m;
}

std::string describe(const AcsMessage& message) {
  std::ostringstream os;
  os << "id " << static_cast<int>(message.id()) << " axis " << static_cast<int>(message.axis);
  if (!is_reserved_id(message.id())) {
    os << " [";
    const auto fields = fields_of(message);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      os << (i ? ", " : "") << fields[i];
    }
    os << "]";
  }
  return os.str();
}

}  // namespace fepsim::acs
