#pragma once

// ACS wire protocol. One message per datagram:
//
//   offset  size  field
//   0       1     message id
//   1       1     axis selector (0 pitch, 1 roll, 2 both)
//   2       2     payload length in bytes, little-endian
//   4       4n    payload, n float32 little-endian fields
//   4+4n    2     checksum, little-endian
//
// The checksum is the inverted 16-bit ones'-complement sum of the header and
// payload taken as little-endian words (odd trailing byte padded with zero).

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fepsim::acs {

enum class AxisSelect : std::uint8_t { Pitch = 0, Roll = 1, Both = 2 };

enum class ModeRequest : std::uint8_t { None = 0, Disable = 1, Enable = 2, Jam = 3 };

/// ID2
struct Control {
  ModeRequest mode_request = ModeRequest::None;
  bool trim_enable = true;
  bool shaker_enable = false;
  bool damping_enable = true;
  bool operator==(const Control&) const = default;
};

/// ID5
struct CharacteristicControl {
  float fade_time = 0.0f;  // s
  bool operator==(const CharacteristicControl&) const = default;
};

/// ID6
struct TrimControl {
  float trim = 0.0f;  // deg
  bool operator==(const TrimControl&) const = default;
};

/// ID7
struct ShakerControl {
  float amplitude = 0.0f;  // lbf
  float frequency = 0.0f;  // Hz
  bool operator==(const ShakerControl&) const = default;
};

/// ID8
struct DampingControl {
  float zeta = 0.0f;
  bool operator==(const DampingControl&) const = default;
};

/// ID9. A multiplier <= 1 removes the soft stop.
struct CueingForceControl {
  float softstop = 0.0f;  // deg, sign selects the side
  float multiplier = 1.0f;
  bool operator==(const CueingForceControl&) const = default;
};

/// ID10
struct InertiaControl {
  float inertia = 0.0f;
  bool operator==(const InertiaControl&) const = default;
};

/// ID20
struct RotaryStatus {
  float theta = 0.0f;      // deg
  float theta_dot = 0.0f;  // deg/s
  float force = 0.0f;      // lbf, grip sensor
  std::uint8_t mode = 0;   // Mode
  std::uint8_t switches = 0;  // bit0 S1 .. bit3 S4
  bool operator==(const RotaryStatus&) const = default;
};

enum class LimitStatus : std::uint8_t { Clamped = 1, Rejected = 2, Malformed = 3 };

/// ID22. Echo of a parameter the device limited or refused.
struct LimitedCharacteristic {
  LimitStatus status = LimitStatus::Clamped;
  std::uint8_t message_id = 0;
  std::uint8_t field = 0;
  float value = 0.0f;  // value in effect after the request
  bool operator==(const LimitedCharacteristic&) const = default;
};

/// ID50
struct IpChange {
  std::uint8_t octets[4] = {127, 0, 0, 1};
  std::uint16_t port = 0;
  bool operator==(const IpChange&) const = default;
};

/// IDs named by the device but without a documented payload. Decoded for
/// inspection, never encoded.
struct Reserved {
  std::uint8_t id = 0;
  std::vector<std::uint8_t> payload;
  bool operator==(const Reserved&) const = default;
};

using Payload = std::variant<Control, CharacteristicControl, TrimControl, ShakerControl,
                             DampingControl, CueingForceControl, InertiaControl, RotaryStatus,
                             LimitedCharacteristic, IpChange, Reserved>;

struct AcsMessage {
  AxisSelect axis = AxisSelect::Both;
  Payload payload;

  std::uint8_t id() const;
  bool operator==(const AcsMessage&) const = default;
};

inline constexpr std::size_t kHeaderSize = 4;
inline constexpr std::size_t kChecksumSize = 2;

bool is_reserved_id(std::uint8_t id);

/// Number of float32 fields for a documented id, 0 when the id is unknown.
std::size_t field_count(std::uint8_t id);

std::uint16_t checksum(std::span<const std::uint8_t> bytes);

/// Throws std::invalid_argument for reserved ids and out-of-domain fields.
std::vector<std::uint8_t> encode(const AcsMessage& message);

enum class DecodeError : std::uint8_t {
  Truncated,
  BadLength,
  BadChecksum,
  UnknownId,
  BadAxis,
  BadPayloadSize,
  BadField,
};

const char* to_string(DecodeError error);

using DecodeResult = std::variant<AcsMessage, DecodeError>;

/// Never throws.
DecodeResult decode(std::span<const std::uint8_t> bytes) noexcept;

std::string describe(const AcsMessage& message);

}  // namespace fepsim::acs
