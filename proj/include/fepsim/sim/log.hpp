#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fepsim::sim {

/// One simulation step. State at the start of the step together with every
/// command computed during it. Angles in the state block are radians;
/// *_deg channels are degrees.
struct LogRecord {
  std::int64_t step = 0;
  double t = 0.0;
  // body velocity ft/s, body rates rad/s, euler rad, NED position ft
  double u = 0.0, v = 0.0, w = 0.0;
  double p = 0.0, q = 0.0, r = 0.0;
  double phi = 0.0, theta = 0.0, psi = 0.0;
  double north = 0.0, east = 0.0, down = 0.0;
  // achieved surfaces deg, thrust lbf
  double tail = 0.0, aileron = 0.0, rudder = 0.0, thrust = 0.0;
  double alpha_deg = 0.0, beta_deg = 0.0, nz = 0.0, qbar = 0.0, mach = 0.0;
  // pipeline stages
  double pilot_p = 0.0, pilot_q = 0.0, pilot_r = 0.0;
  double cmd_p = 0.0, cmd_q = 0.0, cmd_r = 0.0;
  double cmd_tail = 0.0, cmd_aileron = 0.0, cmd_rudder = 0.0, cmd_thrust = 0.0;
  // protection
  double alpha_bar = 0.0, phi_bar = 0.0, lambda_long = 1.0, lambda_lat = 1.0;
  double alpha_max_eff_deg = 0.0, alpha_min_eff_deg = 0.0;
  double nz_max = 0.0, nz_min = 0.0, phi_max_deg = 0.0;
  double protection_on = 0.0, rate_active = 0.0, long_active = 0.0, lat_active = 0.0;
  double indi_saturated = 0.0, indi_pinv = 0.0;
  // inceptor
  double stick_pitch_deg = 0.0, stick_roll_deg = 0.0;
  double stick_pitch_force = 0.0, stick_roll_force = 0.0;  // characteristic force, lbf
  double grip_pitch = 0.0, grip_roll = 0.0, pedal = 0.0;
  double acs_mode_pitch = 0.0, acs_mode_roll = 0.0;
  double softstop_pitch = 0.0, softstop_roll = 0.0;  // requested soft-stop position, 0 none

  bool operator==(const LogRecord&) const = default;
};

struct LogColumn {
  const char* name;
  double LogRecord::*field;
};

/// Fixed column order after the leading "step" column.
std::span<const LogColumn> log_columns();

struct LogEvent {
  std::int64_t step = 0;
  std::string text;
  bool operator==(const LogEvent&) const = default;
};

struct TrajectoryLog {
  std::string scenario;
  double dt = 0.0;
  std::vector<LogRecord> records;
  std::vector<LogEvent> events;
  std::string error;  // set when the run was aborted

  double max_alpha_deg() const;
  double max_nz() const;
  double max_abs_phi_deg() const;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string csv_header();
std::string csv_line(const LogRecord& record);

/// Writes the CSV only.
void write_csv(const TrajectoryLog& log, const std::filesystem::path& path);

/// Reads a CSV written by write_csv.
std::vector<LogRecord> read_csv(const std::filesystem::path& path);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::span<const std::uint8_t> bytes);

/// CSV plus "<stem>.json" sidecar with metadata, config hashes, summary and
/// events. `hashes` maps a role ("scenario", "aircraft", ...) to a file.
void export_log(const TrajectoryLog& log, const std::filesystem::path& csv_path,
                const std::map<std::string, std::filesystem::path>& hashed_files);

}  // namespace fepsim::sim
