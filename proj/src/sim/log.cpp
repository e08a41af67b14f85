#include "fepsim/sim/log.hpp"

#include "fepsim/dynamics/types.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fepsim::sim {

namespace {

#define FEPSIM_COLUMN(name) LogColumn{#name, &LogRecord::name}

constexpr std::array kColumns = {
    FEPSIM_COLUMN(t),
    FEPSIM_COLUMN(u),
    FEPSIM_COLUMN(v),
    FEPSIM_COLUMN(w),
    FEPSIM_COLUMN(p),
    FEPSIM_COLUMN(q),
    FEPSIM_COLUMN(r),
    FEPSIM_COLUMN(phi),
    FEPSIM_COLUMN(theta),
    FEPSIM_COLUMN(psi),
    FEPSIM_COLUMN(north),
    FEPSIM_COLUMN(east),
    FEPSIM_COLUMN(down),
    FEPSIM_COLUMN(tail),
    FEPSIM_COLUMN(aileron),
    FEPSIM_COLUMN(rudder),
    FEPSIM_COLUMN(thrust),
    FEPSIM_COLUMN(alpha_deg),
    FEPSIM_COLUMN(beta_deg),
    FEPSIM_COLUMN(nz),
    FEPSIM_COLUMN(qbar),
    FEPSIM_COLUMN(mach),
    FEPSIM_COLUMN(pilot_p),
    FEPSIM_COLUMN(pilot_q),
    FEPSIM_COLUMN(pilot_r),
    FEPSIM_COLUMN(cmd_p),
    FEPSIM_COLUMN(cmd_q),
    FEPSIM_COLUMN(cmd_r),
    FEPSIM_COLUMN(cmd_tail),
    FEPSIM_COLUMN(cmd_aileron),
    FEPSIM_COLUMN(cmd_rudder),
    FEPSIM_COLUMN(cmd_thrust),
    FEPSIM_COLUMN(alpha_bar),
    FEPSIM_COLUMN(phi_bar),
    FEPSIM_COLUMN(lambda_long),
    FEPSIM_COLUMN(lambda_lat),
    FEPSIM_COLUMN(alpha_max_eff_deg),
    FEPSIM_COLUMN(alpha_min_eff_deg),
    FEPSIM_COLUMN(nz_max),
    FEPSIM_COLUMN(nz_min),
    FEPSIM_COLUMN(phi_max_deg),
    FEPSIM_COLUMN(protection_on),
    FEPSIM_COLUMN(rate_active),
    FEPSIM_COLUMN(long_active),
    FEPSIM_COLUMN(lat_active),
    FEPSIM_COLUMN(indi_saturated),
    FEPSIM_COLUMN(indi_pinv),
    FEPSIM_COLUMN(stick_pitch_deg),
    FEPSIM_COLUMN(stick_roll_deg),
    FEPSIM_COLUMN(stick_pitch_force),
    FEPSIM_COLUMN(stick_roll_force),
    FEPSIM_COLUMN(grip_pitch),
    FEPSIM_COLUMN(grip_roll),
    FEPSIM_COLUMN(pedal),
    FEPSIM_COLUMN(acs_mode_pitch),
    FEPSIM_COLUMN(acs_mode_roll),
    FEPSIM_COLUMN(softstop_pitch),
    FEPSIM_COLUMN(softstop_roll),
};

#undef FEPSIM_COLUMN

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

template <typename F>
double max_over(const std::vector<LogRecord>& records, F f) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) m = std::max(m, f(r));
  return m;
}

}  // namespace

std::span<const LogColumn> log_columns() { return kColumns; }

double TrajectoryLog::max_alpha_deg() const {
  return max_over(records, [](const LogRecord& r) { return r.alpha_deg; });
}

double TrajectoryLog::max_nz() const {
  return max_over(records, [](const LogRecord& r) { return r.nz; });
}

double TrajectoryLog::max_abs_phi_deg() const {
  return max_over(records, [](const LogRecord& r) { return std::abs(r.phi) * kRadToDeg; });
}

std::string csv_header() {
  std::string h = "step";
  for (const auto& c : kColumns) {
    h += ',';
    h += c.name;
  }
  return h;
}

std::string csv_line(const LogRecord& record) {
  std::string line = std::to_string(record.step);
  for (const auto& c : kColumns) {
    line += ',';
    append_number(line, record.*(c.field));
  }
  return line;
}

void write_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "': " + std::strerror(errno));
  }
  out << csv_header() << '\n';
  for (const auto& r : log.records) {
    out << csv_line(r) << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

std::vector<LogRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw IoError("'" + path.string() + "' does not carry the expected log header");
  }
  std::vector<LogRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    LogRecord r;
    const char* s = line.c_str();
    char* end = nullptr;
    errno = 0;
    r.step = std::strtoll(s, &end, 10);
    bool ok = errno == 0 && end != s;
    for (const auto& c : kColumns) {
      if (!ok || *end != ',') {
        ok = false;
        break;
      }
      s = end + 1;
      r.*(c.field) = std::strtod(s, &end);
      ok = end != s;
    }
    if (!ok || *end != '\0') {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": malformed record");
    }
    records.push_back(r);
  }
  return records;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path.string() + "' for hashing");
  }
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void export_log(const TrajectoryLog& log, const std::filesystem::path& csv_path,
                const std::map<std::string, std::filesystem::path>& hashed_files) {
  write_csv(log, csv_path);

  nlohmann::ordered_json j;
  j["format"] = "fepsim-log";
  j["version"] = 1;
  j["scenario"] = log.scenario;
  j["csv"] = csv_path.filename().string();
  j["dt_s"] = log.dt;
  j["records"] = log.records.size();
  nlohmann::ordered_json columns = nlohmann::ordered_json::array({"step"});
  for (const auto& c : kColumns) columns.push_back(c.name);
  j["columns"] = columns;
  nlohmann::ordered_json hashes = nlohmann::ordered_json::object();
  for (const auto& [role, path] : hashed_files) {
    hashes[role] = {{"file", path.filename().string()}, {"sha256", sha256_file(path)}};
  }
  j["config_hashes"] = hashes;
  if (!log.records.empty()) {
    j["summary"] = {{"max_alpha_deg", log.max_alpha_deg()},
                    {"max_nz", log.max_nz()},
                    {"max_abs_phi_deg", log.max_abs_phi_deg()}};
  }
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& e : log.events) {
    events.push_back({{"step", e.step}, {"event", e.text}});
  }
  j["events"] = events;
  if (!log.error.empty()) {
    j["error"] = log.error;
  }

  auto sidecar = csv_path;
  sidecar.replace_extension(".json");
  std::ofstream out(sidecar, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + sidecar.string() + "': " + std::strerror(errno));
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw IoError("write failed for '" + sidecar.string() + "'");
  }
}

}  // namespace fepsim::sim
