#include "fepsim/sim/release.hpp"

#include "fepsim/dynamics/types.hpp"
#include "fepsim/sim/log.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

namespace fepsim::sim {

namespace {

double parse_field(std::string_view text, const std::string& where) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(where + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ReleaseCapture read_release_capture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "': " + std::strerror(errno));
  ReleaseCapture capture;
  std::string line;
  bool header = false;
  for (int number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = path.string() + ":" + std::to_string(number);
    if (line.empty()) continue;
    if (line.front() == '#') {
      capture.comments.push_back(line.substr(1));
      continue;
    }
    if (!header) {
      if (line != "t_s,theta_deg") throw ConfigError(where + ": expected header 't_s,theta_deg'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ConfigError(where + ": expected two fields");
    }
    const std::string_view view(line);
    const double t = parse_field(view.substr(0, comma), where);
    if (!capture.t.empty() && !(t > capture.t.back())) {
      throw ConfigError(where + ": time not increasing");
    }
    capture.t.push_back(t);
    capture.theta_deg.push_back(parse_field(view.substr(comma + 1), where));
  }
  if (!header) throw ConfigError(path.string() + ": missing header");
  return capture;
}

void write_release_capture(const ReleaseCapture& capture, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "': " + std::strerror(errno));
  for (const auto& c : capture.comments) out << '#' << c << '\n';
  out << "t_s,theta_deg\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < capture.t.size(); ++i) {
    out << capture.t[i] << ',' << capture.theta_deg[i] << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace fepsim::sim
