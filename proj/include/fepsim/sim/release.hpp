#pragma once

// Stick release capture: CSV with header "t_s,theta_deg"; lines starting
// with '#' are comments.

#include <filesystem>
#include <string>
#include <vector>

namespace fepsim::sim {

struct ReleaseCapture {
  std::vector<double> t;
  std::vector<double> theta_deg;
  std::vector<std::string> comments;
};

/// Throws IoError on read failure and ConfigError on malformed content.
ReleaseCapture read_release_capture(const std::filesystem::path& path);
void write_release_capture(const ReleaseCapture& capture, const std::filesystem::path& path);

}  // namespace fepsim::sim
