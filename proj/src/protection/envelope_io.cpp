#include "fepsim/protection/envelope.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace fepsim::protection {

using nlohmann::json;

namespace {

std::pair<double, double> pair_of(const json& j, const char* key) {
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != 2) {
    throw ConfigError(std::string("'") + key + "' must be a [min, max] pair");
  }
  return {v[0], v[1]};
}

EnvelopeLimits parse_limits(const json& j) {
  EnvelopeLimits l;
  const char* rates[] = {"p", "q", "r"};
  for (int i = 0; i < 3; ++i) {
    const auto [lo, hi] = pair_of(j, rates[i]);
    l.rate_min[i] = lo;
    l.rate_max[i] = hi;
  }
  std::tie(l.alpha_min, l.alpha_max) = pair_of(j, "alpha_deg");
  std::tie(l.nz_min, l.nz_max) = pair_of(j, "nz");
  l.phi_max = j.at("phi_max_deg").get<double>();
  return l;
}

}  // namespace

EnvelopeDatabase parse_envelope_database(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", std::string{}) != "fepsim-envelope") {
      throw ConfigError("expected format 'fepsim-envelope'");
    }
    if (!j.contains("version") || j.at("version").get<int>() != 1) {
      throw ConfigError("missing or unsupported 'version'");
    }
    std::vector<EnvelopeLimits> nodes;
    for (const auto& n : j.at("nodes")) {
      nodes.push_back(parse_limits(n));
    }
    return EnvelopeDatabase(j.at("mach").get<std::vector<double>>(),
                            j.at("altitude_ft").get<std::vector<double>>(), std::move(nodes));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("envelope database: ") + e.what());
  }
}

EnvelopeDatabase load_envelope_database(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  try {
    return parse_envelope_database(os.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace fepsim::protection
