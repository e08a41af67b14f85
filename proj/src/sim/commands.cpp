#include "fepsim/sim/commands.hpp"

#include "fepsim/dynamics/types.hpp"
#include "fepsim/sim/log.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace fepsim::sim {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double finite(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw std::invalid_argument(std::string("'") + key + "' must be a number");
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("'") + key + "' must be finite");
  }
  return v;
}

const char* mode_name(acs::ModeRequest r) {
  switch (r) {
    case acs::ModeRequest::Disable: return "disable";
    case acs::ModeRequest::Enable: return "enable";
    case acs::ModeRequest::Jam: return "jam";
    case acs::ModeRequest::None: break;
  }
  return "none";
}

const char* axis_name(acs::AxisSelect a) {
  switch (a) {
    case acs::AxisSelect::Pitch: return "pitch";
    case acs::AxisSelect::Roll: return "roll";
    case acs::AxisSelect::Both: break;
  }
  return "both";
}

Command from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("frame must be a JSON object");
  }
  const std::string type = j.value("type", std::string{});
  if (type == "input") {
    GripCommand g;
    g.pitch = std::clamp(finite(j, "pitch_lbf", 0.0), -kGripForceLimit, kGripForceLimit);
    g.roll = std::clamp(finite(j, "roll_lbf", 0.0), -kGripForceLimit, kGripForceLimit);
    g.pedal = std::clamp(finite(j, "pedal", 0.0), -1.0, 1.0);
    if (j.contains("throttle") && !j.at("throttle").is_null()) {
      g.throttle = std::clamp(finite(j, "throttle", 0.0), 0.0, 1.0);
    }
    return g;
  }
  if (type == "protection") {
    if (!j.contains("on") || !j.at("on").is_boolean()) {
      throw std::invalid_argument("'on' must be a boolean");
    }
    return ProtectionToggle{j.at("on").get<bool>()};
  }
  if (type == "acs_mode") {
    ModeCommand m;
    const std::string mode = j.value("mode", std::string{});
    if (mode == "enable") m.request = acs::ModeRequest::Enable;
    else if (mode == "disable") m.request = acs::ModeRequest::Disable;
    else if (mode == "jam") m.request = acs::ModeRequest::Jam;
    else throw std::invalid_argument("'mode' must be enable, disable or jam");
    const std::string axis = j.value("axis", std::string("both"));
    if (axis == "pitch") m.axis = acs::AxisSelect::Pitch;
    else if (axis == "roll") m.axis = acs::AxisSelect::Roll;
    else if (axis == "both") m.axis = acs::AxisSelect::Both;
    else throw std::invalid_argument("'axis' must be pitch, roll or both");
    return m;
  }
  if (type == "reset") {
    ResetCommand r;
    if (j.contains("resume")) {
      if (!j.at("resume").is_boolean()) throw std::invalid_argument("'resume' must be a boolean");
      r.resume = j.at("resume").get<bool>();
    }
    return r;
  }
  throw std::invalid_argument("unknown frame type '" + type + "'");
}

json command_json(const Command& c) {
  return std::visit(
      overloaded{
          [](const GripCommand& g) {
            json j = {{"type", "input"}, {"pitch_lbf", g.pitch}, {"roll_lbf", g.roll},
                      {"pedal", g.pedal}};
            if (g.throttle) j["throttle"] = *g.throttle;
            return j;
          },
          [](const ProtectionToggle& p) { return json{{"type", "protection"}, {"on", p.on}}; },
          [](const ModeCommand& m) {
            return json{{"type", "acs_mode"}, {"mode", mode_name(m.request)},
                        {"axis", axis_name(m.axis)}};
          },
          [](const ResetCommand& r) {
            json j = {{"type", "reset"}};
            if (r.resume) j["resume"] = true;
            return j;
          },
      },
      c);
}

}  // namespace

std::variant<Command, std::string> parse_command_frame(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    return std::string("malformed frame: ") + e.what();
  } catch (const std::invalid_argument& e) {
    return std::string("malformed frame: ") + e.what();
  }
}

std::string to_json(const Command& command) { return command_json(command).dump(); }

std::string to_capture_line(const StampedCommand& command) {
  json j = command_json(command.command);
  j["step"] = command.step;
  return j.dump();
}

StampedCommand parse_capture_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    StampedCommand s;
    s.step = j.at("step").get<std::int64_t>();
    s.command = from_json(j);
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("capture: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("capture: ") + e.what());
  }
}

void write_capture(const std::vector<StampedCommand>& commands, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  for (const auto& c : commands) {
    out << to_capture_line(c) << '\n';
  }
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

std::vector<StampedCommand> read_capture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path.string() + "'");
  }
  std::vector<StampedCommand> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(parse_capture_line(line));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
    if (out.size() > 1 && out.back().step < out[out.size() - 2].step) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": steps must not decrease");
    }
  }
  return out;
}

}  // namespace fepsim::sim
