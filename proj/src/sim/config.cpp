#include "fepsim/sim/config.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fepsim::sim {

using nlohmann::json;

namespace {

constexpr const char* kAircraftFormat = "fepsim-aircraft";
constexpr const char* kScenarioFormat = "fepsim-scenario";

void check_header(const json& j, const char* format) {
  if (j.value("format", std::string{}) != format) {
    throw ConfigError(std::string("expected format '") + format + "'");
  }
  if (!j.contains("version")) {
    throw ConfigError("missing mandatory 'version' field");
  }
  if (j.at("version").get<int>() != 1) {
    throw ConfigError("unsupported version " + j.at("version").dump());
  }
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) {
    throw ConfigError(std::string("'") + key + "' must be finite");
  }
  return v;
}

dynamics::ActuatorSpec parse_actuator(const json& j, dynamics::ActuatorSpec spec,
                                      const char* name) {
  spec.tau = number(j, "tau_s", spec.tau);
  spec.rate_limit = number(j, "rate_limit_dps", spec.rate_limit);
  spec.pos_min = number(j, "min_deg", spec.pos_min);
  spec.pos_max = number(j, "max_deg", spec.pos_max);
  if (!spec.valid()) {
    throw ConfigError(std::string("actuators.") + name +
                      ": need tau > 0, rate limit > 0 and min < max");
  }
  return spec;
}

acs::FfcCurve parse_ffc(const json& j, const std::string& where) {
  std::vector<acs::FfcPoint> points;
  for (const auto& p : j) {
    const auto pair = p.get<std::vector<double>>();
    if (pair.size() != 2) {
      throw ConfigError(where + ": each breakpoint must be [position_deg, force_lbf]");
    }
    points.push_back({pair[0], pair[1]});
  }
  if (auto issue = acs::FfcCurve::validate(points)) {
    throw ConfigError(where + ": invalid FFC curve: " + issue->describe());
  }
  return acs::FfcCurve(std::move(points));
}

acs::AxisConfig parse_stick_axis(const json& j, const std::string& where) {
  acs::AxisConfig a;
  if (j.contains("ffc")) {
    a.ffc = parse_ffc(j.at("ffc"), where + ".ffc");
  }
  a.inertia = number(j, "inertia", a.inertia);
  a.zeta = number(j, "zeta", a.zeta);
  a.trim = number(j, "trim_deg", a.trim);
  if (a.inertia < acs::kInertiaMin || a.inertia > acs::kInertiaMax) {
    throw ConfigError(where + ".inertia: must lie in [0.01, 10]");
  }
  if (a.zeta < acs::kZetaMin || a.zeta > acs::kZetaMax) {
    throw ConfigError(where + ".zeta: must lie in [0.2, 6]");
  }
  if (std::abs(a.trim) > acs::kPositionLimit) {
    throw ConfigError(where + ".trim_deg: must lie within +/-24");
  }
  if (j.contains("friction")) {
    const auto& f = j.at("friction");
    a.friction.coulomb = number(f, "coulomb_lbf", 0.0);
    a.friction.viscous = number(f, "viscous_lbf_s_per_deg", 0.0);
    if (a.friction.coulomb < 0.0 || a.friction.viscous < 0.0) {
      throw ConfigError(where + ".friction: coefficients must be non-negative");
    }
  }
  return a;
}

InceptorConfig parse_inceptor(const json& j) {
  InceptorConfig c;
  c.device.status_rate_hz = number(j, "status_rate_hz", c.device.status_rate_hz);
  if (!(c.device.status_rate_hz > 0.0) || c.device.status_rate_hz > 200.0) {
    throw ConfigError("inceptor.status_rate_hz: must lie in (0, 200]");
  }
  if (j.contains("pitch")) c.device.axes[acs::kPitch] = parse_stick_axis(j.at("pitch"), "inceptor.pitch");
  if (j.contains("roll")) c.device.axes[acs::kRoll] = parse_stick_axis(j.at("roll"), "inceptor.roll");
  if (j.contains("gearing")) {
    const auto& g = j.at("gearing");
    c.gearing.pitch_up = number(g, "pitch_up_rps", c.gearing.pitch_up);
    c.gearing.pitch_down = number(g, "pitch_down_rps", c.gearing.pitch_down);
    c.gearing.roll = number(g, "roll_rps", c.gearing.roll);
    c.gearing.yaw = number(g, "yaw_rps", c.gearing.yaw);
    if (c.gearing.pitch_up < 0.0 || c.gearing.pitch_down < 0.0 || c.gearing.roll < 0.0 ||
        c.gearing.yaw < 0.0) {
      throw ConfigError("inceptor.gearing: rates must be non-negative");
    }
  }
  if (j.contains("softstop")) {
    const auto& s = j.at("softstop");
    c.softstop.enabled = s.value("enabled", c.softstop.enabled);
    c.softstop.position = number(s, "position_deg", c.softstop.position);
    c.softstop.multiplier = number(s, "multiplier", c.softstop.multiplier);
    c.softstop.fade_time = number(s, "fade_time_s", c.softstop.fade_time);
    if (!(c.softstop.position > 0.0 && c.softstop.position < acs::kPositionLimit)) {
      throw ConfigError("inceptor.softstop.position_deg: must lie in (0, 24)");
    }
    if (!(c.softstop.multiplier > 1.0)) {
      throw ConfigError("inceptor.softstop.multiplier: must exceed 1");
    }
    if (c.softstop.fade_time < 0.0) {
      throw ConfigError("inceptor.softstop.fade_time_s: must be non-negative");
    }
  }
  return c;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

AircraftConfig parse_aircraft_config(const std::string& text) {
  AircraftConfig c;
  c.inertia << 9496.0, 0.0, -982.0, 0.0, 55814.0, 0.0, -982.0, 0.0, 63100.0;
  try {
    const json j = json::parse(text);
    check_header(j, kAircraftFormat);
    c.name = j.value("name", std::string{});
    c.gravity = number(j, "gravity_fps2", c.gravity);
    if (j.contains("weight_lbf")) {
      c.mass = number(j, "weight_lbf", 0.0) / c.gravity;
    }
    c.mass = number(j, "mass_slug", c.mass);
    if (j.contains("inertia_slugft2")) {
      const auto rows = j.at("inertia_slugft2").get<std::vector<std::vector<double>>>();
      if (rows.size() != 3 || rows[0].size() != 3 || rows[1].size() != 3 || rows[2].size() != 3) {
        throw ConfigError("inertia_slugft2: expected a 3x3 array of rows");
      }
      for (int r = 0; r < 3; ++r) {
        for (int k = 0; k < 3; ++k) {
          c.inertia(r, k) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
        }
      }
    }
    c.mass_properties();  // validates

    if (j.contains("geometry")) {
      const auto& g = j.at("geometry");
      c.geometry.wing_area = number(g, "wing_area_ft2", c.geometry.wing_area);
      c.geometry.span = number(g, "span_ft", c.geometry.span);
      c.geometry.chord = number(g, "chord_ft", c.geometry.chord);
      if (!(c.geometry.wing_area > 0.0 && c.geometry.span > 0.0 && c.geometry.chord > 0.0)) {
        throw ConfigError("geometry: dimensions must be positive");
      }
    }
    if (j.contains("actuators")) {
      const auto& a = j.at("actuators");
      const char* names[] = {"tail", "aileron", "rudder"};
      for (std::size_t i = 0; i < 3; ++i) {
        if (a.contains(names[i])) {
          c.integrator.actuators[i] = parse_actuator(a.at(names[i]), c.integrator.actuators[i],
                                                     names[i]);
        }
      }
    }
    if (j.contains("thrust")) {
      const auto& t = j.at("thrust");
      c.integrator.thrust_tau = number(t, "tau_s", c.integrator.thrust_tau);
      c.thrust_max = number(t, "max_lbf", c.thrust_max);
      if (!(c.integrator.thrust_tau > 0.0) || !(c.thrust_max > 0.0)) {
        throw ConfigError("thrust: tau_s and max_lbf must be positive");
      }
    }
    if (j.contains("indi")) {
      const auto& i = j.at("indi");
      if (i.contains("gains")) {
        const auto& g = i.at("gains");
        c.indi.gains.kp = number(g, "kp", c.indi.gains.kp);
        c.indi.gains.kq = number(g, "kq", c.indi.gains.kq);
        c.indi.gains.kr = number(g, "kr", c.indi.gains.kr);
      }
      if (!c.indi.gains.valid()) {
        throw ConfigError("indi.gains: all gains must be positive");
      }
      if (i.contains("filter")) {
        const auto& f = i.at("filter");
        c.indi.filter.natural_frequency =
            number(f, "natural_frequency_rps", c.indi.filter.natural_frequency);
        c.indi.filter.damping = number(f, "damping", c.indi.filter.damping);
        if (!(c.indi.filter.natural_frequency > 0.0 && c.indi.filter.damping > 0.0)) {
          throw ConfigError("indi.filter: frequency and damping must be positive");
        }
      }
      c.indi.condition_limit = number(i, "condition_limit", c.indi.condition_limit);
      if (!(c.indi.condition_limit > 1.0)) {
        throw ConfigError("indi.condition_limit: must exceed 1");
      }
      const auto fb = i.value("delta_feedback", std::string("filtered_achieved"));
      if (fb == "filtered_achieved") {
        c.indi.delta_feedback = control::DeltaFeedback::FilteredAchieved;
      } else if (fb == "clamped_command") {
        c.indi.delta_feedback = control::DeltaFeedback::ClampedCommand;
      } else {
        throw ConfigError("indi.delta_feedback: expected filtered_achieved or clamped_command");
      }
    }
    if (j.contains("protection")) {
      const auto& p = j.at("protection");
      auto& g = c.protection;
      g.k_alpha = number(p, "k_alpha", g.k_alpha);
      g.k_qdamp = number(p, "k_qdamp", g.k_qdamp);
      g.k_phi = number(p, "k_phi", g.k_phi);
      g.k_pdamp = number(p, "k_pdamp", g.k_pdamp);
      g.k_rdamp = number(p, "k_rdamp", g.k_rdamp);
      g.alpha_fade = number(p, "alpha_fade", g.alpha_fade);
      g.phi_fade = number(p, "phi_fade", g.phi_fade);
      g.qbar_floor = number(p, "qbar_floor_psf", g.qbar_floor);
      if (auto msg = g.check(); !msg.empty()) {
        throw ConfigError("protection: " + msg);
      }
    }
    if (j.contains("inceptor")) {
      c.inceptor = parse_inceptor(j.at("inceptor"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("aircraft config: ") + e.what());
  }
  return c;
}

AircraftConfig load_aircraft_config(const std::filesystem::path& path) {
  try {
    return parse_aircraft_config(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string Scenario::check() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) return "dt must be positive";
  if (!(duration > 0.0) || !std::isfinite(duration)) return "duration must be positive";
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (!(profile[i].t > profile[i - 1].t)) {
      return "profile time stamps must be strictly increasing (entry " + std::to_string(i) + ")";
    }
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& s = profile[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.pitch) || !std::isfinite(s.roll) ||
        !std::isfinite(s.yaw)) {
      return "profile entry " + std::to_string(i) + " is not finite";
    }
    if (s.throttle && !(*s.throttle >= 0.0 && *s.throttle <= 1.0)) {
      return "profile entry " + std::to_string(i) + ": throttle must lie in [0, 1]";
    }
    if (input == InputKind::Grip && std::abs(s.yaw) > 1.0) {
      return "profile entry " + std::to_string(i) + ": pedal must lie in [-1, 1]";
    }
  }
  return {};
}

std::size_t Scenario::steps() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base) {
  Scenario s;
  try {
    const json j = json::parse(text);
    check_header(j, kScenarioFormat);
    s.name = j.value("name", std::string{});
    s.aircraft = base / j.at("aircraft").get<std::string>();
    s.aero = base / j.at("aero").get<std::string>();
    s.envelope = base / j.at("envelope").get<std::string>();
    if (j.contains("initial")) {
      const auto& i = j.at("initial");
      s.initial.altitude = number(i, "altitude_ft", s.initial.altitude);
      s.initial.airspeed = number(i, "airspeed_fps", s.initial.airspeed);
      s.initial.gamma = number(i, "gamma_deg", s.initial.gamma);
      s.initial.bank = number(i, "bank_deg", s.initial.bank);
    }
    s.dt = number(j, "dt_s", s.dt);
    s.duration = number(j, "duration_s", s.duration);
    const auto protection = j.value("protection", std::string("on"));
    if (protection != "on" && protection != "off") {
      throw ConfigError("protection: expected \"on\" or \"off\"");
    }
    s.protection = protection == "on";
    const auto source = j.value("source", std::string("scripted"));
    if (source == "scripted") {
      s.source = InputSource::Scripted;
    } else if (source == "live") {
      s.source = InputSource::Live;
    } else {
      throw ConfigError("source: expected \"scripted\" or \"live\"");
    }
    const auto input = j.value("input", std::string("grip"));
    if (input == "grip") {
      s.input = InputKind::Grip;
    } else if (input == "rates") {
      s.input = InputKind::Rates;
    } else {
      throw ConfigError("input: expected \"grip\" or \"rates\"");
    }
    const bool grip = s.input == InputKind::Grip;
    if (j.contains("profile")) {
      for (const auto& p : j.at("profile")) {
        ProfileSample k;
        k.t = p.at("t").get<double>();
        k.pitch = number(p, grip ? "pitch_lbf" : "q_rps", 0.0);
        k.roll = number(p, grip ? "roll_lbf" : "p_rps", 0.0);
        k.yaw = number(p, grip ? "pedal" : "r_rps", 0.0);
        if (p.contains("throttle")) {
          k.throttle = p.at("throttle").get<double>();
        }
        s.profile.push_back(k);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (auto msg = s.check(); !msg.empty()) {
    throw ConfigError("scenario: " + msg);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  try {
    Scenario s = parse_scenario(read_text_file(path), path.parent_path());
    s.path = path;
    return s;
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ProfileSample sample_profile(const std::vector<ProfileSample>& profile, double t) {
  if (profile.empty()) {
    return {};
  }
  auto it = std::upper_bound(profile.begin(), profile.end(), t,
                             [](double x, const ProfileSample& s) { return x < s.t; });
  if (it == profile.begin()) {
    return profile.front();
  }
  return *(it - 1);
}

std::string validate_config_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::string format;
  try {
    format = json::parse(text).value("format", std::string{});
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (format == kAircraftFormat) {
    const AircraftConfig c = load_aircraft_config(path);
    return "aircraft config '" + c.name + "'";
  }
  if (format == kScenarioFormat) {
    const Scenario s = load_scenario(path);
    load_aircraft_config(s.aircraft);
    aero::load_aero_tables(s.aero);
    protection::load_envelope_database(s.envelope);
    return "scenario '" + s.name + "' and its referenced configs";
  }
  if (format == "fepsim-aero") {
    const aero::AeroTables t = aero::load_aero_tables(path);
    return "aero tables '" + t.name + "'";
  }
  if (format == "fepsim-envelope") {
    protection::load_envelope_database(path);
    return "envelope database";
  }
  throw ConfigError(path.string() + ": unrecognised format '" + format + "'");
}

}  // namespace fepsim::sim
