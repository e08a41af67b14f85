#include "fepsim/sim/simulator.hpp"

#include <cmath>
#include <sstream>

namespace fepsim::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kFullStroke = 24.0;  // deg

double flag(bool b) { return b ? 1.0 : 0.0; }

const char* layer_name(int i) {
  switch (i) {
    case 0: return "rate limit";
    case 1: return "alpha/nz protection";
    default: return "bank protection";
  }
}

}  // namespace

LoadedScenario load_all(Scenario scenario) {
  LoadedScenario out;
  out.aircraft = load_aircraft_config(scenario.aircraft);
  out.aero = aero::load_aero_tables(scenario.aero);
  out.envelope = protection::load_envelope_database(scenario.envelope);
  out.scenario = std::move(scenario);
  return out;
}

LoadedScenario load_all(const std::filesystem::path& scenario_path) {
  return load_all(load_scenario(scenario_path));
}

LoadedScenario with_protection(LoadedScenario loaded, bool on) {
  loaded.scenario.protection = on;
  return loaded;
}

Simulator::Simulator(LoadedScenario loaded)
    : loaded_(std::move(loaded)),
      model_(loaded_.aircraft, loaded_.aero),
      dt_(loaded_.scenario.dt),
      trim_(trim_level_flight(model_, loaded_.scenario.initial.altitude,
                              loaded_.scenario.initial.airspeed)),
      protection_on_(loaded_.scenario.protection) {
  initialize();
}

Simulator::~Simulator() = default;

void Simulator::initialize() {
  state_ = initial_state(trim_, loaded_.scenario.initial);
  indi_ = control::IndiController(loaded_.aircraft.indi, model_.integrator.actuators, dt_,
                                  state_.surfaces);
  device_ = acs::AcsDevice(loaded_.aircraft.inceptor.device);
  link_ = std::make_unique<acs::LoopbackLink>();
  host_policy_ = acs::TransmitPolicy();
  device_policy_ = acs::TransmitPolicy();
  status_schedule_ =
      std::make_unique<acs::StatusSchedule>(loaded_.aircraft.inceptor.device.status_rate_hz);
  input_ = GripCommand{};
  stick_deg_ = {};
  softstop_ = {};
  last_protection_ = {};
  previous_layers_ = {};

  device_.complete_ibit();
  const std::int64_t now_us = std::llround(time() * 1e6);
  const auto& cue = loaded_.aircraft.inceptor.softstop;
  for (const acs::AcsMessage& m :
       {acs::AcsMessage{acs::AxisSelect::Both, acs::Control{acs::ModeRequest::Enable}},
        acs::AcsMessage{acs::AxisSelect::Both,
                        acs::CharacteristicControl{static_cast<float>(cue.fade_time)}}}) {
    if (host_policy_.offer(m, now_us)) send_to_device(m);
  }
}

void Simulator::event(std::string text) { events_.push_back({step_, std::move(text)}); }

std::vector<LogEvent> Simulator::take_new_events() {
  std::vector<LogEvent> out(events_.begin() + static_cast<std::ptrdiff_t>(events_taken_),
                            events_.end());
  events_taken_ = events_.size();
  return out;
}

void Simulator::send_to_device(const acs::AcsMessage& message) {
  const auto bytes = acs::encode(message);
  if (tap_) tap_(LinkDirection::ToDevice, bytes);
  if (!link_->host().send(bytes)) event("stick link full, dropped " + acs::describe(message));
}

void Simulator::send_to_host(const acs::AcsMessage& message) {
  const auto bytes = acs::encode(message);
  if (tap_) tap_(LinkDirection::ToHost, bytes);
  if (!link_->device().send(bytes)) event("stick link full, dropped " + acs::describe(message));
}

void Simulator::apply(const Command& command) {
  capture_.push_back({step_, command});
  std::visit(overloaded{
                 [&](const GripCommand& g) { input_ = g; },
                 [&](const ProtectionToggle& p) {
                   if (p.on != protection_on_) {
                     protection_on_ = p.on;
                     event(p.on ? "protection on" : "protection off");
                   }
                 },
                 [&](const ModeCommand& m) {
                   const acs::AcsMessage msg{m.axis, acs::Control{m.request}};
                   event("stick mode request: " + acs::describe(msg));
                   if (host_policy_.offer(msg, std::llround(time() * 1e6))) send_to_device(msg);
                 },
                 [&](const ResetCommand&) {
                   initialize();
                   event("reset");
                 },
             },
             command);
}

void Simulator::device_side(std::int64_t now_us) {
  const std::array<acs::Mode, acs::kStickAxes> before = {device_.axis(acs::kPitch).mode,
                                                         device_.axis(acs::kRoll).mode};
  while (auto d = link_->device().receive()) {
    for (const auto& reply : device_.receive(*d)) send_to_host(reply);
  }
  for (std::size_t i = 0; i < acs::kStickAxes; ++i) {
    const auto mode = device_.axis(static_cast<acs::StickAxis>(i)).mode;
    if (mode != before[i]) {
      event(std::string(i == 0 ? "pitch" : "roll") + " stick " + acs::to_string(mode));
    }
  }

  const bool rates = loaded_.scenario.input == InputKind::Rates;
  device_.step({rates ? 0.0 : input_.pitch, rates ? 0.0 : input_.roll}, dt_);

  if (status_schedule_->due(now_us)) {
    for (auto axis : {acs::kPitch, acs::kRoll}) {
      const acs::AcsMessage m{axis == acs::kPitch ? acs::AxisSelect::Pitch : acs::AxisSelect::Roll,
                              device_.status(axis)};
      if (device_policy_.offer(m, now_us)) send_to_host(m);
    }
  }
  for (const auto& m : device_policy_.poll(now_us)) send_to_host(m);
}

void Simulator::host_side() {
  while (auto d = link_->host().receive()) {
    const auto result = acs::decode(*d);
    if (const auto* err = std::get_if<acs::DecodeError>(&result)) {
      event(std::string("undecodable stick message: ") + acs::to_string(*err));
      continue;
    }
    const auto& msg = std::get<acs::AcsMessage>(result);
    if (const auto* s = std::get_if<acs::RotaryStatus>(&msg.payload)) {
      if (msg.axis == acs::AxisSelect::Pitch) stick_deg_[acs::kPitch] = s->theta;
      if (msg.axis == acs::AxisSelect::Roll) stick_deg_[acs::kRoll] = s->theta;
    } else {
      event("stick reply: " + acs::describe(msg));
    }
  }
}

void Simulator::cue_softstops(const protection::ProtectionResult& result, double q_pilot,
                              std::int64_t now_us) {
  const auto& cue = loaded_.aircraft.inceptor.softstop;
  if (!cue.enabled) return;
  std::array<double, acs::kStickAxes> want{};
  if (result.state.long_active) want[acs::kPitch] = q_pilot >= 0.0 ? cue.position : -cue.position;
  if (result.state.lat_active) {
    want[acs::kRoll] = state_.euler[0] >= 0.0 ? cue.position : -cue.position;
  }
  for (auto axis : {acs::kPitch, acs::kRoll}) {
    softstop_[axis] = want[axis];
    const acs::AcsMessage m{
        axis == acs::kPitch ? acs::AxisSelect::Pitch : acs::AxisSelect::Roll,
        want[axis] == 0.0
            ? acs::CueingForceControl{0.0f, 1.0f}
            : acs::CueingForceControl{static_cast<float>(want[axis]),
                                      static_cast<float>(cue.multiplier)}};
    if (host_policy_.offer(m, now_us)) send_to_device(m);
  }
  for (const auto& m : host_policy_.poll(now_us)) send_to_device(m);
}

const LogRecord& Simulator::step() {
  const std::int64_t now_us = std::llround(time() * 1e6);
  device_side(now_us);
  host_side();

  const auto& gear = loaded_.aircraft.inceptor.gearing;
  Vector3d pilot;
  if (loaded_.scenario.input == InputKind::Rates) {
    pilot = Vector3d(input_.roll, input_.pitch, input_.pedal);
  } else {
    const double sp = stick_deg_[acs::kPitch] / kFullStroke;
    const double sr = stick_deg_[acs::kRoll] / kFullStroke;
    pilot = Vector3d(sr * gear.roll, sp * (sp >= 0.0 ? gear.pitch_up : gear.pitch_down),
                     input_.pedal * gear.yaw);
  }

  const AirData air = evaluate_air_data(state_, model_);
  protection::ProtectionResult prot;
  if (protection_on_) {
    const protection::FlightCondition fc{air.sample.alpha,
                                         state_.euler[0],
                                         state_.omega,
                                         air.sample.qbar,
                                         air.sample.mach,
                                         state_.altitude(),
                                         air.coefficients.cz_alpha,
                                         model_.mass.weight(),
                                         model_.geometry.wing_area};
    prot = protection::protect(pilot, fc, loaded_.envelope, loaded_.aircraft.protection);
  } else {
    prot.command = pilot;
    prot.limits = protection::schedule_limits(air.sample.mach, state_.altitude(),
                                              loaded_.envelope);
    prot.state.alpha_max_eff = prot.limits.alpha_max * kDegToRad;
    prot.state.alpha_min_eff = prot.limits.alpha_min * kDegToRad;
  }
  const std::array<bool, 3> was = {previous_layers_.rate_active, previous_layers_.long_active,
                                   previous_layers_.lat_active};
  const std::array<bool, 3> now = {prot.state.rate_active, prot.state.long_active,
                                   prot.state.lat_active};
  for (int i = 0; i < 3; ++i) {
    if (was[static_cast<std::size_t>(i)] != now[static_cast<std::size_t>(i)]) {
      event(std::string(layer_name(i)) + (now[static_cast<std::size_t>(i)] ? " engaged" : " released"));
    }
  }
  previous_layers_ = prot.state;
  last_protection_ = prot;

  const aero::AeroQuery query{air.sample.alpha * kRadToDeg, air.sample.beta * kRadToDeg,
                              state_.surfaces};
  const Matrix3d g = control::input_matrix(model_.mass, air.sample.qbar, model_.geometry,
                                           aero::effectivity(query, model_.aero).phi);
  const auto indi = indi_.update(control::RateCommand{prot.command}, state_.omega,
                                 state_.surfaces, g);
  const double thrust_cmd =
      input_.throttle ? std::clamp(*input_.throttle, 0.0, 1.0) * model_.thrust_max : trim_.thrust;

  LogRecord& r = last_;
  r.step = step_;
  r.t = time();
  r.u = state_.velocity[0];
  r.v = state_.velocity[1];
  r.w = state_.velocity[2];
  r.p = state_.omega[0];
  r.q = state_.omega[1];
  r.r = state_.omega[2];
  r.phi = state_.euler[0];
  r.theta = state_.euler[1];
  r.psi = state_.euler[2];
  r.north = state_.position[0];
  r.east = state_.position[1];
  r.down = state_.position[2];
  r.tail = state_.surfaces[0];
  r.aileron = state_.surfaces[1];
  r.rudder = state_.surfaces[2];
  r.thrust = state_.thrust;
  r.alpha_deg = air.sample.alpha * kRadToDeg;
  r.beta_deg = air.sample.beta * kRadToDeg;
  r.nz = air.nz;
  r.qbar = air.sample.qbar;
  r.mach = air.sample.mach;
  r.pilot_p = pilot[0];
  r.pilot_q = pilot[1];
  r.pilot_r = pilot[2];
  r.cmd_p = prot.command[0];
  r.cmd_q = prot.command[1];
  r.cmd_r = prot.command[2];
  r.cmd_tail = indi.surface_commands[0];
  r.cmd_aileron = indi.surface_commands[1];
  r.cmd_rudder = indi.surface_commands[2];
  r.cmd_thrust = thrust_cmd;
  r.alpha_bar = prot.state.alpha_bar;
  r.phi_bar = prot.state.phi_bar;
  r.lambda_long = prot.state.lambda_long;
  r.lambda_lat = prot.state.lambda_lat;
  r.alpha_max_eff_deg = prot.state.alpha_max_eff * kRadToDeg;
  r.alpha_min_eff_deg = prot.state.alpha_min_eff * kRadToDeg;
  r.nz_max = prot.limits.nz_max;
  r.nz_min = prot.limits.nz_min;
  r.phi_max_deg = prot.limits.phi_max;
  r.protection_on = flag(protection_on_);
  r.rate_active = flag(prot.state.rate_active);
  r.long_active = flag(prot.state.long_active);
  r.lat_active = flag(prot.state.lat_active);
  r.indi_saturated = flag(indi.saturated);
  r.indi_pinv = flag(indi.pseudo_inverse);
  r.stick_pitch_deg = device_.axis(acs::kPitch).theta;
  r.stick_roll_deg = device_.axis(acs::kRoll).theta;
  r.stick_pitch_force = device_.characteristic_force(acs::kPitch);
  r.stick_roll_force = device_.characteristic_force(acs::kRoll);
  r.grip_pitch = device_.grip_force(acs::kPitch);
  r.grip_roll = device_.grip_force(acs::kRoll);
  r.pedal = input_.pedal;
  r.acs_mode_pitch = static_cast<double>(device_.axis(acs::kPitch).mode);
  r.acs_mode_roll = static_cast<double>(device_.axis(acs::kRoll).mode);
  r.softstop_pitch = softstop_[acs::kPitch];
  r.softstop_roll = softstop_[acs::kRoll];

  cue_softstops(prot, pilot[1], now_us);
  r.softstop_pitch = softstop_[acs::kPitch];
  r.softstop_roll = softstop_[acs::kRoll];

  state_ = dynamics::integrate_step<double>(
      state_, dynamics::ControlInputs<double>{indi.surface_commands, thrust_cmd}, dt_,
      model_.mass, model_.integrator,
      [this](const AircraftState& s) { return body_wrench(s, model_); });
  if (!state_.velocity.allFinite() || !state_.omega.allFinite() || !state_.euler.allFinite()) {
    throw RangeError("state became non-finite");
  }
  state_.euler[0] = std::remainder(state_.euler[0], 2.0 * kPi);
  state_.euler[2] = std::remainder(state_.euler[2], 2.0 * kPi);
  ++step_;
  return last_;
}

std::vector<StampedCommand> profile_commands(const Scenario& scenario) {
  std::vector<StampedCommand> out;
  for (const auto& k : scenario.profile) {
    const auto step =
        static_cast<std::int64_t>(std::ceil(k.t / scenario.dt - 1e-9));
    GripCommand g{k.pitch, k.roll, k.yaw, k.throttle};
    if (!out.empty() && out.back().step == std::max<std::int64_t>(step, 0)) {
      out.back().command = g;
    } else {
      out.push_back({std::max<std::int64_t>(step, 0), g});
    }
  }
  return out;
}

TrajectoryLog run_commands(LoadedScenario loaded, const std::vector<StampedCommand>& commands) {
  const auto steps = static_cast<std::int64_t>(loaded.scenario.steps());
  TrajectoryLog log;
  log.scenario = loaded.scenario.name;
  log.dt = loaded.scenario.dt;
  log.records.reserve(static_cast<std::size_t>(steps));
  Simulator sim(std::move(loaded));
  std::size_t next = 0;
  const auto resume_due = [&](std::int64_t k) {
    if (next >= commands.size() || commands[next].step > k) return false;
    const auto* reset = std::get_if<ResetCommand>(&commands[next].command);
    return reset != nullptr && reset->resume;
  };
  while (sim.step_index() < steps) {
    const std::int64_t k = sim.step_index();
    while (next < commands.size() && commands[next].step <= k && !resume_due(k)) {
      sim.apply(commands[next].command);
      ++next;
    }
    std::string failure;
    try {
      log.records.push_back(sim.step());
      if (resume_due(k)) {
        std::ostringstream os;
        os << "capture expects a halt at step " << k << " but the step succeeded";
        log.error = os.str();
        break;
      }
      continue;
    } catch (const dynamics::SingularityError& e) {
      failure = e.what();
    } catch (const RangeError& e) {
      failure = e.what();
    }
    std::ostringstream os;
    os << "t=" << sim.time() << " s: " << failure;
    sim.note("halted: " + os.str());
    if (!resume_due(k)) {
      log.error = os.str();
      break;
    }
    sim.apply(commands[next].command);
    ++next;
  }
  log.events = sim.events();
  return log;
}

TrajectoryLog run_scenario(LoadedScenario loaded) {
  const auto commands = profile_commands(loaded.scenario);
  return run_commands(std::move(loaded), commands);
}

}  // namespace fepsim::sim
