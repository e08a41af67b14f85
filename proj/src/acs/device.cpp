#include "fepsim/acs/device.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fepsim::acs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

AcsMessage limited(LimitStatus status, std::uint8_t id, std::uint8_t field, double value,
                   AxisSelect axis) {
  return {axis, LimitedCharacteristic{status, id, field, static_cast<float>(value)}};
}

bool feel_command(std::uint8_t id) { return id >= 5 && id <= 10; }

}  // namespace

std::string Endpoint::to_string() const {
  std::ostringstream os;
  os << int(address[0]) << '.' << int(address[1]) << '.' << int(address[2]) << '.'
     << int(address[3]) << ':' << port;
  return os.str();
}

Transition mode_transition(Mode from, ModeRequest request, bool zeroed) {
  switch (request) {
    case ModeRequest::None:
      return Transition::Unchanged;
    case ModeRequest::Disable:
      return from == Mode::Disabled ? Transition::Unchanged : Transition::Accepted;
    case ModeRequest::Enable:
      if (from == Mode::Enabled) return Transition::Unchanged;
      if (from == Mode::Disabled && !zeroed) return Transition::Rejected;
      return Transition::Accepted;
    case ModeRequest::Jam:
      if (from == Mode::Jammed) return Transition::Unchanged;
      return from == Mode::Enabled ? Transition::Accepted : Transition::Rejected;
  }
  return Transition::Rejected;
}

AcsDevice::AcsDevice(AcsConfig config) : config_(std::move(config)) {
  for (std::size_t i = 0; i < kStickAxes; ++i) {
    const AxisConfig& ac = config_.axes[i];
    Axis& a = axes_[i];
    a.base = ac.ffc;
    a.target = ac.ffc;
    a.state.inertia = std::clamp(ac.inertia, kInertiaMin, kInertiaMax);
    a.state.zeta = std::clamp(ac.zeta, kZetaMin, kZetaMax);
    a.state.trim = std::clamp(ac.trim, -kPositionLimit, kPositionLimit);
    a.state.theta = a.state.trim;
    a.state.friction = ac.friction;
  }
  endpoint_ = config_.endpoint;
}

std::vector<std::size_t> AcsDevice::selected(AxisSelect select) const {
  switch (select) {
    case AxisSelect::Pitch:
      return {kPitch};
    case AxisSelect::Roll:
      return {kRoll};
    case AxisSelect::Both:
      return {kPitch, kRoll};
  }
  return {};
}

void AcsDevice::install(std::size_t index, FfcCurve curve) {
  Axis& axis = axes_[index];
  if (curve == axis.target && !axis.fade_from) {
    return;
  }
  if (fade_time_ > 0.0) {
    axis.fade_from = effective_curve(static_cast<StickAxis>(index));
    axis.fade_elapsed = 0.0;
    axis.fade_duration = fade_time_;
  } else {
    axis.fade_from.reset();
  }
  axis.target = std::move(curve);
}

std::vector<AcsMessage> AcsDevice::apply(const AcsMessage& message) {
  const std::uint8_t id = message.id();
  const AxisSelect sel = message.axis;
  std::vector<AcsMessage> replies;
  const auto axes = selected(sel);
  if (axes.empty()) {
    replies.push_back(limited(LimitStatus::Malformed, id, 0, 0.0, AxisSelect::Both));
    return replies;
  }

  if (feel_command(id)) {
    for (std::size_t i : axes) {
      if (axes_[i].state.mode == Mode::Disabled) {
        replies.push_back(limited(LimitStatus::Rejected, id, 0, 0.0, sel));
        return replies;
      }
    }
  }

  // reject non-finite content before touching anything
  bool finite = true;
  std::visit(overloaded{
                 [&](const CharacteristicControl& c) { finite = std::isfinite(c.fade_time); },
                 [&](const TrimControl& c) { finite = std::isfinite(c.trim); },
                 [&](const ShakerControl& c) {
                   finite = std::isfinite(c.amplitude) && std::isfinite(c.frequency);
                 },
                 [&](const DampingControl& c) { finite = std::isfinite(c.zeta); },
                 [&](const CueingForceControl& c) {
                   finite = std::isfinite(c.softstop) && std::isfinite(c.multiplier);
                 },
                 [&](const InertiaControl& c) { finite = std::isfinite(c.inertia); },
                 [](const auto&) {},
             },
             message.payload);
  if (!finite) {
    replies.push_back(limited(LimitStatus::Malformed, id, 0, 0.0, sel));
    return replies;
  }

  // clamps a requested value, emitting ID22 when it had to
  auto clamp_field = [&](double value, double lo, double hi, std::uint8_t field) {
    const double c = std::clamp(value, lo, hi);
    if (c != value) {
      replies.push_back(limited(LimitStatus::Clamped, id, field, c, sel));
    }
    return c;
  };

  std::visit(
      overloaded{
          [&](const Control& c) {
            // all selected axes must accept the mode change
            std::vector<Transition> t;
            for (std::size_t i : axes) {
              t.push_back(mode_transition(axes_[i].state.mode, c.mode_request, zeroed_));
              if (t.back() == Transition::Rejected) {
                replies.push_back(limited(LimitStatus::Rejected, id, 0,
                                          static_cast<double>(axes_[i].state.mode), sel));
                return;
              }
            }
            for (std::size_t k = 0; k < axes.size(); ++k) {
              StickAxisState& s = axes_[axes[k]].state;
              if (t[k] == Transition::Accepted) {
                s.mode = c.mode_request == ModeRequest::Disable
                             ? Mode::Disabled
                             : (c.mode_request == ModeRequest::Jam ? Mode::Jammed : Mode::Enabled);
                if (s.mode == Mode::Jammed) s.theta_dot = 0.0;
              }
              s.trim_enabled = c.trim_enable;
              s.shaker_enabled = c.shaker_enable;
              s.damping_enabled = c.damping_enable;
            }
          },
          [&](const CharacteristicControl& c) {
            fade_time_ = clamp_field(c.fade_time, 0.0, limits_.fade_time_max, 0);
          },
          [&](const TrimControl& c) {
            const double v = clamp_field(c.trim, -kPositionLimit, kPositionLimit, 0);
            for (std::size_t i : axes) axes_[i].state.trim = v;
          },
          [&](const ShakerControl& c) {
            const double a = clamp_field(c.amplitude, 0.0, limits_.shaker_amplitude_max, 0);
            const double f = clamp_field(c.frequency, 0.0, limits_.shaker_frequency_max, 1);
            for (std::size_t i : axes) axes_[i].state.shaker = {a, f};
          },
          [&](const DampingControl& c) {
            const double v = clamp_field(c.zeta, kZetaMin, kZetaMax, 0);
            for (std::size_t i : axes) axes_[i].state.zeta = v;
          },
          [&](const CueingForceControl& c) {
            if (c.multiplier <= 1.0f) {
              for (std::size_t i : axes) install(i, axes_[i].base);
              return;
            }
            const double pos = clamp_field(c.softstop, -limits_.softstop_max,
                                           limits_.softstop_max, 0);
            const double mult = clamp_field(c.multiplier, 1.0, limits_.multiplier_max, 1);
            for (std::size_t i : axes) {
              install(i, build_softstop_ffc(axes_[i].base, pos, mult).curve);
            }
          },
          [&](const InertiaControl& c) {
            const double v = clamp_field(c.inertia, kInertiaMin, kInertiaMax, 0);
            for (std::size_t i : axes) axes_[i].state.inertia = v;
          },
          [&](const IpChange& ip) {
            Endpoint e;
            std::copy(std::begin(ip.octets), std::end(ip.octets), e.address.begin());
            e.port = ip.port;
            pending_endpoint_ = e;
          },
          [&](const auto&) {
            // status, limit echoes and reserved ids are device outputs
            replies.push_back(limited(LimitStatus::Rejected, id, 0, 0.0, sel));
          },
      },
      message.payload);
  return replies;
}

std::vector<AcsMessage> AcsDevice::receive(std::span<const std::uint8_t> datagram) {
  const DecodeResult r = decode(datagram);
  if (const auto* m = std::get_if<AcsMessage>(&r)) {
    return apply(*m);
  }
  const std::uint8_t id = datagram.empty() ? 0 : datagram[0];
  return {limited(LimitStatus::Malformed, id, 0,
                  static_cast<double>(std::get<DecodeError>(r)), AxisSelect::Both)};
}

void AcsDevice::step(const std::array<double, kStickAxes>& grip_force, double dt) {
  for (std::size_t i = 0; i < kStickAxes; ++i) {
    Axis& a = axes_[i];
    a.grip = grip_force[i];
    const FfcCurve curve = effective_curve(static_cast<StickAxis>(i));
    a.state = stick_dynamics_step(a.state, grip_force[i], curve, dt);
    if (a.fade_from) {
      a.fade_elapsed += dt;
      if (a.fade_elapsed >= a.fade_duration) {
        a.fade_from.reset();
      }
    }
  }
}

FfcCurve AcsDevice::effective_curve(StickAxis a) const {
  const Axis& axis = axes_[a];
  if (!axis.fade_from) {
    return axis.target;
  }
  return blend(*axis.fade_from, axis.target, axis.fade_elapsed / axis.fade_duration);
}

double AcsDevice::characteristic_force(StickAxis a) const {
  return acs::characteristic_force(axes_[a].state, effective_curve(a));
}

RotaryStatus AcsDevice::status(StickAxis a) const {
  const StickAxisState& s = axes_[a].state;
  RotaryStatus out;
  out.theta = static_cast<float>(s.theta);
  out.theta_dot = static_cast<float>(s.theta_dot);
  out.force = static_cast<float>(axes_[a].grip);
  out.mode = static_cast<std::uint8_t>(s.mode);
  out.switches = switches_.mask();
  return out;
}

bool AcsDevice::rebind() {
  if (!pending_endpoint_) {
    return false;
  }
  endpoint_ = *pending_endpoint_;
  pending_endpoint_.reset();
  return true;
}

}  // namespace fepsim::acs
