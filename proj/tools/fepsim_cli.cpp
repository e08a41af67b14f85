// fepsim command line: scripted runs, live sessions, trim, fit, validation.

#include "fepsim/acs/sysid.hpp"
#include "fepsim/acs/transport.hpp"
#include "fepsim/sim/live.hpp"
#include "fepsim/sim/release.hpp"
#include "fepsim/sim/telemetry.hpp"

#include "CLI11.hpp"

#include <boost/asio/io_context.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace fepsim;

namespace {

enum Exit : int {
  kOk = 0,
  kRuntime = 1,
  kUsage = 2,
  kConfig = 3,
  kTrim = 4,
  kSimulation = 5,
  kFit = 6,
  kIo = 7,
};

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

sim::LoadedScenario load(const fs::path& path, const std::string& protection) {
  auto loaded = sim::load_all(path);
  if (protection == "on") loaded = sim::with_protection(std::move(loaded), true);
  if (protection == "off") loaded = sim::with_protection(std::move(loaded), false);
  return loaded;
}

std::map<std::string, fs::path> config_files(const sim::Scenario& s) {
  return {{"scenario", s.path}, {"aircraft", s.aircraft}, {"aero", s.aero},
          {"envelope", s.envelope}};
}

fs::path log_path(const fs::path& out, const fs::path& scenario, const std::string& suffix) {
  fs::create_directories(out);
  return out / (scenario.stem().string() + suffix + ".csv");
}

void print_summary(const sim::TrajectoryLog& log, bool protection, const fs::path& csv) {
  std::printf("%s: steps=%zu protection=%s max_alpha_deg=%.3f max_nz=%.3f max_abs_phi_deg=%.3f "
              "log=%s\n",
              log.scenario.c_str(), log.records.size(), protection ? "on" : "off",
              log.records.empty() ? 0.0 : log.max_alpha_deg(),
              log.records.empty() ? 0.0 : log.max_nz(),
              log.records.empty() ? 0.0 : log.max_abs_phi_deg(), csv.string().c_str());
}

int finish(const sim::TrajectoryLog& log) {
  if (log.error.empty()) return kOk;
  std::fprintf(stderr, "simulation error: %s\n", log.error.c_str());
  return kSimulation;
}

struct RunArgs {
  fs::path scenario;
  std::string protection;
  fs::path out = "out";
  fs::path replay;
};

int cmd_run(const RunArgs& a) {
  auto loaded = load(a.scenario, a.protection);
  const bool protection = loaded.scenario.protection;
  auto files = config_files(loaded.scenario);
  sim::TrajectoryLog log;
  std::string suffix;
  if (!a.replay.empty()) {
    files["capture"] = a.replay;
    log = sim::run_commands(std::move(loaded), sim::read_capture(a.replay));
    suffix = "_replay";
  } else {
    log = sim::run_scenario(std::move(loaded));
  }
  const auto csv = log_path(a.out, a.scenario, suffix);
  sim::export_log(log, csv, files);
  print_summary(log, protection, csv);
  return finish(log);
}

struct ServeArgs {
  fs::path scenario;
  std::string protection;
  fs::path out = "out";
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;
  fs::path static_root;
  double rate_hz = 30.0;
  double realtime = 1.0;
  fs::path capture;
  std::string acs_mirror;
};

int cmd_serve(const ServeArgs& a) {
  auto loaded = load(a.scenario, a.protection);
  const bool protection = loaded.scenario.protection;
  auto files = config_files(loaded.scenario);
  sim::LiveSession session(std::move(loaded), {a.rate_hz, a.realtime, 256});

  boost::asio::io_context mirror_io;
  std::unique_ptr<acs::UdpTransport> mirror;
  if (!a.acs_mirror.empty()) {
    mirror = std::make_unique<acs::UdpTransport>(
        mirror_io, acs::parse_endpoint("127.0.0.1:0"), acs::parse_endpoint(a.acs_mirror));
    session.simulator().set_link_tap(
        [&](sim::LinkDirection, std::span<const std::uint8_t> bytes) { mirror->send(bytes); });
  }

  sim::ServerOptions options;
  options.address = a.address;
  options.port = a.port;
  options.static_root = a.static_root;
  sim::TelemetryServer server(options,
                              [&](const std::string& frame) { return session.submit(frame); });
  session.set_sink([&](std::string frame) { server.broadcast(std::move(frame)); });
  std::printf("serving %s on http://%s:%u/ (websocket on the same port)\n",
              a.scenario.string().c_str(), a.address.c_str(), server.port());
  std::fflush(stdout);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  auto result = session.run(g_stop);
  server.stop();

  const auto csv = log_path(a.out, a.scenario, "_live");
  const fs::path capture =
      a.capture.empty() ? a.out / (a.scenario.stem().string() + "_capture.jsonl") : a.capture;
  sim::write_capture(result.capture, capture);
  files["capture"] = capture;
  sim::export_log(result.log, csv, files);
  print_summary(result.log, protection, csv);
  std::printf("capture=%s commands=%zu frames=%llu dropped=%llu\n", capture.string().c_str(),
              result.capture.size(), static_cast<unsigned long long>(result.frames),
              static_cast<unsigned long long>(server.dropped_frames()));
  return finish(result.log);
}

struct FrameArgs {
  fs::path scenario;
  std::string protection;
  double time = 0.0;
};

int cmd_frame(const FrameArgs& a) {
  auto loaded = load(a.scenario, a.protection);
  const auto commands = sim::profile_commands(loaded.scenario);
  const auto last = static_cast<std::int64_t>(std::llround(a.time / loaded.scenario.dt));
  sim::Simulator s(std::move(loaded));
  std::size_t next = 0;
  do {
    while (next < commands.size() && commands[next].step <= s.step_index()) {
      s.apply(commands[next++].command);
    }
    s.step();
  } while (s.step_index() <= last);
  std::printf("%s\n", sim::state_frame(s).c_str());
  return kOk;
}

struct TrimArgs {
  fs::path scenario;
  std::optional<double> altitude;
  std::optional<double> airspeed;
};

int cmd_trim(const TrimArgs& a) {
  const auto loaded = sim::load_all(a.scenario);
  const sim::AircraftModel model(loaded.aircraft, loaded.aero);
  const double altitude = a.altitude.value_or(loaded.scenario.initial.altitude);
  const double airspeed = a.airspeed.value_or(loaded.scenario.initial.airspeed);
  const auto trim = sim::trim_level_flight(model, altitude, airspeed);
  std::printf("altitude_ft=%.1f airspeed_fps=%.2f alpha_deg=%.6f tail_deg=%.6f thrust_lbf=%.3f "
              "residual=%.3e iterations=%d\n",
              altitude, airspeed, trim.alpha, trim.tail, trim.thrust, trim.residual,
              trim.iterations);
  return kOk;
}

int cmd_fit(const fs::path& path) {
  const auto capture = sim::read_release_capture(path);
  const auto fit = acs::fit_second_order(capture.t, capture.theta_deg);
  std::printf("zeta=%.6f omega_n_rps=%.6f amplitude_deg=%.6f offset_deg=%.6f sse=%.6e\n",
              fit.zeta, fit.omega_n, fit.amplitude, fit.offset, fit.sse);
  return kOk;
}

int cmd_validate(const fs::path& path) {
  std::printf("%s: ok (%s)\n", path.string().c_str(),
              sim::validate_config_file(path).c_str());
  return kOk;
}

int cmd_import_aero(const fs::path& manifest, const fs::path& out) {
  const auto tables = aero::import_aero_manifest(manifest);
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw sim::IoError("cannot write '" + out.string() + "'");
  file << aero::serialize_aero_tables(tables);
  if (!file) throw sim::IoError("write failed for '" + out.string() + "'");
  std::printf("wrote %s\n", out.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fly-by-wire envelope protection simulator"};
  app.require_subcommand(1);
  const auto protection_check = CLI::IsMember({"on", "off"});

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Scripted run of a scenario");
  run_cmd->add_option("scenario", run.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--protection", run.protection, "Override protection")->check(protection_check);
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--replay", run.replay, "Replay a live-session capture")
      ->check(CLI::ExistingFile);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Live session with telemetry and static files");
  serve_cmd->add_option("scenario", serve.scenario, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--protection", serve.protection, "Override protection")
      ->check(protection_check);
  serve_cmd->add_option("--out", serve.out, "Output directory")->capture_default_str();
  serve_cmd->add_option("--address", serve.address, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Listen port, 0 for any")->capture_default_str();
  serve_cmd->add_option("--static", serve.static_root, "Cockpit static files")
      ->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--rate", serve.rate_hz, "State frame rate, Hz")->capture_default_str()
      ->check(CLI::PositiveNumber);
  serve_cmd->add_option("--realtime", serve.realtime, "Speed relative to wall clock, 0 unpaced")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  serve_cmd->add_option("--capture", serve.capture, "Command capture output");
  serve_cmd->add_option("--acs-mirror", serve.acs_mirror,
                        "Copy stick link datagrams to host:port over UDP");

  FrameArgs frame;
  auto* frame_cmd = app.add_subcommand("frame", "Print the state frame at a time of a scripted run");
  frame_cmd->add_option("scenario", frame.scenario, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  frame_cmd->add_option("--protection", frame.protection, "Override protection")
      ->check(protection_check);
  frame_cmd->add_option("--time", frame.time, "Simulation time, s")->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  TrimArgs trim;
  auto* trim_cmd = app.add_subcommand("trim", "Level-flight trim at a scenario's condition");
  trim_cmd->add_option("scenario", trim.scenario, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  trim_cmd->add_option("--altitude", trim.altitude, "Altitude, ft");
  trim_cmd->add_option("--airspeed", trim.airspeed, "Airspeed, ft/s");

  fs::path fit_path;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a second-order model to a release capture");
  fit_cmd->add_option("capture", fit_path, "Release capture CSV")
      ->required()
      ->check(CLI::ExistingFile);

  fs::path validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a config file");
  validate_cmd->add_option("config", validate_path, "Config file")
      ->required()
      ->check(CLI::ExistingFile);

  fs::path manifest;
  fs::path aero_out;
  auto* import_cmd = app.add_subcommand("import-aero", "Convert text-grid aero data to JSON");
  import_cmd->add_option("manifest", manifest, "Import manifest")
      ->required()
      ->check(CLI::ExistingFile);
  import_cmd->add_option("--out", aero_out, "Output tables file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    if (e.get_exit_code() != 0) {
      std::cerr << app.help();
      return kUsage;
    }
    return kOk;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*serve_cmd) return cmd_serve(serve);
    if (*frame_cmd) return cmd_frame(frame);
    if (*trim_cmd) return cmd_trim(trim);
    if (*fit_cmd) return cmd_fit(fit_path);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*import_cmd) return cmd_import_aero(manifest, aero_out);
  } catch (const sim::TrimError& e) {
    std::fprintf(stderr, "trim error: %s\n", e.what());
    return kTrim;
  } catch (const acs::FitError& e) {
    std::fprintf(stderr, "fit error: %s\n", e.what());
    return kFit;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const sim::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const dynamics::SingularityError& e) {
    std::fprintf(stderr, "simulation error: %s\n", e.what());
    return kSimulation;
  } catch (const RangeError& e) {
    std::fprintf(stderr, "simulation error: %s\n", e.what());
    return kSimulation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kUsage;
}
