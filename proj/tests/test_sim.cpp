#include "fepsim/sim/live.hpp"
#include "fepsim/sim/release.hpp"
#include "fepsim/sim/simulator.hpp"
#include "fepsim/sim/telemetry.hpp"

#include "support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fepsim::sim {
namespace {

using test::TempDir;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Scenario JSON with absolute references to the shipped configs.
nlohmann::json scenario_json(double altitude, double airspeed, double gamma, double duration) {
  const auto d = test::data_dir();
  return {{"format", "fepsim-scenario"},
          {"version", 1},
          {"name", "test"},
          {"aircraft", (d / "aircraft/f16_standin.json").string()},
          {"aero", (d / "aero/standin_f16.json").string()},
          {"envelope", (d / "envelope/default.json").string()},
          {"initial", {{"altitude_ft", altitude}, {"airspeed_fps", airspeed}, {"gamma_deg", gamma}}},
          {"dt_s", 0.001},
          {"duration_s", duration},
          {"profile", nlohmann::json::array()}};
}

LoadedScenario loaded_from(const nlohmann::json& j) {
  return load_all(parse_scenario(j.dump()));
}

LoadedScenario short_demo(double duration) {
  auto l = load_all(test::scenario("longitudinal_demo.json"));
  l.scenario.duration = duration;
  return l;
}

// ---------------------------------------------------------------- config

TEST(Config, ShippedFilesValidate) {
  const auto d = test::data_dir();
  for (const auto& p : {d / "aircraft/f16_standin.json", d / "envelope/default.json",
                        d / "envelope/stores.json", d / "aero/standin_f16.json",
                        test::scenario("longitudinal_demo.json")}) {
    EXPECT_NO_THROW(validate_config_file(p)) << p;
  }
  for (const auto& e : std::filesystem::recursive_directory_iterator(d / "scenarios")) {
    if (e.path().extension() == ".json") {
      EXPECT_NO_THROW(load_all(e.path())) << e.path();
    }
  }
}

TEST(Config, ScenarioHeaderErrors) {
  auto j = scenario_json(15000, 500, 0, 1);
  j.erase("version");
  EXPECT_THROW(parse_scenario(j.dump()), ConfigError);
  j["version"] = 2;
  EXPECT_THROW(parse_scenario(j.dump()), ConfigError);
  j["version"] = 1;
  j["format"] = "fepsim-aircraft";
  EXPECT_THROW(parse_scenario(j.dump()), ConfigError);
  EXPECT_THROW(parse_scenario("{not json"), ConfigError);
}

TEST(Config, ScenarioCheckNamesProblem) {
  Scenario s;
  s.profile = {{0.0, 0, 0, 0, {}}, {1.0, 0, 0, 0, {}}, {1.0, 0, 0, 0, {}}};
  EXPECT_NE(s.check().find("entry 2"), std::string::npos);
  s.profile = {{0.0, 0, 0, 2.0, {}}};
  EXPECT_NE(s.check().find("pedal"), std::string::npos);
  s.profile.clear();
  s.dt = 0;
  EXPECT_NE(s.check().find("dt"), std::string::npos);
}

TEST(Config, NonMonotoneFfcFixtureNamesBreakpoint) {
  try {
    validate_config_file(test::data_dir() / "fixtures/aircraft_nonmonotone_ffc.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("breakpoint 3"), std::string::npos) << e.what();
  }
}

TEST(Config, ProfileZeroOrderHold) {
  const std::vector<ProfileSample> p{{0.0, 1, 0, 0, {}}, {0.5, 2, 0, 0, {}}, {2.0, 3, 0, 0, {}}};
  EXPECT_EQ(sample_profile(p, -1).pitch, 1);
  EXPECT_EQ(sample_profile(p, 0.49).pitch, 1);
  EXPECT_EQ(sample_profile(p, 0.5).pitch, 2);
  EXPECT_EQ(sample_profile(p, 10).pitch, 3);
}

TEST(Config, ProfileKnotsBecomeStampedCommands) {
  Scenario s;
  s.dt = 0.001;
  s.profile = {{0.0, 0, 0, 0, {}}, {0.4995, 27, 0, 0, {}}, {0.5, 20, 0, 0, {}}, {3.5, 0, 0, 0, {}}};
  const auto c = profile_commands(s);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].step, 0);
  EXPECT_EQ(c[1].step, 500);
  EXPECT_EQ(c[2].step, 3500);
}

// ---------------------------------------------------------------- trim

TEST(Trim, ConvergesWithSmallResidual) {
  const auto l = load_all(test::scenario("trim_hold.json"));
  const AircraftModel model(l.aircraft, l.aero);
  const auto t = trim_level_flight(model, 15000, 500);
  EXPECT_LT(t.residual, 1e-9);
  // level flight, body z: aerodynamic force balances the weight component
  EXPECT_NEAR(evaluate_air_data(t.state, model).nz, std::cos(t.alpha * kDegToRad), 1e-8);
}

TEST(Trim, AlphaFallsWithAirspeed) {
  const auto l = load_all(test::scenario("trim_hold.json"));
  const AircraftModel model(l.aircraft, l.aero);
  double previous = 90;
  for (double v = 350; v <= 600; v += 25) {
    const double alpha = trim_level_flight(model, 15000, v).alpha;
    EXPECT_LT(alpha, previous) << v;
    previous = alpha;
  }
}

TEST(Trim, OutsideEnvelopeThrows) {
  const auto l = load_all(test::scenario("trim_hold.json"));
  const AircraftModel model(l.aircraft, l.aero);
  EXPECT_THROW(trim_level_flight(model, 15000, 80), TrimError);
}

TEST(Trim, HoldsForOneSecond) {
  auto l = load_all(test::scenario("trim_hold.json"));
  l.scenario.duration = 1.0;
  const auto log = run_scenario(std::move(l));
  ASSERT_TRUE(log.error.empty());
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    const auto& a = log.records[i - 1];
    const auto& b = log.records[i];
    ASSERT_LT(std::abs(b.q), 1e-6) << i;
    ASSERT_LT(std::abs(b.w - a.w) / log.dt, 1e-6) << i;
  }
}

// ---------------------------------------------------------------- logs

TEST(Log, ScriptedRunsAreByteIdentical) {
  TempDir dir("det");
  const auto a = run_scenario(short_demo(2.0));
  const auto b = run_scenario(short_demo(2.0));
  write_csv(a, dir / "a.csv");
  write_csv(b, dir / "b.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(a.events, b.events);
}

TEST(Log, CsvRoundTripAndLineCount) {
  TempDir dir("csv");
  const auto log = run_scenario(short_demo(0.2));
  write_csv(log, dir / "log.csv");
  const auto back = read_csv(dir / "log.csv");
  ASSERT_EQ(back.size(), log.records.size());
  EXPECT_EQ(back, log.records);
  const std::string text = slurp(dir / "log.csv");
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            log.records.size() + 1);
  EXPECT_EQ(text.substr(0, text.find('\n')), csv_header());
}

TEST(Log, EmptyLogIsHeaderOnly) {
  TempDir dir("empty");
  TrajectoryLog log;
  write_csv(log, dir / "e.csv");
  EXPECT_EQ(slurp(dir / "e.csv"), csv_header() + "\n");
  EXPECT_TRUE(read_csv(dir / "e.csv").empty());
}

TEST(Log, MalformedCsvReportsLine) {
  TempDir dir("bad");
  spit(dir / "b.csv", csv_header() + "\n1,2,3\n");
  try {
    read_csv(dir / "b.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
  EXPECT_THROW(read_csv(dir / "missing.csv"), IoError);
}

TEST(Log, Sha256KnownDigest) {
  const std::string abc = "abc";
  EXPECT_EQ(sha256_hex({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()}),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Log, SidecarHashFollowsConfigBytes) {
  TempDir dir("sidecar");
  const auto log = run_scenario(short_demo(0.05));
  spit(dir / "cfg.json", "{\"a\": 1}");
  export_log(log, dir / "run.csv", {{"scenario", dir / "cfg.json"}});
  const auto first = nlohmann::json::parse(slurp(dir / "run.json"));
  spit(dir / "cfg.json", "{\"a\": 2}");
  export_log(log, dir / "run.csv", {{"scenario", dir / "cfg.json"}});
  const auto second = nlohmann::json::parse(slurp(dir / "run.json"));
  EXPECT_NE(first["config_hashes"]["scenario"]["sha256"], second["config_hashes"]["scenario"]["sha256"]);
  EXPECT_EQ(first["records"], log.records.size());
  EXPECT_EQ(first["columns"].size(), log_columns().size() + 1);
}

TEST(Log, PipelineDiffersOnlyWhenAFlagIsSet) {
  for (bool on : {true, false}) {
    const auto log = run_scenario(with_protection(short_demo(5.0), on));
    bool any = false;
    for (const auto& r : log.records) {
      const bool differs = r.cmd_p != r.pilot_p || r.cmd_q != r.pilot_q || r.cmd_r != r.pilot_r;
      const bool flagged = r.rate_active != 0 || r.long_active != 0 || r.lat_active != 0;
      ASSERT_TRUE(!differs || flagged) << r.step;
      if (!on) {
        ASSERT_FALSE(differs || flagged) << r.step;
      }
      any = any || differs;
    }
    EXPECT_EQ(any, on);
  }
}

// ---------------------------------------------------------------- commands

TEST(Commands, FrameParsing) {
  const auto g = std::get<Command>(parse_command_frame(
      R"({"type":"input","pitch_lbf":40,"roll_lbf":-3,"pedal":0.5,"throttle":0.7})"));
  EXPECT_EQ(std::get<GripCommand>(g), (GripCommand{27, -3, 0.5, 0.7}));
  const auto p = std::get<Command>(parse_command_frame(R"({"type":"protection","on":false})"));
  EXPECT_EQ(std::get<ProtectionToggle>(p).on, false);
  const auto m = std::get<Command>(
      parse_command_frame(R"({"type":"acs_mode","mode":"jam","axis":"roll"})"));
  EXPECT_EQ(std::get<ModeCommand>(m),
            (ModeCommand{acs::ModeRequest::Jam, acs::AxisSelect::Roll}));
  EXPECT_TRUE(std::holds_alternative<ResetCommand>(
      std::get<Command>(parse_command_frame(R"({"type":"reset"})"))));
  for (const char* bad : {"", "[]", R"({"type":"input","pitch_lbf":"x"})",
                          R"({"type":"protection"})", R"({"type":"nope"})",
                          R"({"type":"acs_mode","mode":"fly"})"}) {
    EXPECT_TRUE(std::holds_alternative<std::string>(parse_command_frame(bad))) << bad;
  }
}

TEST(Commands, CaptureRoundTrip) {
  TempDir dir("cap");
  const std::vector<StampedCommand> c{{0, GripCommand{1.5, -2.25, 0.125, std::nullopt}},
                                      {10, ProtectionToggle{false}},
                                      {10, ModeCommand{acs::ModeRequest::Disable,
                                                       acs::AxisSelect::Pitch}},
                                      {42, ResetCommand{}},
                                      {42, ResetCommand{true}},
                                      {43, GripCommand{0.1, 0.2, 0, 0.3}}};
  write_capture(c, dir / "c.jsonl");
  EXPECT_EQ(read_capture(dir / "c.jsonl"), c);
  for (const auto& s : c) EXPECT_EQ(parse_capture_line(to_capture_line(s)), s);
  spit(dir / "bad.jsonl", to_capture_line(c[3]) + "\n" + to_capture_line(c[0]) + "\n");
  EXPECT_THROW(read_capture(dir / "bad.jsonl"), ConfigError);
}

// ---------------------------------------------------------------- live

TEST(Live, HookedSessionReplaysExactly) {
  auto loaded = short_demo(1.0);
  LiveSession session(loaded, {30.0, 0.0, 256});
  session.set_step_hook([&](std::int64_t k) {
    if (k == 100) session.submit(R"({"type":"input","pitch_lbf":20})");
    if (k == 400) session.submit(R"({"type":"protection","on":false})");
    if (k == 401) session.submit(R"({"type":"input","pitch_lbf":-5,"roll_lbf":10})");
    if (k == 700) session.submit(R"({"type":"protection","on":true})");
  });
  std::vector<std::string> frames;
  session.set_sink([&](std::string f) { frames.push_back(std::move(f)); });
  std::atomic<bool> stop{false};
  const auto live = session.run(stop);
  ASSERT_TRUE(live.log.error.empty());
  EXPECT_EQ(live.capture.size(), 4u);

  const auto replay = run_commands(loaded, live.capture);
  TempDir dir("live");
  write_csv(live.log, dir / "live.csv");
  write_csv(replay, dir / "replay.csv");
  EXPECT_EQ(slurp(dir / "live.csv"), slurp(dir / "replay.csv"));

  // toggle visible on the step it was applied at
  EXPECT_EQ(live.log.records[399].protection_on, 1.0);
  EXPECT_EQ(live.log.records[400].protection_on, 0.0);
  EXPECT_EQ(live.log.records[700].protection_on, 1.0);

  // frames at the first step at or after each multiple of 1/30 s
  EXPECT_EQ(live.frames, frames.size());
  double previous = -1;
  for (const auto& f : frames) {
    const auto j = nlohmann::json::parse(f);
    const double t = j["t"];
    const double slot = std::ceil(t * 30 - 1e-9) / 30;
    EXPECT_LT(t - slot, 0.001 + 1e-9);
    EXPECT_GT(t, previous);
    previous = t;
  }
  EXPECT_EQ(frames.size(), 30u);
}

TEST(Live, MalformedAndOverflowRejected) {
  LiveSession session(short_demo(0.01), {30.0, 0.0, 2});
  EXPECT_TRUE(session.submit("garbage").has_value());
  EXPECT_FALSE(session.submit(R"({"type":"reset"})").has_value());
  EXPECT_FALSE(session.submit(R"({"type":"reset"})").has_value());
  const auto full = session.submit(R"({"type":"reset"})");
  ASSERT_TRUE(full.has_value());
  EXPECT_NE(full->find("queue full"), std::string::npos);
}

TEST(Live, HaltWaitsForResetAndReplays) {
  // dive from low altitude leaves the atmosphere model
  const auto loaded = loaded_from(scenario_json(300, 500, -30, 2.5));
  LiveSession session(loaded, {30.0, 0.0, 256});
  std::vector<std::string> errors;
  session.set_sink([&](std::string f) {
    if (f.find("\"error\"") != std::string::npos) errors.push_back(f);
  });
  std::size_t resets = 0;
  std::int64_t halted_at = -1;
  session.set_step_hook([&](std::int64_t k) {
    if (errors.size() > resets) {
      // a non-reset command is refused while halted
      EXPECT_TRUE(session.submit(R"({"type":"input","pitch_lbf":1})").has_value());
      session.submit(R"({"type":"reset"})");
      halted_at = k;
      ++resets;
    }
  });
  std::atomic<bool> stop{false};
  const auto live = session.run(stop);
  ASSERT_GE(resets, 1u);
  EXPECT_TRUE(live.log.error.empty()) << live.log.error;
  EXPECT_EQ(live.log.records.size(), loaded.scenario.steps());
  ASSERT_TRUE(std::holds_alternative<ResetCommand>(live.capture.back().command));
  EXPECT_TRUE(std::get<ResetCommand>(live.capture.back().command).resume);
  EXPECT_EQ(live.capture.back().step, halted_at);

  const auto replay = run_commands(loaded, live.capture);
  EXPECT_TRUE(replay.error.empty());
  EXPECT_EQ(replay.records, live.log.records);
  EXPECT_EQ(replay.events, live.log.events);

  // without the reset the scripted run stops with an error
  const auto unreset = run_commands(loaded, {});
  EXPECT_FALSE(unreset.error.empty());
  EXPECT_LT(unreset.records.size(), loaded.scenario.steps());
}

TEST(Live, TimeStaysMonotoneAcrossReset) {
  const auto loaded = short_demo(0.3);
  const auto log = run_commands(loaded, {{100, ResetCommand{}}});
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    ASSERT_GT(log.records[i].t, log.records[i - 1].t);
  }
  EXPECT_EQ(log.records[100].u, log.records[0].u);
  // a resuming reset where nothing halts is a replay divergence
  const auto diverged = run_commands(loaded, {{100, ResetCommand{true}}});
  EXPECT_NE(diverged.error.find("step 100"), std::string::npos);
  EXPECT_EQ(diverged.records.size(), 101u);
}

TEST(Decimator, FirstStepAtOrAfterEachSlot) {
  Decimator d(30);
  std::vector<std::int64_t> picked;
  for (std::int64_t k = 0; k < 1000; ++k) {
    if (d.due(k * 0.001)) picked.push_back(k);
  }
  ASSERT_EQ(picked.size(), 30u);
  for (std::size_t i = 0; i < picked.size(); ++i) {
    EXPECT_EQ(picked[i], static_cast<std::int64_t>(std::ceil(i * 1000.0 / 30 - 1e-9)));
  }
  EXPECT_THROW(Decimator(0), std::invalid_argument);
}

// ---------------------------------------------------------------- release capture

TEST(Release, ShippedCaptureReads) {
  const auto c = read_release_capture(test::data_dir() / "captures/release_synthetic.csv");
  EXPECT_EQ(c.t.size(), 2001u);
  EXPECT_EQ(c.t.size(), c.theta_deg.size());
  EXPECT_FALSE(c.comments.empty());
}

TEST(Release, RoundTripAndErrors) {
  TempDir dir("rel");
  ReleaseCapture c{{0, 0.005, 0.01}, {10, 9.99, 9.95}, {"synthetic"}};
  write_release_capture(c, dir / "r.csv");
  const auto back = read_release_capture(dir / "r.csv");
  EXPECT_EQ(back.t, c.t);
  EXPECT_EQ(back.theta_deg, c.theta_deg);
  spit(dir / "bad_header.csv", "time,theta\n0,1\n");
  EXPECT_THROW(read_release_capture(dir / "bad_header.csv"), ConfigError);
  spit(dir / "order.csv", "t_s,theta_deg\n0,1\n0,2\n");
  try {
    read_release_capture(dir / "order.csv");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
  spit(dir / "junk.csv", "t_s,theta_deg\n0,abc\n");
  EXPECT_THROW(read_release_capture(dir / "junk.csv"), ConfigError);
  EXPECT_THROW(read_release_capture(dir / "missing.csv"), IoError);
}

}  // namespace
}  // namespace fepsim::sim
