// Command-line front end: serve | scenario | replay | analyze.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <csignal>
#include <fstream>
#include <iostream>

#include "uvms/analyze.hpp"
#include "uvms/errors.hpp"
#include "uvms/input_log.hpp"
#include "uvms/server.hpp"
#include "uvms/session.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitFlagged = 3;

struct Options {
  std::string config;
  std::string scenario;
  std::string log;
  std::string telemetry;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_ticks;
};

class BadInput : public uvms::Error {
 public:
  using Error::Error;
};

std::atomic<uvms::Server*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (uvms::Server* s = g_server.load()) s->stop();
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadInput("cannot write " + path.string());
  return out;
}

/// --config wins, then a config embedded in the log, then the defaults.
uvms::SessionConfig resolve_config(const Options& o, const uvms::InputLog* log) {
  uvms::SessionConfig c;
  if (!o.config.empty()) {
    c = uvms::load_session_config_file(o.config);
  } else if (log != nullptr && log->config_yaml) {
    c = uvms::load_session_config(*log->config_yaml);
  } else {
    c = uvms::default_session_config();
  }
  return c;
}

std::filesystem::path telemetry_path(const Options& o, const uvms::SessionConfig& c) {
  if (!o.telemetry.empty()) return o.telemetry;
  if (!o.out_dir.empty()) return std::filesystem::path(o.out_dir) / "telemetry.csv";
  if (!c.telemetry_path.empty()) return c.telemetry_path;
  return "telemetry.csv";
}

int run_headless(const Options& o, const uvms::InputLog& log, uvms::SessionConfig config) {
  std::ofstream telemetry = open_output(telemetry_path(o, config));
  std::optional<std::ofstream> log_out;
  std::optional<uvms::InputLogWriter> recorder;
  if (!o.log.empty()) {
    log_out.emplace(open_output(o.log));
    recorder.emplace(*log_out, config.sim.seed, config.resolved_yaml);
  }
  const uvms::RunSummary s = uvms::run_log(config, log, &telemetry, recorder ? &*recorder : nullptr);
  fmt::print("ticks {}  events {}  accepted {}  dropped {}  malformed {}  safety_stops {}  caged {}\n",
             s.ticks, s.events, s.counters.accepted_samples, s.counters.dropped_samples,
             s.counters.malformed_messages, s.counters.safety_stops,
             s.final_world.grasp.caged() ? "yes" : "no");
  if (s.flagged) {
    fmt::print(stderr,
               "internal flag raised: non_finite_ticks {} limited_ticks {} safety_stops {}\n",
               s.counters.non_finite_ticks, s.counters.limited_ticks, s.counters.safety_stops);
    return kExitFlagged;
  }
  return kExitOk;
}

int cmd_scenario(const Options& o) {
  std::optional<uvms::SessionConfig> from_file;
  if (!o.config.empty()) from_file = uvms::load_session_config_file(o.config);
  std::string path = o.scenario;
  if (path.empty() && from_file) path = from_file->scenario_path;
  if (path.empty()) throw BadInput("scenario: no --scenario given and none in the config");
  const uvms::InputLog log = uvms::read_input_log_file(path);
  uvms::SessionConfig config = from_file ? *from_file : resolve_config(o, &log);
  if (o.seed) config.sim.seed = *o.seed;
  return run_headless(o, log, std::move(config));
}

int cmd_replay(const Options& o) {
  if (o.log.empty()) throw BadInput("replay: --log is required");
  const uvms::InputLog log = uvms::read_input_log_file(o.log);
  uvms::SessionConfig config = resolve_config(o, &log);
  config.sim.seed = o.seed.value_or(log.seed);
  Options out = o;
  out.log.clear();  // never overwrite the log being replayed
  return run_headless(out, log, std::move(config));
}

int cmd_serve(const Options& o) {
  uvms::SessionConfig config = resolve_config(o, nullptr);
  if (o.seed) config.sim.seed = *o.seed;
  std::optional<std::ofstream> telemetry;
  if (!o.telemetry.empty() || !o.out_dir.empty()) telemetry.emplace(open_output(telemetry_path(o, config)));
  std::optional<std::ofstream> log_out;
  std::optional<uvms::InputLogWriter> recorder;
  if (!o.log.empty()) {
    log_out.emplace(open_output(o.log));
    recorder.emplace(*log_out, config.sim.seed, config.resolved_yaml);
  }
  uvms::ServerOptions options;
  options.telemetry = telemetry ? &*telemetry : nullptr;
  options.recorder = recorder ? &*recorder : nullptr;
  options.max_ticks = o.max_ticks;
  uvms::Server server(config, options);
  const std::uint16_t port = server.listen();
  fmt::print("listening on ws://{}:{}\n", options.address, port);
  std::fflush(stdout);
  g_server.store(&server);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  g_server.store(nullptr);
  return kExitOk;
}

int cmd_analyze(const Options& o) {
  if (o.telemetry.empty()) throw BadInput("analyze: --telemetry is required");
  std::ifstream in(o.telemetry);
  if (!in) throw BadInput("cannot open " + o.telemetry);
  const std::vector<uvms::TelemetryRecord> rows = uvms::read_telemetry(in);
  const uvms::ErrorReport report = uvms::analyze(rows);
  const std::filesystem::path dir = o.out_dir.empty() ? std::filesystem::path("report") : std::filesystem::path(o.out_dir);
  uvms::write_report(rows, report, dir);
  std::cout << uvms::report_text(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bimanual UVMS teleoperation: session server and headless tools"};
  app.require_subcommand(1);
  Options o;

  CLI::App* serve = app.add_subcommand("serve", "run the WebSocket session server");
  CLI::App* scenario = app.add_subcommand("scenario", "run a scripted scenario headless");
  CLI::App* replay = app.add_subcommand("replay", "re-run a recorded input log");
  CLI::App* analyze = app.add_subcommand("analyze", "tracking-error report from telemetry");

  for (CLI::App* sub : {serve, scenario, replay}) {
    sub->add_option("--config", o.config, "session config YAML")->check(CLI::ExistingFile);
    sub->add_option("--telemetry", o.telemetry, "telemetry CSV to write");
    sub->add_option("--out-dir", o.out_dir, "directory for telemetry.csv");
    sub->add_option("--seed", o.seed, "simulator seed");
  }
  serve->add_option("--log", o.log, "record inbound messages to this log");
  serve->add_option("--max-ticks", o.max_ticks, "stop after this many ticks");
  scenario->add_option("--scenario", o.scenario, "scenario file")->check(CLI::ExistingFile);
  scenario->add_option("--log", o.log, "record the run to this log");
  replay->add_option("--log", o.log, "input log to replay")->required()->check(CLI::ExistingFile);
  analyze->add_option("--telemetry", o.telemetry, "telemetry CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", o.out_dir, "report directory (default ./report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*serve) return cmd_serve(o);
    if (*scenario) return cmd_scenario(o);
    if (*replay) return cmd_replay(o);
    return cmd_analyze(o);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitBadInput;
  }
}
