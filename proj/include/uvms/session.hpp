#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "uvms/input_log.hpp"
#include "uvms/session_config.hpp"
#include "uvms/wire.hpp"

namespace uvms {

struct SessionCounters {
  std::uint64_t accepted_samples = 0;
  std::uint64_t dropped_samples = 0;   // stale timestamps
  std::uint64_t malformed_messages = 0;
  std::uint64_t safety_stops = 0;
  std::uint64_t snapshots = 0;
  std::uint64_t limited_ticks = 0;
  std::uint64_t damped_ticks = 0;
  std::uint64_t non_finite_ticks = 0;
};

struct TickResult {
  std::vector<TeleopEvent> events;
  std::optional<wire::Snapshot> snapshot;
  TelemetryRecord record;
  StepFlags flags;
};

/// Binds two stylus streams to the world. Single-threaded: the owner calls
/// ingest() for each arriving message and tick() at the configured rate.
class Session {
 public:
  explicit Session(SessionConfig config);

  /// Parses and applies one raw message. Replies (error, mode, config) are
  /// returned for the sender; stylus samples produce none.
  std::vector<wire::OutboundMessage> ingest(std::string_view raw);
  std::vector<wire::OutboundMessage> ingest_json(const nlohmann::json& msg);

  TickResult tick();

  /// Every accepted message is appended with the tick it arrived before.
  void record_to(InputLogWriter* writer) { recorder_ = writer; }

  const SessionConfig& config() const { return config_; }
  const WorldModel& model() const { return model_; }
  const WorldState& world() const { return world_; }
  InputMode mode() const { return mode_; }
  const SessionCounters& counters() const { return counters_; }
  const ArmClutch& clutch(Device d) const { return arms_[index(d)].clutch; }
  const DeviceButtonState& buttons(Device d) const { return arms_[index(d)].buttons; }
  wire::Snapshot snapshot() const;

 private:
  struct DeviceChannel {
    DeviceButtonState buttons;
    std::deque<StylusSample> queue;
    std::optional<StylusSample> latest;
    double last_accepted = -1e300;
    std::uint64_t last_sample_tick = 0;
    ArmClutch clutch;
    std::optional<DesiredPose> desired;
  };

  void apply_event(const TeleopEvent& e, const StylusSample* sample, std::array<bool, 2>& toggles);

  SessionConfig config_;
  WorldModel model_;
  WorldState world_;
  std::array<DeviceChannel, 2> arms_;
  bool vehicle_mode_ = false;
  std::array<Vec3, 2> vehicle_anchor_{Vec3::Zero(), Vec3::Zero()};
  VelocityCommand vehicle_cmd_;
  InputMode mode_ = InputMode::Idle;
  std::uint64_t seq_ = 0;
  StepFlags last_flags_;
  SessionCounters counters_;
  InputLogWriter* recorder_ = nullptr;
};

/// Wire form of the config: chains, registrations and rates.
nlohmann::json config_json(const SessionConfig& config);

struct RunSummary {
  std::uint64_t ticks = 0;
  std::size_t events = 0;
  SessionCounters counters;
  WorldState final_world;
  /// Non-finite state, a joint limit hit or a safety stop during the run.
  bool flagged = false;
};

/// Headless run of a scenario or recorded log: every entry is ingested before
/// its tick, then the world is stepped until `log.end_tick`.
RunSummary run_log(const SessionConfig& config, const InputLog& log, std::ostream* telemetry,
                   InputLogWriter* recorder = nullptr);

}  // namespace uvms
