#include <doctest.h>

#include <sstream>

#include "uvms/errors.hpp"
#include "uvms/session.hpp"

using namespace uvms;
using nlohmann::json;

namespace {

json stylus(Device d, const Vec3& p, bool manip, bool vehicle, double t) {
  StylusSample s;
  s.device = d;
  s.pose.translation = p;
  s.button_manip = manip;
  s.button_vehicle = vehicle;
  s.timestamp = t;
  return wire::to_json(wire::InboundMessage{s});
}

/// Feeds both devices every tick with the given stylus positions and buttons.
struct Hands {
  Session& session;
  std::array<Vec3, 2> pos{Vec3::Zero(), Vec3::Zero()};
  std::array<bool, 2> manip{false, false};
  std::array<bool, 2> vehicle{false, false};
  std::array<bool, 2> silent{false, false};
  std::vector<TeleopEvent> events;

  void run(int ticks) {
    for (int k = 0; k < ticks; ++k) {
      const double t = static_cast<double>(session.world().tick) * session.config().dt();
      for (int i = 0; i < 2; ++i) {
        if (!silent[i]) session.ingest_json(stylus(static_cast<Device>(i), pos[i], manip[i], vehicle[i], t));
      }
      const TickResult r = session.tick();
      events.insert(events.end(), r.events.begin(), r.events.end());
    }
  }

  std::size_t count(TeleopEventKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [&](const TeleopEvent& e) { return e.kind == kind; }));
  }
};

}  // namespace

TEST_SUITE("session") {

TEST_CASE("stale samples are dropped and counted") {
  Session s(default_session_config());
  s.ingest_json(stylus(Device::Left, Vec3::Zero(), false, false, 1.0));
  s.ingest_json(stylus(Device::Left, Vec3::Zero(), false, false, 0.5));
  s.ingest_json(stylus(Device::Right, Vec3::Zero(), false, false, 0.5));
  CHECK(s.counters().accepted_samples == 2);
  CHECK(s.counters().dropped_samples == 1);
  s.tick();
  CHECK(s.snapshot().dropped_samples == 1);
}

TEST_CASE("malformed input gets an error reply") {
  Session s(default_session_config());
  auto replies = s.ingest("{not json");
  REQUIRE(replies.size() == 1);
  CHECK(std::holds_alternative<wire::ErrorReply>(replies[0]));
  replies = s.ingest(R"({"v":1,"type":"stylus","device":"left"})");
  CHECK(std::holds_alternative<wire::ErrorReply>(replies.at(0)));
  CHECK(s.counters().malformed_messages == 2);
}

TEST_CASE("queries") {
  Session s(default_session_config());
  const auto mode = s.ingest(R"({"v":1,"type":"mode_query"})");
  CHECK(std::get<wire::ModeReply>(mode.at(0)).mode == InputMode::Idle);
  const auto cfg = s.ingest(R"({"v":1,"type":"config_query"})");
  const json& c = std::get<wire::ConfigReply>(cfg.at(0)).config;
  CHECK(c["arms"]["left"]["chain"]["joints"].size() == 6);
  CHECK(c["arms"]["right"]["initial_q"].size() == 6);
  CHECK(c["tick_rate"] == 100.0);
  CHECK(c["rate_limits"]["v_max"] == 0.10);
  CHECK(c["arms"]["left"]["registration"]["orientation"].size() == 4);
}

TEST_CASE("snapshot sequence") {
  Session s(default_session_config());
  std::uint64_t last = 0, count = 0;
  for (int k = 0; k < 10000; ++k) {
    const TickResult r = s.tick();
    if (!r.snapshot) continue;
    CHECK(r.snapshot->seq > last);
    CHECK(r.snapshot->tick == s.world().tick);
    last = r.snapshot->seq;
    ++count;
  }
  CHECK(count == 10000 / s.config().broadcast_every());
}

TEST_CASE("clutched stylus drives the desired pose") {
  Session s(default_session_config());
  Hands h{s};
  h.run(5);
  const Transform anchor = forward_kinematics(s.model().chains[0], s.world().arms[0].q_cmd).ee;
  h.manip[0] = true;
  h.run(20);
  CHECK(h.count(TeleopEventKind::ClutchEngaged) == 1);
  CHECK(s.mode() == InputMode::ArmLeft);
  REQUIRE(s.clutch(Device::Left).active);
  CHECK((s.clutch(Device::Left).anchor_ee.matrix() - anchor.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  h.pos[0] = Vec3(0.01, 0, 0);  // device right is vehicle -y
  h.run(200);
  const wire::Snapshot snap = s.snapshot();
  REQUIRE(snap.arms[0].desired);
  CHECK((snap.arms[0].desired->translation - (anchor.translation + Vec3(0, -0.01, 0))).norm() < 1e-12);
  const Vec3 ee = forward_kinematics(s.model().chains[0], s.world().arms[0].q_cmd).ee.translation;
  CHECK((ee - snap.arms[0].desired->translation).norm() <= s.config().rate_limits.pos_threshold);
  CHECK_FALSE(snap.arms[1].desired);

  h.manip[0] = false;
  h.run(2);
  CHECK(h.count(TeleopEventKind::ClutchReleased) == 1);
  CHECK(s.mode() == InputMode::Idle);
}

TEST_CASE("both arms clutched") {
  Session s(default_session_config());
  Hands h{s};
  h.manip = {true, true};
  h.run(30);
  CHECK(s.mode() == InputMode::ArmBoth);
}

TEST_CASE("vehicle mode needs both devices") {
  Session s(default_session_config());
  Hands h{s};
  h.vehicle[0] = true;
  h.run(30);
  CHECK(s.mode() == InputMode::Idle);
  h.pos[0] = Vec3(0, 0, -0.05);
  h.run(30);
  CHECK(s.world().vehicle.position.isZero(0.0));

  h.vehicle[1] = true;
  h.run(30);
  CHECK(s.mode() == InputMode::Vehicle);
  CHECK(h.count(TeleopEventKind::VehicleModeEntered) == 1);
  CHECK(s.world().vehicle.position.isZero(0.0));  // anchors taken on entry

  h.pos = {Vec3(0, 0, -0.10), Vec3(0, 0, -0.05)};
  h.run(100);
  const Vec3 v = s.world().vehicle.position;
  CHECK(v.x() > 0.05);
  CHECK(std::abs(v.y()) < 1e-12);
  CHECK(std::abs(v.z()) < 1e-12);
  CHECK_FALSE(s.clutch(Device::Left).active);

  h.vehicle = {false, false};
  h.run(5);
  CHECK(h.count(TeleopEventKind::VehicleModeExited) == 1);
  CHECK(s.mode() == InputMode::Idle);
}

TEST_CASE("silent device triggers a safety stop") {
  Session s(default_session_config());
  Hands h{s};
  h.manip[0] = true;
  h.run(30);
  REQUIRE(s.mode() == InputMode::ArmLeft);
  h.silent[0] = true;
  h.run(static_cast<int>(s.config().safety_timeout_ticks()) + 2);
  CHECK(s.counters().safety_stops == 1);
  CHECK(h.count(TeleopEventKind::ClutchReleased) == 1);
  CHECK(s.mode() == InputMode::Idle);
  // Resuming with the button still held does not re-engage.
  h.silent[0] = false;
  h.run(30);
  CHECK(s.mode() == InputMode::Idle);
}

TEST_CASE("chord toggles the gripper") {
  Session s(default_session_config());
  Hands h{s};
  h.manip[1] = h.vehicle[1] = true;
  h.run(10);
  h.manip[1] = h.vehicle[1] = false;
  h.run(60);
  CHECK(h.count(TeleopEventKind::GripperToggled) == 1);
  CHECK(h.count(TeleopEventKind::ClutchEngaged) == 0);
  CHECK(s.world().arms[1].gripper == 1.0);
  CHECK(s.world().arms[0].gripper == 0.0);
}

TEST_CASE("recorded sessions replay identically") {
  const SessionConfig config = default_session_config();
  std::ostringstream log_text, live;
  {
    InputLogWriter writer(log_text, config.sim.seed, config.resolved_yaml);
    Session s(config);
    s.record_to(&writer);
    TelemetryWriter telemetry(live);
    Hands h{s};
    auto run = [&](int n) {
      for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(s.world().tick) * config.dt();
        for (int i = 0; i < 2; ++i) s.ingest_json(stylus(static_cast<Device>(i), h.pos[i], h.manip[i], h.vehicle[i], t));
        telemetry.write(s.tick().record);
      }
    };
    run(20);
    h.manip = {true, true};
    run(20);
    h.pos = {Vec3(0.02, 0.01, -0.01), Vec3(-0.01, 0.02, 0.0)};
    run(200);
    s.ingest_json(stylus(Device::Left, Vec3::Zero(), false, false, 0.0));  // stale
    h.manip = {false, false};
    run(50);
    writer.finish(s.world().tick);
  }
  std::istringstream in(log_text.str());
  const InputLog log = read_input_log(in);
  std::ostringstream replayed;
  const RunSummary summary = run_log(load_session_config(*log.config_yaml), log, &replayed);
  CHECK(summary.ticks == 290);
  CHECK(summary.counters.dropped_samples == 1);
  CHECK(replayed.str() == live.str());
}

TEST_CASE("empty log") {
  InputLog log;
  log.end_tick = 0;
  std::ostringstream out;
  const RunSummary s = run_log(default_session_config(), log, &out);
  CHECK(s.ticks == 0);
  CHECK_FALSE(s.flagged);
  CHECK(out.str() == telemetry_header() + "\n");
}

}
