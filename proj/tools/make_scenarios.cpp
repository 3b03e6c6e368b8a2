// Regenerates the bundled scenario files by driving a live Session with a
// scripted two-handed operator and recording what it sends.
//
//   make_scenarios <data-dir> [<out-dir>]
//
// <data-dir> holds config/task*.yaml; output defaults to <data-dir>/scenarios.

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>

#include "uvms/errors.hpp"
#include "uvms/session.hpp"

namespace fs = std::filesystem;
using namespace uvms;

namespace {

constexpr int kMotionEvery = 2;      // ticks between samples while moving (50 Hz)
constexpr int kHeartbeatEvery = 10;  // ticks between samples when still (10 Hz)

struct Hand {
  Vec3 position = Vec3(0.0, 0.1, 0.0);  // device frame
  bool manip = false;
  bool vehicle = false;
  bool buttons_dirty = true;
  bool pose_dirty = false;
  std::optional<std::uint64_t> last_sent;
};

/// Plays the part of the operator: holds two styluses, presses buttons and
/// moves them, feeding samples into the session as a device would.
class Operator {
 public:
  explicit Operator(Session& session) : session_(session) {}

  void wait(double seconds) { run(seconds, nullptr); }

  void buttons(Device d, bool manip, bool vehicle) {
    Hand& h = hands_[index(d)];
    h.manip = manip;
    h.vehicle = vehicle;
    h.buttons_dirty = true;
  }

  /// Smoothly moves each stylus by `delta` (device frame) over `seconds`.
  void move(const std::array<Vec3, 2>& delta, double seconds) {
    const std::array<Vec3, 2> start = {hands_[0].position, hands_[1].position};
    run(seconds, [&](double s) {
      const double blend = 0.5 - 0.5 * std::cos(std::numbers::pi * s);
      for (int i = 0; i < 2; ++i) {
        if (delta[i].isZero(0.0)) continue;
        hands_[i].position = start[i] + blend * delta[i];
        hands_[i].pose_dirty = true;
      }
    });
  }

  /// Stylus displacement that moves arm `d`'s end-effector by `rov` in the
  /// vehicle frame while its clutch is engaged.
  Vec3 device_delta(Device d, const Vec3& rov) const {
    const SessionConfig& c = session_.config();
    return c.arms[index(d)].registration.rov_from_haptic.rotation.transpose() * rov / c.workspace_scale;
  }

  /// Chord: both buttons of one device together, then both up.
  void toggle_gripper(Device d) {
    buttons(d, true, true);
    wait(0.1);
    buttons(d, false, false);
    wait(0.4);
  }

 private:
  void run(double seconds, const std::function<void(double)>& motion) {
    const double dt = session_.config().dt();
    const auto n = static_cast<std::uint64_t>(std::llround(seconds / dt));
    for (std::uint64_t k = 0; k < n; ++k) {
      if (motion) motion(static_cast<double>(k + 1) / static_cast<double>(n));
      send();
      session_.tick();
    }
  }

  void send() {
    const std::uint64_t now = session_.world().tick;
    for (int i = 0; i < 2; ++i) {
      Hand& h = hands_[i];
      const std::uint64_t since = h.last_sent ? now - *h.last_sent : kHeartbeatEvery;
      const bool due = h.buttons_dirty || (h.pose_dirty && since >= kMotionEvery) ||
                       since >= kHeartbeatEvery;
      if (!due) continue;
      StylusSample s;
      s.device = static_cast<Device>(i);
      s.pose.translation = h.position;
      s.button_manip = h.manip;
      s.button_vehicle = h.vehicle;
      s.timestamp = static_cast<double>(now) * session_.config().dt();
      session_.ingest_json(wire::to_json(wire::InboundMessage{s}));
      h.buttons_dirty = false;
      h.pose_dirty = false;
      h.last_sent = now;
    }
  }

  Session& session_;
  std::array<Hand, 2> hands_;
};

constexpr Device L = Device::Left;
constexpr Device R = Device::Right;

// Vehicle directions through the standard registration: device -z is
// vehicle forward, device +y is vehicle up.
const Vec3 kForward(0.0, 0.0, -0.05);
const Vec3 kUp(0.0, 0.05, 0.0);

void pilot(Operator& op, const Vec3& stroke, double hold) {
  op.buttons(L, false, true);
  op.buttons(R, false, true);
  op.wait(0.4);
  op.move({stroke, stroke}, 0.5);
  op.wait(hold);
  op.move({Vec3(-stroke), Vec3(-stroke)}, 0.5);
  op.wait(1.5);
  op.buttons(L, false, false);
  op.buttons(R, false, false);
  op.wait(0.5);
}

void clutch_both(Operator& op, bool down) {
  op.buttons(L, down, false);
  op.buttons(R, down, false);
  op.wait(down ? 0.4 : 0.3);
}

/// Piloting forward, opening the grippers, then a slow two-arm move to a
/// pre-grasp pose with long still holds while clutched.
void task1(Operator& op) {
  op.wait(0.5);
  pilot(op, kForward, 3.0);
  op.toggle_gripper(L);
  op.toggle_gripper(R);
  clutch_both(op, true);
  op.wait(3.0);
  op.move({op.device_delta(L, Vec3(0.05, -0.03, -0.04)), op.device_delta(R, Vec3(0.05, 0.03, -0.04))},
          8.0);
  op.wait(8.0);
  clutch_both(op, false);
  op.wait(3.0);
}

/// Grippers open, arms close in on the box from both sides, grippers close.
void approach_and_cage(Operator& op) {
  op.wait(0.5);
  op.toggle_gripper(L);
  op.toggle_gripper(R);
  clutch_both(op, true);
  op.move({op.device_delta(L, Vec3(0.03, -0.065, 0.0)), op.device_delta(R, Vec3(0.03, 0.065, 0.0))},
          6.0);
  op.wait(2.0);
  clutch_both(op, false);
  op.wait(1.0);
  op.toggle_gripper(L);
  op.toggle_gripper(R);
  op.wait(1.0);
}

void task2(Operator& op) {
  approach_and_cage(op);
  pilot(op, kUp, 1.5);
  pilot(op, kForward, 1.0);
  op.wait(1.0);
}

void task2_perturbed(Operator& op) {
  approach_and_cage(op);
  op.buttons(L, true, false);
  op.wait(0.4);
  op.move({op.device_delta(L, Vec3(0.0, 0.10, 0.0)), Vec3::Zero()}, 3.0);
  op.wait(1.0);
  op.buttons(L, false, false);
  op.wait(1.0);
}

void generate(const fs::path& config_path, const fs::path& out, const std::function<void(Operator&)>& script) {
  const SessionConfig config = load_session_config_file(config_path);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error("cannot write " + out.string());
  InputLogWriter writer(file, config.sim.seed, config.resolved_yaml);
  Session session(config);
  session.record_to(&writer);
  Operator op(session);
  script(op);
  writer.finish(session.world().tick);
  fmt::print("{}: {} messages, {} ticks, caged at end: {}\n", out.string(), writer.entries(),
             session.world().tick, session.world().grasp.caged() ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_scenarios <data-dir> [<out-dir>]\n";
    return 2;
  }
  const fs::path data = argv[1];
  const fs::path out = argc > 2 ? fs::path(argv[2]) : data / "scenarios";
  try {
    fs::create_directories(out);
    generate(data / "config/task1.yaml", out / "task1.jsonl", task1);
    generate(data / "config/task2.yaml", out / "task2.jsonl", task2);
    generate(data / "config/task2.yaml", out / "task2_perturbed.jsonl", task2_perturbed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
