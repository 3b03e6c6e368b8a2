#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "uvms/resolved_rate.hpp"
#include "uvms/transform.hpp"

namespace uvms {

enum class Device { Left = 0, Right = 1 };

std::string_view to_string(Device d);
/// Accepts "left"/"right"; throws ParseError otherwise.
Device device_from_string(std::string_view s);
inline int index(Device d) { return static_cast<int>(d); }

/// One reading from a stylus; `pose` is in the device's haptic base frame {H}.
struct StylusSample {
  Device device = Device::Left;
  Transform pose;
  bool button_manip = false;    // proximal
  bool button_vehicle = false;  // distal
  double timestamp = 0.0;       // client clock, seconds
};

/// Pose of a haptic base frame {H} in the vehicle frame.
struct Registration {
  Transform rov_from_haptic;

  /// Touch-style device frame (x right, y up, z toward the operator) mapped
  /// onto the vehicle frame (x forward, y left, z up).
  static Registration standard();
};

/// Anchor state captured when the manipulator button engages.
struct ArmClutch {
  Transform anchor_stylus;  // stylus in {H} at engage
  Transform anchor_ee;      // end-effector in {ROV} at engage
  Transform bridge;         // anchor_ee⁻¹ * registration * anchor_stylus
  double scale = 1.0;       // applied to relative stylus translation
  bool active = false;
};

ArmClutch begin_clutch(const StylusSample& stylus, const Transform& current_ee,
                       const Registration& reg, double scale = 1.0);

/// Stylus motion since the anchor, in the anchor frame. Throws ClutchInactive.
Transform stylus_relative(const ArmClutch& clutch, const StylusSample& current);

/// Similarity transform of `rel` into the anchored end-effector frame.
/// Throws ClutchInactive.
Transform map_relative(const ArmClutch& clutch, const Transform& rel);

/// anchor_ee * map_relative(stylus_relative(current)). Throws ClutchInactive.
DesiredPose desired_ee_pose(const ArmClutch& clutch, const StylusSample& current);

// ---------------------------------------------------------------------------
// Button state machine

enum class TeleopEventKind {
  ClutchEngaged,
  ClutchReleased,
  GripperToggled,
  VehicleModeEntered,
  VehicleModeExited,
};

std::string_view to_string(TeleopEventKind k);

struct TeleopEvent {
  TeleopEventKind kind;
  std::optional<Device> device;  // empty for vehicle mode events

  bool operator==(const TeleopEvent&) const = default;
};

struct ButtonTiming {
  double simultaneity_window = 0.150;  // s, both presses inside this count as a chord
  double retoggle_debounce = 0.250;    // s, minimum gap between gripper toggles
};

/// Per-device button interpretation.
///
/// A press of a single button is held as Pending for the simultaneity window;
/// if the other button follows inside the window the press becomes a chord
/// (gripper toggle) and nothing else is reported until both buttons are up.
/// Otherwise the press commits to a clutch (proximal) or a vehicle request
/// (distal). A press released while still pending is discarded.
struct DeviceButtonState {
  enum class Phase { Idle, Pending, Clutch, VehicleHold, Chord, Latched };

  Phase phase = Phase::Idle;
  bool pending_manip = false;  // which button opened the pending window
  double phase_since = 0.0;
  double last_timestamp = -1e300;
  double last_toggle = -1e300;
  bool manip = false;
  bool vehicle = false;

  bool clutch_engaged() const { return phase == Phase::Clutch; }
  /// Distal button alone is held and committed.
  bool vehicle_request() const { return phase == Phase::VehicleHold && vehicle && !manip; }
};

struct ButtonUpdate {
  DeviceButtonState state;
  std::vector<TeleopEvent> events;
};

/// Throws OutOfOrderTimestamp when `sample.timestamp` precedes the last one seen.
ButtonUpdate update_buttons(const DeviceButtonState& previous, const StylusSample& sample,
                            const ButtonTiming& timing = {});

/// Drops an engaged clutch as if the button had been released (used on
/// device timeout). Buttons must come up before the device is usable again.
ButtonUpdate force_release(const DeviceButtonState& previous, Device device);

}  // namespace uvms
