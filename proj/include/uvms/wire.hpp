#pragma once

// JSON message schema carried over the session socket, one message per
// websocket frame. Field-by-field documentation lives in docs/protocol.md.

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uvms/sim_env.hpp"
#include "uvms/teleop_mapping.hpp"

namespace uvms::wire {

inline constexpr int kProtocolVersion = 1;

struct ModeQuery {};
struct ConfigQuery {};

using InboundMessage = std::variant<StylusSample, ModeQuery, ConfigQuery>;

/// Validates and decodes one inbound message. Quaternions are renormalised;
/// anything that cannot be repaired throws MalformedMessage.
InboundMessage parse_inbound(const nlohmann::json& j);
InboundMessage parse_inbound(std::string_view text);

nlohmann::json to_json(const InboundMessage& msg);

struct ArmSnapshot {
  JointVector q = JointVector::Zero();
  JointVector q_cmd = JointVector::Zero();
  Transform ee;
  std::optional<Transform> desired;  // present while clutched
  double gripper = 0.0;
  bool clutched = false;
};

struct Snapshot {
  std::uint64_t seq = 0;
  std::uint64_t tick = 0;
  double time = 0.0;
  Vec3 vehicle_position = Vec3::Zero();
  double vehicle_yaw = 0.0;
  std::array<ArmSnapshot, 2> arms;
  bool caged = false;
  std::vector<SceneObject> objects;
  InputMode mode = InputMode::Idle;
  std::uint64_t dropped_samples = 0;
  std::uint64_t safety_stops = 0;
  bool limited = false;
  bool damped = false;
};

struct Ack {};
struct ErrorReply {
  std::string message;
};
struct ModeReply {
  InputMode mode;
};
struct ConfigReply {
  nlohmann::json config;
};

using OutboundMessage = std::variant<Snapshot, TeleopEvent, Ack, ErrorReply, ModeReply, ConfigReply>;

nlohmann::json to_json(const OutboundMessage& msg);
std::string encode(const OutboundMessage& msg);

nlohmann::json transform_json(const Transform& t);

}  // namespace uvms::wire
