#include "uvms/wire.hpp"

#include <cmath>

#include "uvms/errors.hpp"

namespace uvms::wire {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw MalformedMessage(what); }

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) malformed(std::string(what) + ": not finite");
  return v;
}

bool flag(const json& j, const char* what) {
  if (!j.is_boolean()) malformed(std::string(what) + ": expected true/false");
  return j.get<bool>();
}

template <int N>
Eigen::Matrix<double, N, 1> vector(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) {
    malformed(std::string(what) + ": expected " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = number(j[i], what);
  return v;
}

StylusSample parse_stylus(const json& j) {
  StylusSample s;
  const json& dev = field(j, "device");
  if (!dev.is_string()) malformed("device: expected a string");
  try {
    s.device = device_from_string(dev.get<std::string>());
  } catch (const ParseError& e) {
    malformed(e.what());
  }
  s.pose.translation = vector<3>(field(j, "position"), "position");
  const Eigen::Vector4d wxyz = vector<4>(field(j, "orientation"), "orientation");
  const double n = wxyz.norm();
  if (n < 1e-6) malformed("orientation: zero quaternion");
  const Eigen::Vector4d u = wxyz / n;
  s.pose.rotation = rotation_from_quaternion(Quaternion(u[0], u[1], u[2], u[3]));
  const json& buttons = field(j, "buttons");
  if (!buttons.is_object()) malformed("buttons: expected an object");
  s.button_manip = flag(field(buttons, "manip"), "buttons.manip");
  s.button_vehicle = flag(field(buttons, "vehicle"), "buttons.vehicle");
  s.timestamp = number(field(j, "t"), "t");
  return s;
}

json vec_json(const auto& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json envelope(const char* type) { return json{{"v", kProtocolVersion}, {"type", type}}; }

json snapshot_json(const Snapshot& s) {
  json j = envelope("snapshot");
  j["seq"] = s.seq;
  j["tick"] = s.tick;
  j["time"] = s.time;
  j["vehicle"] = {{"position", vec_json(s.vehicle_position)}, {"yaw", s.vehicle_yaw}};
  json arms = json::object();
  for (int i = 0; i < 2; ++i) {
    const ArmSnapshot& a = s.arms[i];
    json arm{{"q", vec_json(a.q)},
             {"q_cmd", vec_json(a.q_cmd)},
             {"ee", transform_json(a.ee)},
             {"desired", a.desired ? transform_json(*a.desired) : json(nullptr)},
             {"gripper", a.gripper},
             {"clutched", a.clutched}};
    arms[std::string(to_string(static_cast<Device>(i)))] = std::move(arm);
  }
  j["arms"] = std::move(arms);
  j["grasp"] = s.caged ? "caged" : "free";
  json objects = json::array();
  for (const SceneObject& o : s.objects) {
    objects.push_back({{"id", o.id},
                       {"pose", transform_json(o.pose)},
                       {"half_extents", vec_json(o.half_extents)},
                       {"graspable", o.graspable}});
  }
  j["objects"] = std::move(objects);
  j["mode"] = std::string(to_string(s.mode));
  j["counters"] = {{"dropped_samples", s.dropped_samples}, {"safety_stops", s.safety_stops}};
  j["flags"] = {{"limited", s.limited}, {"damped", s.damped}};
  return j;
}

}  // namespace

json transform_json(const Transform& t) {
  const Quaternion q = quaternion_from_rotation(t.rotation);
  return {{"position", vec_json(t.translation)}, {"orientation", {q.w(), q.x(), q.y(), q.z()}}};
}

InboundMessage parse_inbound(const json& j) {
  if (!j.is_object()) malformed("expected a JSON object");
  const json& v = field(j, "v");
  if (!v.is_number_integer() || v.get<int>() != kProtocolVersion) {
    malformed("unsupported protocol version");
  }
  const json& type = field(j, "type");
  if (!type.is_string()) malformed("type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "stylus") return parse_stylus(j);
  if (t == "mode_query") return ModeQuery{};
  if (t == "config_query") return ConfigQuery{};
  malformed("unknown message type '" + t + "'");
}

InboundMessage parse_inbound(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) malformed("not valid JSON");
  return parse_inbound(j);
}

json to_json(const InboundMessage& msg) {
  if (const auto* s = std::get_if<StylusSample>(&msg)) {
    json j = envelope("stylus");
    const Quaternion q = quaternion_from_rotation(s->pose.rotation);
    j["device"] = std::string(to_string(s->device));
    j["position"] = vec_json(s->pose.translation);
    j["orientation"] = {q.w(), q.x(), q.y(), q.z()};
    j["buttons"] = {{"manip", s->button_manip}, {"vehicle", s->button_vehicle}};
    j["t"] = s->timestamp;
    return j;
  }
  if (std::holds_alternative<ModeQuery>(msg)) return envelope("mode_query");
  return envelope("config_query");
}

json to_json(const OutboundMessage& msg) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Snapshot>) {
          return snapshot_json(m);
        } else if constexpr (std::is_same_v<T, TeleopEvent>) {
          json j = envelope("event");
          j["event"] = std::string(to_string(m.kind));
          j["device"] = m.device ? json(std::string(to_string(*m.device))) : json(nullptr);
          return j;
        } else if constexpr (std::is_same_v<T, Ack>) {
          return envelope("ack");
        } else if constexpr (std::is_same_v<T, ErrorReply>) {
          json j = envelope("error");
          j["message"] = m.message;
          return j;
        } else if constexpr (std::is_same_v<T, ModeReply>) {
          json j = envelope("mode");
          j["mode"] = std::string(to_string(m.mode));
          return j;
        } else {
          json j = envelope("config");
          j["config"] = m.config;
          return j;
        }
      },
      msg);
}

std::string encode(const OutboundMessage& msg) { return to_json(msg).dump(); }

}  // namespace uvms::wire
