#include "uvms/session_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uvms/chain_config.hpp"
#include "yaml_util.hpp"

namespace uvms {

namespace {

constexpr std::array<const char*, 2> kArmKeys = {"left", "right"};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

JointVector joint_vector(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence() || node.size() != kJointCount) {
    throw ParseError(what + ": expected " + std::to_string(kJointCount) + " values");
  }
  JointVector q;
  for (int j = 0; j < kJointCount; ++j) q[j] = yaml::scalar<double>(node[j], what);
  return q;
}

void parse_arm(YAML::Node node, const std::filesystem::path& base_dir, ArmConfig& arm,
               const std::string& key) {
  if (!node.IsMap()) throw ParseError("arms." + key + ": expected a map");
  YAML::Node chain = node["chain"];
  if (!chain) throw ParseError("arms." + key + ".chain is required");
  if (chain.IsScalar()) {
    const std::filesystem::path p = base_dir / yaml::scalar<std::string>(chain, "chain");
    // Inline the file so the resolved document is self-contained.
    node["chain"] = yaml::parse(read_file(p));
    chain = node["chain"];
  }
  arm.chain = yaml::chain(chain);
  if (node["initial_q"]) arm.initial_q = joint_vector(node["initial_q"], "arms." + key + ".initial_q");
  if (node["registration"]) {
    arm.registration.rov_from_haptic = yaml::transform(node["registration"], "registration");
  }
}

void parse_rate_limits(const YAML::Node& n, RateLimits& r) {
  r.v_max = yaml::scalar_or(n, "v_max", r.v_max);
  r.v_min = yaml::scalar_or(n, "v_min", r.v_min);
  r.w_max = yaml::scalar_or(n, "w_max", r.w_max);
  r.w_min = yaml::scalar_or(n, "w_min", r.w_min);
  r.pos_threshold = yaml::scalar_or(n, "pos_threshold", r.pos_threshold);
  r.ori_threshold = yaml::scalar_or(n, "ori_threshold", r.ori_threshold);
  r.pos_ratio = yaml::scalar_or(n, "pos_ratio", r.pos_ratio);
  r.ori_ratio = yaml::scalar_or(n, "ori_ratio", r.ori_ratio);
  r.damping_band = yaml::scalar_or(n, "damping_band", r.damping_band);
  r.damping_max = yaml::scalar_or(n, "damping_max", r.damping_max);
}

void parse_sim(const YAML::Node& n, SimParams& s) {
  s.vehicle_tau = yaml::scalar_or(n, "vehicle_tau", s.vehicle_tau);
  s.joint_tau = yaml::scalar_or(n, "joint_tau", s.joint_tau);
  if (n["joint_disturbance"]) s.joint_disturbance = joint_vector(n["joint_disturbance"], "sim.joint_disturbance");
  s.gripper_rate = yaml::scalar_or(n, "gripper_rate", s.gripper_rate);
  s.cage_radius = yaml::scalar_or(n, "cage_radius", s.cage_radius);
  s.grip_closed = yaml::scalar_or(n, "grip_closed", s.grip_closed);
  s.grip_release = yaml::scalar_or(n, "grip_release", s.grip_release);
  s.joint_noise = yaml::scalar_or(n, "joint_noise", s.joint_noise);
  s.seed = yaml::scalar_or<std::uint64_t>(n, "seed", s.seed);
}

void parse_world(const YAML::Node& n, SessionConfig& c) {
  if (const YAML::Node v = n["vehicle"]) {
    if (v["position"]) c.initial_vehicle.position = yaml::vec3(v["position"], "world.vehicle.position");
    c.initial_vehicle.yaw = yaml::scalar_or(v, "yaw", 0.0);
  }
  if (const YAML::Node objects = n["objects"]) {
    if (!objects.IsSequence()) throw ParseError("world.objects: expected a list");
    for (const YAML::Node& o : objects) {
      SceneObject obj;
      obj.id = yaml::scalar<std::string>(o["id"], "object id");
      if (o["pose"]) obj.pose = yaml::transform(o["pose"], "object pose");
      obj.half_extents = yaml::vec3(o["half_extents"], "object half_extents");
      obj.graspable = yaml::scalar_or(o, "graspable", true);
      c.objects.push_back(obj);
    }
  }
}

}  // namespace

std::uint64_t SessionConfig::broadcast_every() const {
  return static_cast<std::uint64_t>(std::max(1.0, std::round(tick_rate / broadcast_rate)));
}

std::uint64_t SessionConfig::safety_timeout_ticks() const {
  return static_cast<std::uint64_t>(std::max(1.0, std::round(safety_timeout * tick_rate)));
}

WorldModel SessionConfig::world_model() const {
  WorldModel m{{arms[0].chain, arms[1].chain}, rate_limits, sim};
  m.limits.dt = dt();
  return m;
}

WorldState SessionConfig::initial_world_state() const {
  return initial_world(world_model(), {arms[0].initial_q, arms[1].initial_q}, initial_vehicle,
                       objects);
}

void SessionConfig::validate() const {
  if (!(tick_rate > 0.0 && broadcast_rate > 0.0)) throw ConfigError("rates must be positive");
  if (broadcast_rate > tick_rate) throw ConfigError("broadcast_rate must not exceed tick_rate");
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
  if (!(workspace_scale > 0.0)) throw ConfigError("workspace_scale must be positive");
  if (!(safety_timeout > 0.0)) throw ConfigError("safety_timeout must be positive");
  try {
    rate_limits.validate();
    vehicle_teleop.validate();
    sim.validate();
    for (const ArmConfig& arm : arms) {
      arm.chain.validate();
      if (!is_rotation(arm.registration.rov_from_haptic.rotation)) {
        throw ValidationError("registration is not a rigid transform");
      }
    }
    (void)initial_world_state();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

SessionConfig load_session_config(std::string_view yaml_text, const std::filesystem::path& base_dir) {
  SessionConfig c;
  try {
    YAML::Node root = yaml::parse(yaml_text);
    if (!root.IsMap()) throw ParseError("config: expected a map at top level");

    c.tick_rate = yaml::scalar_or(root, "tick_rate", c.tick_rate);
    c.broadcast_rate = yaml::scalar_or(root, "broadcast_rate", c.broadcast_rate);
    c.port = yaml::scalar_or(root, "port", c.port);
    c.workspace_scale = yaml::scalar_or(root, "workspace_scale", c.workspace_scale);
    c.safety_timeout = yaml::scalar_or(root, "safety_timeout", c.safety_timeout);
    c.telemetry_path = yaml::scalar_or<std::string>(root, "telemetry", "");
    c.scenario_path = yaml::scalar_or<std::string>(root, "scenario", "");
    if (!c.scenario_path.empty()) c.scenario_path = (base_dir / c.scenario_path).lexically_normal().string();

    YAML::Node arms = root["arms"];
    if (!arms || !arms.IsMap()) throw ParseError("config: 'arms' with 'left' and 'right' is required");
    for (int i = 0; i < 2; ++i) {
      if (!arms[kArmKeys[i]]) throw ParseError(std::string("config: arms.") + kArmKeys[i] + " missing");
      parse_arm(arms[kArmKeys[i]], base_dir, c.arms[i], kArmKeys[i]);
    }
    if (const YAML::Node n = root["rate_limits"]) parse_rate_limits(n, c.rate_limits);
    if (const YAML::Node n = root["vehicle_teleop"]) {
      c.vehicle_teleop.dead_zone = yaml::scalar_or(n, "dead_zone", c.vehicle_teleop.dead_zone);
      c.vehicle_teleop.linear_speed = yaml::scalar_or(n, "linear_speed", c.vehicle_teleop.linear_speed);
      c.vehicle_teleop.yaw_rate = yaml::scalar_or(n, "yaw_rate", c.vehicle_teleop.yaw_rate);
    }
    if (const YAML::Node n = root["buttons"]) {
      c.buttons.simultaneity_window = yaml::scalar_or(n, "simultaneity_window", c.buttons.simultaneity_window);
      c.buttons.retoggle_debounce = yaml::scalar_or(n, "retoggle_debounce", c.buttons.retoggle_debounce);
    }
    if (const YAML::Node n = root["sim"]) parse_sim(n, c.sim);
    if (const YAML::Node n = root["world"]) parse_world(n, c);

    c.rate_limits.dt = c.dt();
    c.resolved_yaml = YAML::Dump(root) + "\n";
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

SessionConfig load_session_config_file(const std::filesystem::path& path) {
  return load_session_config(read_file(path), path.parent_path());
}

SessionConfig default_session_config() {
  const std::string left = serialize_chain(
      default_chain("left_arm", Transform::from_translation(Vec3(0.10, 0.15, -0.20))));
  const std::string right = serialize_chain(
      default_chain("right_arm", Transform::from_translation(Vec3(0.10, -0.15, -0.20))));
  YAML::Node root;
  root["tick_rate"] = 100;
  root["broadcast_rate"] = 20;
  root["arms"]["left"]["chain"] = yaml::parse(left);
  root["arms"]["right"]["chain"] = yaml::parse(right);
  return load_session_config(YAML::Dump(root));
}

}  // namespace uvms
