#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uvms/kinematics.hpp"
#include "uvms/resolved_rate.hpp"
#include "uvms/sim_env.hpp"
#include "uvms/teleop_mapping.hpp"
#include "uvms/vehicle_teleop.hpp"

namespace uvms {

struct ArmConfig {
  KinematicChain chain;
  JointVector initial_q = default_home_configuration();
  Registration registration = Registration::standard();
};

/// Everything a session needs. Loaded from a YAML document; see
/// data/config/default.yaml for the full set of keys.
struct SessionConfig {
  double tick_rate = 100.0;      // Hz
  double broadcast_rate = 20.0;  // Hz
  int port = 8801;
  std::array<ArmConfig, 2> arms;
  RateLimits rate_limits;
  VehicleTeleopConfig vehicle_teleop;
  ButtonTiming buttons;
  double workspace_scale = 1.0;
  double safety_timeout = 0.5;  // s without samples before a clutch drops
  SimParams sim;
  VehicleState initial_vehicle;
  std::vector<SceneObject> objects;
  std::string telemetry_path;
  std::string scenario_path;

  /// Self-contained YAML (chain files inlined) that reloads to this config.
  std::string resolved_yaml;

  double dt() const { return 1.0 / tick_rate; }
  std::uint64_t broadcast_every() const;
  std::uint64_t safety_timeout_ticks() const;
  WorldModel world_model() const;
  WorldState initial_world_state() const;

  /// Throws ConfigError.
  void validate() const;
};

/// Relative chain paths resolve against `base_dir`. Throws ConfigError.
SessionConfig load_session_config(std::string_view yaml_text,
                                  const std::filesystem::path& base_dir = ".");
SessionConfig load_session_config_file(const std::filesystem::path& path);

/// Two default arms mounted left/right of the vehicle centreline.
SessionConfig default_session_config();

}  // namespace uvms
