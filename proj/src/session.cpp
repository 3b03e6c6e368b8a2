#include "uvms/session.hpp"

#include <ostream>

#include "uvms/errors.hpp"

namespace uvms {

using nlohmann::json;

namespace {

json vec_json(const auto& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json chain_json(const KinematicChain& chain) {
  json joints = json::array();
  for (const Joint& j : chain.joints) {
    json limits = j.limits ? json{j.limits->lower, j.limits->upper} : json(nullptr);
    joints.push_back({{"zero_config", wire::transform_json(j.zero_config)},
                      {"axis", vec_json(j.axis)},
                      {"limits", std::move(limits)}});
  }
  return {{"name", chain.name}, {"base", wire::transform_json(chain.base)}, {"joints", std::move(joints)}};
}

InputMode derive_mode(bool vehicle, bool left, bool right) {
  if (vehicle) return InputMode::Vehicle;
  if (left && right) return InputMode::ArmBoth;
  if (left) return InputMode::ArmLeft;
  if (right) return InputMode::ArmRight;
  return InputMode::Idle;
}

}  // namespace

json config_json(const SessionConfig& c) {
  json arms = json::object();
  for (int i = 0; i < 2; ++i) {
    arms[std::string(to_string(static_cast<Device>(i)))] = {
        {"chain", chain_json(c.arms[i].chain)},
        {"initial_q", vec_json(c.arms[i].initial_q)},
        {"registration", wire::transform_json(c.arms[i].registration.rov_from_haptic)}};
  }
  const RateLimits& r = c.rate_limits;
  return {{"tick_rate", c.tick_rate},
          {"broadcast_rate", c.broadcast_rate},
          {"workspace_scale", c.workspace_scale},
          {"safety_timeout", c.safety_timeout},
          {"arms", std::move(arms)},
          {"rate_limits",
           {{"v_max", r.v_max}, {"v_min", r.v_min}, {"w_max", r.w_max}, {"w_min", r.w_min},
            {"pos_threshold", r.pos_threshold}, {"ori_threshold", r.ori_threshold},
            {"pos_ratio", r.pos_ratio}, {"ori_ratio", r.ori_ratio}, {"damping_band", r.damping_band},
            {"damping_max", r.damping_max}, {"dt", r.dt}}},
          {"vehicle_teleop",
           {{"dead_zone", c.vehicle_teleop.dead_zone},
            {"linear_speed", c.vehicle_teleop.linear_speed},
            {"yaw_rate", c.vehicle_teleop.yaw_rate}}},
          {"buttons",
           {{"simultaneity_window", c.buttons.simultaneity_window},
            {"retoggle_debounce", c.buttons.retoggle_debounce}}}};
}

Session::Session(SessionConfig config)
    : config_(std::move(config)), model_(config_.world_model()), world_(config_.initial_world_state()) {}

std::vector<wire::OutboundMessage> Session::ingest(std::string_view raw) {
  json j = json::parse(raw, nullptr, false);
  if (j.is_discarded()) {
    ++counters_.malformed_messages;
    return {wire::ErrorReply{"not valid JSON"}};
  }
  return ingest_json(j);
}

std::vector<wire::OutboundMessage> Session::ingest_json(const json& msg) {
  wire::InboundMessage parsed;
  try {
    parsed = wire::parse_inbound(msg);
  } catch (const MalformedMessage& e) {
    ++counters_.malformed_messages;
    return {wire::ErrorReply{e.what()}};
  }
  if (recorder_ != nullptr) recorder_->append(world_.tick, msg);

  if (std::holds_alternative<wire::ModeQuery>(parsed)) return {wire::ModeReply{mode_}};
  if (std::holds_alternative<wire::ConfigQuery>(parsed)) return {wire::ConfigReply{config_json(config_)}};

  const StylusSample& s = std::get<StylusSample>(parsed);
  DeviceChannel& ch = arms_[index(s.device)];
  if (s.timestamp < ch.last_accepted) {
    ++counters_.dropped_samples;
    return {};
  }
  ch.last_accepted = s.timestamp;
  ch.queue.push_back(s);
  ++counters_.accepted_samples;
  return {};
}

void Session::apply_event(const TeleopEvent& e, const StylusSample* sample,
                          std::array<bool, 2>& toggles) {
  if (!e.device) return;
  const int i = index(*e.device);
  DeviceChannel& ch = arms_[i];
  switch (e.kind) {
    case TeleopEventKind::ClutchEngaged: {
      // Anchor on the commanded pose so a re-clutch never jumps the target.
      const Transform ee = forward_kinematics(model_.chains[i], world_.arms[i].q_cmd).ee;
      ch.clutch = begin_clutch(*sample, ee, config_.arms[i].registration, config_.workspace_scale);
      break;
    }
    case TeleopEventKind::ClutchReleased:
      ch.clutch.active = false;
      ch.desired.reset();
      break;
    case TeleopEventKind::GripperToggled:
      toggles[i] = !toggles[i];
      break;
    default:
      break;
  }
}

TickResult Session::tick() {
  TickResult result;
  std::array<bool, 2> toggles{false, false};
  const std::uint64_t timeout = config_.safety_timeout_ticks();

  for (int i = 0; i < 2; ++i) {
    DeviceChannel& ch = arms_[i];
    while (!ch.queue.empty()) {
      const StylusSample s = ch.queue.front();
      ch.queue.pop_front();
      ButtonUpdate up;
      try {
        up = update_buttons(ch.buttons, s, config_.buttons);
      } catch (const OutOfOrderTimestamp&) {
        ++counters_.dropped_samples;
        continue;
      }
      ch.buttons = up.state;
      ch.latest = s;
      ch.last_sample_tick = world_.tick;
      for (const TeleopEvent& e : up.events) {
        apply_event(e, &s, toggles);
        result.events.push_back(e);
      }
    }
    using Phase = DeviceButtonState::Phase;
    const bool holding = ch.buttons.phase == Phase::Clutch || ch.buttons.phase == Phase::VehicleHold;
    if (holding && world_.tick - ch.last_sample_tick >= timeout) {
      const ButtonUpdate up = force_release(ch.buttons, static_cast<Device>(i));
      ch.buttons = up.state;
      ++counters_.safety_stops;
      for (const TeleopEvent& e : up.events) {
        apply_event(e, nullptr, toggles);
        result.events.push_back(e);
      }
    }
  }

  const bool want_vehicle = arms_[0].buttons.vehicle_request() && arms_[1].buttons.vehicle_request() &&
                            arms_[0].latest && arms_[1].latest;
  if (want_vehicle && !vehicle_mode_) {
    for (int i = 0; i < 2; ++i) vehicle_anchor_[i] = arms_[i].latest->pose.translation;
    result.events.push_back({TeleopEventKind::VehicleModeEntered, std::nullopt});
  } else if (!want_vehicle && vehicle_mode_) {
    result.events.push_back({TeleopEventKind::VehicleModeExited, std::nullopt});
  }
  vehicle_mode_ = want_vehicle;

  StepInputs inputs;
  for (int i = 0; i < 2; ++i) {
    DeviceChannel& ch = arms_[i];
    if (ch.clutch.active && ch.buttons.clutch_engaged() && ch.latest) {
      ch.desired = desired_ee_pose(ch.clutch, *ch.latest);
      inputs.arm_targets[i] = ch.desired;
    }
  }
  vehicle_cmd_ = {};
  if (vehicle_mode_) {
    vehicle_cmd_ = vehicle_command(
        displacement_vector(vehicle_anchor_[0], arms_[0].latest->pose.translation),
        displacement_vector(vehicle_anchor_[1], arms_[1].latest->pose.translation),
        config_.vehicle_teleop, config_.arms[0].registration.rov_from_haptic.rotation);
  }
  inputs.vehicle_cmd = vehicle_cmd_;
  inputs.gripper_toggle = toggles;
  mode_ = derive_mode(vehicle_mode_, arms_[0].buttons.clutch_engaged(), arms_[1].buttons.clutch_engaged());
  inputs.mode = mode_;

  StepOutput out = step_world(model_, world_, inputs, config_.dt());
  world_ = std::move(out.world);
  last_flags_ = out.flags;
  counters_.limited_ticks += out.flags.limited ? 1 : 0;
  counters_.damped_ticks += out.flags.damped ? 1 : 0;
  counters_.non_finite_ticks += out.flags.non_finite ? 1 : 0;
  result.record = out.record;
  result.flags = out.flags;

  if (world_.tick % config_.broadcast_every() == 0) {
    result.snapshot = snapshot();
    result.snapshot->seq = ++seq_;
    ++counters_.snapshots;
  }
  return result;
}

wire::Snapshot Session::snapshot() const {
  wire::Snapshot s;
  s.seq = seq_;
  s.tick = world_.tick;
  s.time = world_.time;
  s.vehicle_position = world_.vehicle.position;
  s.vehicle_yaw = world_.vehicle.yaw;
  for (int i = 0; i < 2; ++i) {
    const ManipulatorSimState& arm = world_.arms[i];
    wire::ArmSnapshot& a = s.arms[i];
    a.q = arm.q;
    a.q_cmd = arm.q_cmd;
    a.ee = forward_kinematics(model_.chains[i], arm.q).ee;
    a.clutched = arms_[i].buttons.clutch_engaged();
    if (a.clutched && arms_[i].desired) a.desired = arms_[i].desired->to_transform();
    a.gripper = arm.gripper;
  }
  s.caged = world_.grasp.caged();
  s.objects = world_.objects;
  s.mode = mode_;
  s.dropped_samples = counters_.dropped_samples;
  s.safety_stops = counters_.safety_stops;
  s.limited = last_flags_.limited;
  s.damped = last_flags_.damped;
  return s;
}

RunSummary run_log(const SessionConfig& config, const InputLog& log, std::ostream* telemetry,
                   InputLogWriter* recorder) {
  Session session(config);
  session.record_to(recorder);
  std::optional<TelemetryWriter> writer;
  if (telemetry != nullptr) writer.emplace(*telemetry);

  RunSummary summary;
  std::size_t next = 0;
  while (session.world().tick < log.end_tick) {
    while (next < log.entries.size() && log.entries[next].tick <= session.world().tick) {
      session.ingest_json(log.entries[next].msg);
      ++next;
    }
    const TickResult r = session.tick();
    if (writer) writer->write(r.record);
    summary.events += r.events.size();
    summary.flagged = summary.flagged || r.flags.non_finite || r.flags.limited;
  }
  if (recorder != nullptr) recorder->finish(log.end_tick);
  if (telemetry != nullptr) telemetry->flush();

  summary.ticks = session.world().tick;
  summary.counters = session.counters();
  summary.final_world = session.world();
  summary.flagged = summary.flagged || summary.counters.safety_stops > 0;
  return summary;
}

}  // namespace uvms
