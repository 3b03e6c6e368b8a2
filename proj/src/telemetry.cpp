#include "uvms/telemetry.hpp"

#include <fmt/format.h>

#include <charconv>
#include <istream>
#include <ostream>

#include "uvms/errors.hpp"

namespace uvms {

namespace {

constexpr std::array<std::string_view, 2> kArmNames = {"left", "right"};

void append_pose(std::string& out, const Transform& t) {
  const Quaternion q = quaternion_from_rotation(t.rotation);
  fmt::format_to(std::back_inserter(out), ",{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}",
                 t.translation.x(), t.translation.y(), t.translation.z(), q.w(), q.x(), q.y(),
                 q.z());
}

class FieldReader {
 public:
  FieldReader(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  std::string_view next() {
    if (pos_ > line_.size()) fail("too few columns");
    const std::size_t comma = line_.find(',', pos_);
    const std::size_t end = comma == std::string_view::npos ? line_.size() : comma;
    std::string_view field = line_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return field;
  }

  double number() {
    const std::string_view f = next();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      fail("bad number '" + std::string(f) + "'");
    }
    return v;
  }

  Transform pose() {
    Transform t;
    t.translation = {number(), number(), number()};
    const double w = number(), x = number(), y = number(), z = number();
    t.rotation = rotation_from_quaternion(Quaternion(w, x, y, z));
    return t;
  }

  bool done() const { return pos_ > line_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("telemetry line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(InputMode m) {
  switch (m) {
    case InputMode::Idle: return "idle";
    case InputMode::ArmLeft: return "arm_left";
    case InputMode::ArmRight: return "arm_right";
    case InputMode::ArmBoth: return "arm_both";
    case InputMode::Vehicle: return "vehicle";
  }
  return "idle";
}

InputMode input_mode_from_string(std::string_view s) {
  for (InputMode m : {InputMode::Idle, InputMode::ArmLeft, InputMode::ArmRight, InputMode::ArmBoth,
                      InputMode::Vehicle}) {
    if (to_string(m) == s) return m;
  }
  throw ParseError("unknown mode '" + std::string(s) + "'");
}

bool arm_clutched(InputMode m, int arm) {
  if (m == InputMode::ArmBoth) return true;
  return (arm == 0 && m == InputMode::ArmLeft) || (arm == 1 && m == InputMode::ArmRight);
}

std::string telemetry_header() {
  std::string h = "time";
  for (std::string_view arm : kArmNames) {
    for (int j = 1; j <= 6; ++j) fmt::format_to(std::back_inserter(h), ",{}_q_cmd{}", arm, j);
    for (int j = 1; j <= 6; ++j) fmt::format_to(std::back_inserter(h), ",{}_q{}", arm, j);
    for (std::string_view prefix : {"ee_cmd", "ee"}) {
      for (std::string_view c : {"x", "y", "z", "qw", "qx", "qy", "qz"}) {
        fmt::format_to(std::back_inserter(h), ",{}_{}_{}", arm, prefix, c);
      }
    }
  }
  h += ",left_gripper,right_gripper";
  h += ",vehicle_x,vehicle_y,vehicle_z,vehicle_yaw";
  h += ",vehicle_cmd_vx,vehicle_cmd_vy,vehicle_cmd_vz,vehicle_cmd_yaw_rate";
  h += ",grasp,mode";
  return h;
}

std::string format_row(const TelemetryRecord& r) {
  std::string out = fmt::format("{:.12g}", r.time);
  for (const ArmTelemetry& arm : r.arms) {
    for (int j = 0; j < 6; ++j) fmt::format_to(std::back_inserter(out), ",{:.12g}", arm.q_cmd[j]);
    for (int j = 0; j < 6; ++j) fmt::format_to(std::back_inserter(out), ",{:.12g}", arm.q[j]);
    append_pose(out, arm.ee_cmd);
    append_pose(out, arm.ee_actual);
  }
  fmt::format_to(std::back_inserter(out), ",{:.12g},{:.12g}", r.gripper[0], r.gripper[1]);
  fmt::format_to(std::back_inserter(out), ",{:.12g},{:.12g},{:.12g},{:.12g}", r.vehicle_position.x(),
                 r.vehicle_position.y(), r.vehicle_position.z(), r.vehicle_yaw);
  fmt::format_to(std::back_inserter(out), ",{:.12g},{:.12g},{:.12g},{:.12g}", r.vehicle_cmd.linear.x(),
                 r.vehicle_cmd.linear.y(), r.vehicle_cmd.linear.z(), r.vehicle_cmd.yaw_rate);
  fmt::format_to(std::back_inserter(out), ",{},{}", r.caged ? "caged" : "free", to_string(r.mode));
  return out;
}

TelemetryRecord parse_row(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  FieldReader f(line, line_no);
  TelemetryRecord r;
  r.time = f.number();
  for (ArmTelemetry& arm : r.arms) {
    for (int j = 0; j < 6; ++j) arm.q_cmd[j] = f.number();
    for (int j = 0; j < 6; ++j) arm.q[j] = f.number();
    arm.ee_cmd = f.pose();
    arm.ee_actual = f.pose();
  }
  r.gripper = {f.number(), f.number()};
  r.vehicle_position = {f.number(), f.number(), f.number()};
  r.vehicle_yaw = f.number();
  r.vehicle_cmd.linear = {f.number(), f.number(), f.number()};
  r.vehicle_cmd.yaw_rate = f.number();
  const std::string_view grasp = f.next();
  if (grasp != "caged" && grasp != "free") f.fail("bad grasp status '" + std::string(grasp) + "'");
  r.caged = grasp == "caged";
  try {
    r.mode = input_mode_from_string(f.next());
  } catch (const ParseError& e) {
    f.fail(e.what());
  }
  if (!f.done()) f.fail("too many columns");
  return r;
}

std::vector<TelemetryRecord> read_telemetry(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("telemetry: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != telemetry_header()) throw ParseError("telemetry line 1: unexpected header");
  std::vector<TelemetryRecord> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    rows.push_back(parse_row(line, line_no));
  }
  return rows;
}

TelemetryWriter::TelemetryWriter(std::ostream& out) : out_(out) {
  out_ << telemetry_header() << '\n';
}

void TelemetryWriter::write(const TelemetryRecord& r) {
  out_ << format_row(r) << '\n';
  ++rows_;
}

}  // namespace uvms
