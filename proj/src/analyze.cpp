#include "uvms/analyze.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "uvms/errors.hpp"
#include "uvms/resolved_rate.hpp"

namespace uvms {

namespace {

constexpr std::array<const char*, 2> kArmNames = {"left", "right"};
constexpr std::array<const char*, 3> kAxisNames = {"x", "y", "z"};

struct RowError {
  JointVector joints;
  Vec3 position;
  double orientation;
};

RowError row_error(const ArmTelemetry& a) {
  return {(a.q_cmd - a.q).cwiseAbs(), a.ee_cmd.translation - a.ee_actual.translation,
          orientation_error(a.ee_cmd.rotation, a.ee_actual.rotation).norm()};
}

bool row_active(const std::vector<TelemetryRecord>& rows, std::size_t k, int arm) {
  if (arm_clutched(rows[k].mode, arm)) return true;
  return k > 0 && rows[k].arms[arm].q_cmd != rows[k - 1].arms[arm].q_cmd;
}

class Accumulator {
 public:
  void add(double v) {
    sq_ += v * v;
    max_ = std::max(max_, std::abs(v));
  }
  ChannelStats stats(std::size_t n) const {
    return n == 0 ? ChannelStats{} : ChannelStats{std::sqrt(sq_ / static_cast<double>(n)), max_};
  }

 private:
  double sq_ = 0.0;
  double max_ = 0.0;
};

ArmErrorReport analyze_arm(const std::vector<TelemetryRecord>& rows, int arm) {
  std::array<Accumulator, kJointCount> joints;
  std::array<Accumulator, 3> axes;
  Accumulator orientation;
  ArmErrorReport r;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!row_active(rows, k, arm)) continue;
    const RowError e = row_error(rows[k].arms[arm]);
    for (int j = 0; j < kJointCount; ++j) joints[j].add(e.joints[j]);
    for (int a = 0; a < 3; ++a) axes[a].add(e.position[a]);
    orientation.add(e.orientation);
    ++r.active_rows;
  }
  for (int j = 0; j < kJointCount; ++j) r.joints[j] = joints[j].stats(r.active_rows);
  for (int a = 0; a < 3; ++a) r.axes[a] = axes[a].stats(r.active_rows);
  r.orientation = orientation.stats(r.active_rows);
  std::stable_sort(r.axis_ranking.begin(), r.axis_ranking.end(),
                   [&](int a, int b) { return r.axes[a].rms > r.axes[b].rms; });
  for (int j = 1; j < kJointCount; ++j) {
    if (r.joints[j].rms > r.joints[r.dominant_joint].rms) r.dominant_joint = j;
  }
  return r;
}

}  // namespace

ErrorReport analyze(const std::vector<TelemetryRecord>& rows) {
  if (rows.empty()) throw ValidationError("telemetry has no rows");
  ErrorReport report;
  report.rows = rows.size();
  for (int arm = 0; arm < 2; ++arm) report.arms[arm] = analyze_arm(rows, arm);
  return report;
}

std::string report_text(const ErrorReport& report) {
  std::string out = fmt::format("Tracking error report ({} telemetry rows)\n", report.rows);
  auto it = std::back_inserter(out);
  for (int arm = 0; arm < 2; ++arm) {
    const ArmErrorReport& r = report.arms[arm];
    fmt::format_to(it, "\n{} arm: {} active rows\n", kArmNames[arm], r.active_rows);
    if (r.active_rows == 0) continue;
    fmt::format_to(it, "  joint   rms [rad]      max [rad]\n");
    for (int j = 0; j < kJointCount; ++j) {
      fmt::format_to(it, "  {:<5}   {:<12.6e}   {:.6e}\n", j + 1, r.joints[j].rms, r.joints[j].max);
    }
    fmt::format_to(it, "  axis    rms [m]        max [m]\n");
    for (int a = 0; a < 3; ++a) {
      fmt::format_to(it, "  {:<5}   {:<12.6e}   {:.6e}\n", kAxisNames[a], r.axes[a].rms, r.axes[a].max);
    }
    fmt::format_to(it, "  orientation rms {:.6e} rad, max {:.6e} rad\n", r.orientation.rms,
                   r.orientation.max);
    fmt::format_to(it, "  axis ranking by rms: {} > {} > {}\n", kAxisNames[r.axis_ranking[0]],
                   kAxisNames[r.axis_ranking[1]], kAxisNames[r.axis_ranking[2]]);
    fmt::format_to(it, "  largest joint rms: joint {}\n", r.dominant_joint + 1);
  }
  return out;
}

nlohmann::json report_json(const ErrorReport& report) {
  using nlohmann::json;
  auto stats = [](const ChannelStats& s) { return json{{"rms", s.rms}, {"max", s.max}}; };
  json arms = json::object();
  for (int arm = 0; arm < 2; ++arm) {
    const ArmErrorReport& r = report.arms[arm];
    json joints = json::array();
    for (const ChannelStats& s : r.joints) joints.push_back(stats(s));
    json axes = json::object();
    for (int a = 0; a < 3; ++a) axes[kAxisNames[a]] = stats(r.axes[a]);
    json ranking = json::array();
    for (int a : r.axis_ranking) ranking.push_back(kAxisNames[a]);
    arms[kArmNames[arm]] = {{"active_rows", r.active_rows},
                            {"joints", std::move(joints)},
                            {"axes", std::move(axes)},
                            {"orientation", stats(r.orientation)},
                            {"axis_ranking", std::move(ranking)},
                            {"dominant_joint", r.dominant_joint + 1}};
  }
  return {{"rows", report.rows}, {"arms", std::move(arms)}};
}

void write_report(const std::vector<TelemetryRecord>& rows, const ErrorReport& report,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  open("report.txt") << report_text(report);
  open("report.json") << report_json(report).dump(2) << '\n';
  for (int arm = 0; arm < 2; ++arm) {
    std::ofstream csv = open(std::string(kArmNames[arm]) + "_errors.csv");
    csv << "time,active";
    for (int j = 1; j <= kJointCount; ++j) csv << ",q_err" << j;
    csv << ",ee_err_x,ee_err_y,ee_err_z,ori_err\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const RowError e = row_error(rows[k].arms[arm]);
      std::string line = fmt::format("{:.12g},{}", rows[k].time, row_active(rows, k, arm) ? 1 : 0);
      for (int j = 0; j < kJointCount; ++j) {
        fmt::format_to(std::back_inserter(line), ",{:.12g}", rows[k].arms[arm].q_cmd[j] - rows[k].arms[arm].q[j]);
      }
      fmt::format_to(std::back_inserter(line), ",{:.12g},{:.12g},{:.12g},{:.12g}\n", e.position.x(),
                     e.position.y(), e.position.z(), e.orientation);
      csv << line;
    }
  }
}

}  // namespace uvms
