#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "uvms/telemetry.hpp"

namespace uvms {

struct ChannelStats {
  double rms = 0.0;
  double max = 0.0;
};

/// Commanded-versus-actual tracking error of one arm.
struct ArmErrorReport {
  std::size_t active_rows = 0;
  std::array<ChannelStats, kJointCount> joints;  // |q_cmd - q|, rad
  std::array<ChannelStats, 3> axes;              // ee position, vehicle frame, m
  ChannelStats orientation;                      // rad
  std::array<int, 3> axis_ranking{0, 1, 2};      // by RMS, largest first; ties keep x, y, z order
  int dominant_joint = 0;                        // 0-based, largest RMS, ties to the lower index
};

struct ErrorReport {
  std::size_t rows = 0;
  std::array<ArmErrorReport, 2> arms;
};

/// A row counts for an arm when the mode has it clutched or its q_cmd moved
/// since the previous row. Throws ValidationError on empty input.
ErrorReport analyze(const std::vector<TelemetryRecord>& rows);

std::string report_text(const ErrorReport& report);
nlohmann::json report_json(const ErrorReport& report);

/// report.txt, report.json and <arm>_errors.csv in `dir`, created if needed.
void write_report(const std::vector<TelemetryRecord>& rows, const ErrorReport& report,
                  const std::filesystem::path& dir);

}  // namespace uvms
