#pragma once

// Recorded inbound traffic, one JSON document per line:
//
//   {"format":"uvms-input-log","version":1,"seed":0,"config":"<yaml>"}
//   {"tick":12,"msg":{...inbound message...}}
//   ...
//   {"end_tick":6000}
//
// `config` is optional. Scenario files use the same layout.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uvms {

inline constexpr int kInputLogVersion = 1;

struct LogEntry {
  std::uint64_t tick = 0;  // world tick the message is applied before
  nlohmann::json msg;
};

struct InputLog {
  std::uint64_t seed = 0;
  std::optional<std::string> config_yaml;
  std::vector<LogEntry> entries;  // ticks non-decreasing
  std::uint64_t end_tick = 0;
};

/// Throws CorruptLog (with 1-based line) or VersionMismatch.
InputLog read_input_log(std::istream& in);
InputLog read_input_log_file(const std::filesystem::path& path);

void write_input_log(std::ostream& out, const InputLog& log);

/// Streams a log while a session runs; the footer is written by finish().
class InputLogWriter {
 public:
  InputLogWriter(std::ostream& out, std::uint64_t seed, const std::optional<std::string>& config_yaml);
  void append(std::uint64_t tick, const nlohmann::json& msg);
  void finish(std::uint64_t end_tick);
  std::size_t entries() const { return entries_; }

 private:
  std::ostream& out_;
  std::size_t entries_ = 0;
  bool finished_ = false;
};

}  // namespace uvms
