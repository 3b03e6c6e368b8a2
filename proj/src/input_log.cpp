#include "uvms/input_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "uvms/errors.hpp"

namespace uvms {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "uvms-input-log";

json header_json(std::uint64_t seed, const std::optional<std::string>& config_yaml) {
  json h{{"format", kFormat}, {"version", kInputLogVersion}, {"seed", seed}};
  if (config_yaml) h["config"] = *config_yaml;
  return h;
}

std::uint64_t tick_field(const json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned()) {
    throw CorruptLog(line, std::string("'") + key + "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

}  // namespace

InputLog read_input_log(std::istream& in) {
  InputLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_footer = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (have_footer) throw CorruptLog(line_no, "content after footer");
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw CorruptLog(line_no, "not a JSON object");

    if (!have_header) {
      if (j.value("format", "") != kFormat) throw CorruptLog(line_no, "missing log header");
      const auto v = j.find("version");
      if (v == j.end() || !v->is_number_integer()) throw CorruptLog(line_no, "header lacks version");
      if (v->get<int>() != kInputLogVersion) {
        throw VersionMismatch("input log version " + std::to_string(v->get<int>()) +
                              ", expected " + std::to_string(kInputLogVersion));
      }
      if (j.contains("seed")) log.seed = tick_field(j, "seed", line_no);
      if (const auto c = j.find("config"); c != j.end()) {
        if (!c->is_string()) throw CorruptLog(line_no, "'config' must be a string");
        log.config_yaml = c->get<std::string>();
      }
      have_header = true;
      continue;
    }

    if (j.contains("end_tick")) {
      log.end_tick = tick_field(j, "end_tick", line_no);
      if (!log.entries.empty() && log.entries.back().tick > log.end_tick) {
        throw CorruptLog(line_no, "end_tick precedes the last entry");
      }
      have_footer = true;
      continue;
    }

    LogEntry e;
    e.tick = tick_field(j, "tick", line_no);
    const auto msg = j.find("msg");
    if (msg == j.end() || !msg->is_object()) throw CorruptLog(line_no, "entry lacks 'msg' object");
    e.msg = std::move(*msg);
    if (!log.entries.empty() && e.tick < log.entries.back().tick) {
      throw CorruptLog(line_no, "ticks go backwards");
    }
    log.entries.push_back(std::move(e));
  }

  if (!have_header) throw CorruptLog(line_no + 1, "empty log");
  if (!have_footer) throw CorruptLog(line_no + 1, "missing end_tick footer (truncated?)");
  return log;
}

InputLog read_input_log_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorruptLog(0, "cannot open " + path.string());
  return read_input_log(in);
}

void write_input_log(std::ostream& out, const InputLog& log) {
  InputLogWriter w(out, log.seed, log.config_yaml);
  for (const LogEntry& e : log.entries) w.append(e.tick, e.msg);
  w.finish(log.end_tick);
}

InputLogWriter::InputLogWriter(std::ostream& out, std::uint64_t seed,
                               const std::optional<std::string>& config_yaml)
    : out_(out) {
  out_ << header_json(seed, config_yaml).dump() << '\n';
}

void InputLogWriter::append(std::uint64_t tick, const json& msg) {
  if (finished_) throw Error("input log already finished");
  out_ << json{{"tick", tick}, {"msg", msg}}.dump() << '\n';
  ++entries_;
}

void InputLogWriter::finish(std::uint64_t end_tick) {
  if (finished_) return;
  out_ << json{{"end_tick", end_tick}}.dump() << '\n';
  out_.flush();
  finished_ = true;
}

}  // namespace uvms
