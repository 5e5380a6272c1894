#include "exo/records.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exo/errors.hpp"

#ifndef EXO_VERSION
#define EXO_VERSION "unknown"
#endif

namespace exo {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw InvalidInput("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string_view code_version() noexcept { return EXO_VERSION; }

std::string format_csv(std::vector<RunRecord> records) {
  sort_records(records);
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    if (r.algorithm.find(',') != std::string::npos || r.experiment.find(',') != std::string::npos) {
      throw InvalidInput("format_csv: labels must not contain commas");
    }
    out += r.experiment;
    out += ',';
    out += r.algorithm;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.episode);
    for (double v : {r.instant_regret, r.cumulative_regret, r.model_error, r.wall_time_ms}) {
      out += ',';
      out += fmt(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<RunRecord> parse_csv(std::string_view text) {
  std::vector<RunRecord> out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader) throw InvalidInput("csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw InvalidInput("csv line " + std::to_string(line_no) + ": expected 8 fields");
    RunRecord r;
    r.experiment = f[0];
    r.algorithm = f[1];
    r.seed = std::strtoull(f[2].c_str(), nullptr, 10);
    r.episode = std::atoi(f[3].c_str());
    r.instant_regret = to_double(f[4], line_no);
    r.cumulative_regret = to_double(f[5], line_no);
    r.model_error = to_double(f[6], line_no);
    r.wall_time_ms = to_double(f[7], line_no);
    out.push_back(std::move(r));
  }
  if (line_no == 0) throw InvalidInput("csv: missing header");
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failed", path);
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
  write_text_file(path, format_csv(records));
}

std::vector<RunRecord> read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

void write_metadata(const ExperimentConfig& cfg, const std::string& path, const std::vector<std::string>& notes) {
  nlohmann::json doc;
  doc["code_version"] = std::string(code_version());
  doc["config"] = nlohmann::json::parse(config_to_json(cfg));
  doc["notes"] = notes;
  write_text_file(path, doc.dump(2) + "\n");
}

ExperimentConfig read_metadata(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": not valid JSON: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("config")) throw ConfigError(path + ": missing config");
  return parse_config(doc.at("config").dump());
}

void write_peg_summary(const PegSummary& s, const std::string& path) {
  nlohmann::json doc = {{"runs", s.runs},
                        {"rounds", s.rounds},
                        {"mean_regret", s.mean_regret},
                        {"se_regret", s.se_regret},
                        {"barrier_frequency", s.barrier_frequency},
                        {"barrier_probability", s.barrier_probability},
                        {"regret_lower_bound", s.regret_lower_bound},
                        {"mean_estimation_error", s.mean_estimation_error}};
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace exo
