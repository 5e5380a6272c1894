#pragma once

// CSV serialization of run records and the JSON metadata sidecar.

#include <string>
#include <string_view>
#include <vector>

#include "exo/config.hpp"
#include "exo/experiment.hpp"

namespace exo {

inline constexpr std::string_view kCsvHeader =
    "experiment,algorithm,seed,episode,instant_regret,cumulative_regret,model_error,wall_time_ms";

/// CSV text, rows sorted by (algorithm, seed, episode), floats with "%.9g".
std::string format_csv(std::vector<RunRecord> records);
std::vector<RunRecord> parse_csv(std::string_view text);

/// Throws IoError naming the path.
void write_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_csv(const std::string& path);

/// Sidecar with the materialized config, code version and free-form notes.
void write_metadata(const ExperimentConfig& cfg, const std::string& path,
                    const std::vector<std::string>& notes = {});
ExperimentConfig read_metadata(const std::string& path);

void write_peg_summary(const PegSummary& summary, const std::string& path);

/// Version string compiled into the library.
std::string_view code_version() noexcept;

/// Whole-file helpers, throwing IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace exo
