// Copyright 2026 The uavsec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UAVSEC_CLI_OUTPUT_HPP
#define UAVSEC_CLI_OUTPUT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavsec/harness.hpp"

namespace uavsec::cli {

inline constexpr const char* kCsvHeader = "sweep_value,scheme,metric,mean,std,n";

struct OutputRow {
    double sweep_value = 0.0;
    std::string scheme;
    std::string metric;
    double mean = 0.0;
    double std = 0.0;
    int n = 0;

    friend bool operator==(const OutputRow&, const OutputRow&) = default;
};

/// One row per (sweep value, scheme, metric), in sweep then scheme order.
/// Statistics with no samples are written as 0 with n = 0.
std::vector<OutputRow> make_table(const ExperimentResult& result);

/// %.17g numbers; a leading "# generated ..." comment when `timestamp`.
void write_csv(std::ostream& out, const std::vector<OutputRow>& rows, bool timestamp);
/// Inverse of write_csv; skips '#' comment lines. Throws IoError on
/// malformed input.
std::vector<OutputRow> read_csv(std::istream& in);

std::string csv_escape(const std::string& field);

nlohmann::json summary_json(const ExperimentResult& result, const ExperimentConfig& config,
                            bool timestamp);

/// One dump line: positions, matchings, structures and metrics.
nlohmann::json trial_json(const TrialRecord& record);

enum class OutputFormat { Csv, Json, Both };

/// Writes `<stem>.csv` and/or `<stem>.json` under `dir` (created if
/// needed). Throws IoError.
std::vector<std::filesystem::path> emit_results(const ExperimentResult& result,
                                                const ExperimentConfig& config,
                                                const std::filesystem::path& dir,
                                                const std::string& stem, OutputFormat format,
                                                bool timestamp);

/// $UAVSEC_OUTPUT_DIR, or the working directory.
std::filesystem::path default_output_dir();

}  // namespace uavsec::cli

#endif  // UAVSEC_CLI_OUTPUT_HPP
