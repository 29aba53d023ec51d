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

#ifndef UAVSEC_CLI_CONFIG_HPP
#define UAVSEC_CLI_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uavsec/harness.hpp"

namespace uavsec::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitInfeasible = 3,
    kExitVerification = 4,
    kExitIo = 5,
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "<x>dBm" or plain watts. Result in watts, must be positive.
double parse_power(std::string_view text, std::string_view field);
/// "<x>dB" or plain linear. Result linear, must be positive.
double parse_ratio(std::string_view text, std::string_view field);

/// Comma list of sweep values in the display unit of `axis`. Accepts
/// "a,b,...,c" (arithmetic continuation) and "lo..hi" (unit steps). A unit
/// suffix on the last token applies to every token without one.
std::vector<double> parse_sweep_values(std::string_view text, SweepAxis axis,
                                       std::string_view field = "sweep.values");

/// "M=2..7" style shorthand.
SweepSpec parse_sweep_expr(std::string_view text);

std::vector<int> parse_int_list(std::string_view text, std::string_view field);

/// Table defaults for every missing key; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Raw command-line overrides, applied on top of the config file.
struct Flags {
    std::optional<std::string> num_uts, num_urs, num_ues, quota;
    std::optional<std::string> power, noise, threshold, alpha, bandwidth;
    std::optional<int> repetitions;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::vector<std::string> stage1, stage2;
    std::optional<std::string> sweep;           ///< "M=2..7"
    std::optional<std::string> axis;
    std::optional<std::string> values;
    std::optional<std::string> quota_schedule;  ///< "6,4,3,3,3,2"
};

/// Loads `file` (if any), applies `flags`, validates. Throws ConfigError
/// or InfeasibleError naming the field; IoError if the file is unreadable.
ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file, const Flags& flags);

}  // namespace uavsec::cli

#endif  // UAVSEC_CLI_CONFIG_HPP
