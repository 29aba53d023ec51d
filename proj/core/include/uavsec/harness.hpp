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

#ifndef UAVSEC_HARNESS_HPP
#define UAVSEC_HARNESS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavsec/geometry.hpp"
#include "uavsec/matching.hpp"
#include "uavsec/ut_set.hpp"
#include "uavsec/utility.hpp"

namespace uavsec {

enum class Stage1Scheme { PMA, DAMS, RMS };
enum class Stage2Scheme { OCFA, AS, FGS, DCS };

std::string_view to_string(Stage1Scheme s) noexcept;
std::string_view to_string(Stage2Scheme s) noexcept;
std::optional<Stage1Scheme> parse_stage1(std::string_view name) noexcept;
std::optional<Stage2Scheme> parse_stage2(std::string_view name) noexcept;

struct SchemePair {
    Stage1Scheme stage1 = Stage1Scheme::PMA;
    Stage2Scheme stage2 = Stage2Scheme::OCFA;

    /// "PMA+OCFA" etc.
    std::string label() const;
    friend bool operator==(const SchemePair&, const SchemePair&) = default;
};

enum class SweepAxis { None, N, M, S, Q, P0, Gamma, Sigma2, Alpha, W };

std::string_view to_string(SweepAxis a) noexcept;
std::optional<SweepAxis> parse_axis(std::string_view name) noexcept;

/// Values are in display units: dBm for P0 and sigma2, dB for gamma, Hz
/// for W, plain numbers otherwise.
struct SweepSpec {
    SweepAxis axis = SweepAxis::None;
    std::vector<double> values;
    /// Optional per-point quota, same length as `values`.
    std::vector<int> quota_schedule;
};

struct ExperimentConfig {
    DeploymentConfig deployment{};
    int repetitions = 100;
    std::uint64_t master_seed = 1;
    std::vector<Stage1Scheme> stage1{Stage1Scheme::PMA};
    std::vector<Stage2Scheme> stage2{Stage2Scheme::OCFA, Stage2Scheme::FGS, Stage2Scheme::DCS,
                                     Stage2Scheme::AS};
    SweepSpec sweep{};
    int dcs_max_q = 6;
    MatchingOptions matching{};
    int threads = 1;  ///< 0 = hardware concurrency

    /// Cartesian product stage1 x stage2, stage-1 major.
    std::vector<SchemePair> schemes() const;

    /// Deployment of each sweep point (one point when there is no sweep).
    std::vector<DeploymentConfig> sweep_points() const;
    /// Display value of each sweep point (0 when there is no sweep).
    std::vector<double> sweep_values() const;

    /// Throws ConfigError / InfeasibleError naming the offending field,
    /// including M*Q >= N at every sweep point.
    void validate() const;
};

/// Per-trial seeds. Every scheme and every sweep point at one trial index
/// shares them, so comparisons across schemes and sweep values are paired.
struct TrialSeeds {
    std::uint64_t trial = 0;
    std::uint64_t scenario = 0;
    std::uint64_t channels = 0;
    std::uint64_t random_matching = 0;
    std::uint64_t formation = 0;
};
TrialSeeds trial_seeds(std::uint64_t master_seed, int trial_index) noexcept;

struct TrialMetrics {
    SchemePair scheme;
    std::vector<Utility> per_ut;
    Utility total = Utility::infeasible();
    double average = 0.0;         ///< total / N; meaningless when sentinel
    double social_welfare = 0.0;  ///< stage-1 welfare of this scheme's matching
    bool sentinel = false;        ///< total is infeasible; excluded from statistics
    std::vector<int> matching;    ///< UR of each UT
    std::vector<UtSet> structure; ///< coalitions (OCFA, AS), groups (FGS), partition (DCS)
    std::optional<std::string> error;  ///< set when this scheme threw
    double wall_seconds = 0.0;
};

struct TrialRecord {
    int point_index = 0;
    int trial_index = 0;
    TrialSeeds seeds{};
    Scenario scenario{};
    std::vector<TrialMetrics> metrics;  ///< one per scheme pair
    std::optional<std::string> error;   ///< set when the trial threw
    double wall_seconds = 0.0;
};

/// Samples the layout, realizes channels, runs every configured stage-1
/// scheme and every stage-2 scheme on top of it.
TrialRecord run_trial(const ExperimentConfig& config, int point_index, int trial_index);

struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation, 0 when n < 2
    int n = 0;
};

inline constexpr std::array<std::string_view, 3> kMetricNames{"total_utility", "avg_utility",
                                                              "social_welfare"};

struct SchemeSummary {
    SchemePair scheme;
    std::array<MetricStats, 3> metrics;   ///< indexed like kMetricNames
    std::array<std::vector<double>, 3> samples;  ///< per trial; NaN when excluded
    int trials = 0;
    int failed = 0;    ///< trials that threw
    int sentinel = 0;  ///< trials with infeasible total
};

struct PointResult {
    double sweep_value = 0.0;
    DeploymentConfig deployment{};
    std::vector<SchemeSummary> schemes;

    const SchemeSummary& scheme(const SchemePair& s) const;
};

struct ExperimentResult {
    SweepAxis axis = SweepAxis::None;
    std::vector<PointResult> points;
};

using TrialObserver = std::function<void(const TrialRecord&)>;

/// Runs `repetitions` trials at every sweep point. Trials may execute
/// concurrently; aggregation and the observer run in trial-index order.
ExperimentResult run_experiment(const ExperimentConfig& config, const TrialObserver& observer = {});

/// Quadrants (a) RMS+AS, (b) PMA+AS, (c) RMS+OCFA, (d) PMA+OCFA on shared
/// layouts.
std::array<ExperimentResult, 4> ablation_two_stage(const ExperimentConfig& config,
                                                   const TrialObserver& observer = {});

MetricStats summarize(const std::vector<double>& samples);

}  // namespace uavsec

#endif  // UAVSEC_HARNESS_HPP
