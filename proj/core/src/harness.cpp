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

#include "uavsec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "uavsec/coalition.hpp"
#include "uavsec/errors.hpp"
#include "uavsec/random.hpp"

namespace uavsec {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view name, const std::array<std::pair<std::string_view, Enum>, N>& table) {
    for (const auto& [key, value] : table)
        if (key == name) return value;
    return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, Stage1Scheme>, 3> kStage1Names{{
    {"PMA", Stage1Scheme::PMA}, {"DAMS", Stage1Scheme::DAMS}, {"RMS", Stage1Scheme::RMS}}};

constexpr std::array<std::pair<std::string_view, Stage2Scheme>, 4> kStage2Names{{
    {"OCFA", Stage2Scheme::OCFA}, {"AS", Stage2Scheme::AS}, {"FGS", Stage2Scheme::FGS},
    {"DCS", Stage2Scheme::DCS}}};

constexpr std::array<std::pair<std::string_view, SweepAxis>, 11> kAxisNames{{
    {"none", SweepAxis::None}, {"N", SweepAxis::N}, {"M", SweepAxis::M}, {"S", SweepAxis::S},
    {"R", SweepAxis::S}, {"Q", SweepAxis::Q}, {"P0", SweepAxis::P0}, {"gamma", SweepAxis::Gamma},
    {"sigma2", SweepAxis::Sigma2}, {"alpha", SweepAxis::Alpha}, {"W", SweepAxis::W}}};

bool is_count_axis(SweepAxis a) {
    return a == SweepAxis::N || a == SweepAxis::M || a == SweepAxis::S || a == SweepAxis::Q;
}

int as_count(double v, std::string_view axis) {
    if (!std::isfinite(v) || v != std::floor(v) || v < 0 || v > 1e6)
        throw ConfigError("sweep.values: axis " + std::string(axis) +
                          " needs non-negative integers, got " + std::to_string(v));
    return static_cast<int>(v);
}

DeploymentConfig apply_point(DeploymentConfig d, SweepAxis axis, double v) {
    switch (axis) {
        case SweepAxis::None: break;
        case SweepAxis::N: d.num_uts = as_count(v, "N"); break;
        case SweepAxis::M: d.num_urs = as_count(v, "M"); break;
        case SweepAxis::S: d.num_ues = as_count(v, "S"); break;
        case SweepAxis::Q: d.quota = as_count(v, "Q"); break;
        case SweepAxis::P0: d.params.power_budget = dbm_to_watts(v); break;
        case SweepAxis::Gamma: d.params.snr_threshold = db_to_linear(v); break;
        case SweepAxis::Sigma2: d.params.noise_power = dbm_to_watts(v); break;
        case SweepAxis::Alpha: d.params.path_loss_exponent = v; break;
        case SweepAxis::W: d.params.bandwidth = v; break;
    }
    return d;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matching run_stage1(Stage1Scheme s, const PreferenceTables& prefs, const Scenario& scenario,
                    const ExperimentConfig& config, const TrialSeeds& seeds) {
    switch (s) {
        case Stage1Scheme::PMA: return proposed_matching(prefs, scenario, config.matching);
        case Stage1Scheme::DAMS: return da_baseline(prefs, scenario);
        case Stage1Scheme::RMS: return random_baseline(scenario, seeds.random_matching);
    }
    throw InternalError("unknown stage-1 scheme");
}

/// Fills per_ut, total and structure.
void run_stage2(Stage2Scheme s, const CoalitionGame& game, const ExperimentConfig& config,
                const TrialSeeds& seeds, TrialMetrics& out) {
    StructureUtility u;
    switch (s) {
        case Stage2Scheme::OCFA: {
            OcfResult r = ocf_iterate(initialize_structure(game), game, {seeds.formation});
            u = game.evaluate(r.structure);
            out.structure = r.structure.coalitions();
            break;
        }
        case Stage2Scheme::AS: {
            CoalitionStructure singles = as_baseline(game.num_uts());
            u = game.evaluate(singles);
            out.structure = singles.coalitions();
            break;
        }
        case Stage2Scheme::FGS: {
            out.structure = fgs_groups(game);
            u = game.evaluate_groups(out.structure);
            break;
        }
        case Stage2Scheme::DCS: {
            DcsResult r = dcs_baseline(game, config.dcs_max_q);
            out.structure = r.partition;
            u = game.evaluate_groups(partition_groups(r.partition, game.num_uts()));
            break;
        }
    }
    out.per_ut = std::move(u.per_ut);
    out.total = u.total;
}

}  // namespace

std::string_view to_string(Stage1Scheme s) noexcept {
    for (const auto& [key, value] : kStage1Names)
        if (value == s) return key;
    return "?";
}

std::string_view to_string(Stage2Scheme s) noexcept {
    for (const auto& [key, value] : kStage2Names)
        if (value == s) return key;
    return "?";
}

std::string_view to_string(SweepAxis a) noexcept {
    for (const auto& [key, value] : kAxisNames)
        if (value == a) return key;
    return "?";
}

std::optional<Stage1Scheme> parse_stage1(std::string_view name) noexcept {
    return lookup(name, kStage1Names);
}
std::optional<Stage2Scheme> parse_stage2(std::string_view name) noexcept {
    return lookup(name, kStage2Names);
}
std::optional<SweepAxis> parse_axis(std::string_view name) noexcept {
    return lookup(name, kAxisNames);
}

std::string SchemePair::label() const {
    return std::string(to_string(stage1)) + "+" + std::string(to_string(stage2));
}

std::vector<SchemePair> ExperimentConfig::schemes() const {
    std::vector<SchemePair> out;
    for (Stage1Scheme a : stage1)
        for (Stage2Scheme b : stage2) out.push_back({a, b});
    return out;
}

std::vector<double> ExperimentConfig::sweep_values() const {
    if (sweep.axis == SweepAxis::None) return {0.0};
    return sweep.values;
}

std::vector<DeploymentConfig> ExperimentConfig::sweep_points() const {
    std::vector<DeploymentConfig> out;
    if (sweep.axis == SweepAxis::None) {
        DeploymentConfig d = deployment;
        if (!sweep.quota_schedule.empty()) d.quota = sweep.quota_schedule.front();
        out.push_back(d);
        return out;
    }
    for (std::size_t j = 0; j < sweep.values.size(); ++j) {
        DeploymentConfig d = apply_point(deployment, sweep.axis, sweep.values[j]);
        if (!sweep.quota_schedule.empty()) d.quota = sweep.quota_schedule[j];
        out.push_back(d);
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
    if (stage1.empty()) throw ConfigError("stage1: no scheme selected");
    if (stage2.empty()) throw ConfigError("stage2: no scheme selected");
    if (dcs_max_q < 2 || dcs_max_q > 6) throw ConfigError("dcs_max_q: must be in [2, 6]");
    if (threads < 0) throw ConfigError("threads: must be >= 0");
    if (sweep.axis != SweepAxis::None && sweep.values.empty())
        throw ConfigError("sweep.values: empty for axis " + std::string(to_string(sweep.axis)));
    const std::size_t points = sweep.axis == SweepAxis::None ? 1 : sweep.values.size();
    if (!sweep.quota_schedule.empty() && sweep.quota_schedule.size() != points)
        throw ConfigError("sweep.quota_schedule: " + std::to_string(sweep.quota_schedule.size()) +
                          " entries for " + std::to_string(points) + " sweep points");
    if (is_count_axis(sweep.axis))
        for (double v : sweep.values) as_count(v, to_string(sweep.axis));
    for (const DeploymentConfig& d : sweep_points()) d.validate();
}

TrialSeeds trial_seeds(std::uint64_t master_seed, int trial_index) noexcept {
    TrialSeeds s;
    s.trial = mix_seed(master_seed, static_cast<std::uint64_t>(trial_index));
    s.scenario = mix_seed(s.trial, 1);
    s.channels = mix_seed(s.trial, 2);
    s.random_matching = mix_seed(s.trial, 3);
    s.formation = mix_seed(s.trial, 4);
    return s;
}

TrialRecord run_trial(const ExperimentConfig& config, int point_index, int trial_index) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<DeploymentConfig> points = config.sweep_points();
    if (point_index < 0 || point_index >= static_cast<int>(points.size()))
        throw std::out_of_range("run_trial: sweep point " + std::to_string(point_index));
    const DeploymentConfig& deployment = points[static_cast<std::size_t>(point_index)];
    deployment.validate();

    TrialRecord record;
    record.point_index = point_index;
    record.trial_index = trial_index;
    record.seeds = trial_seeds(config.master_seed, trial_index);

    std::optional<ChannelSet> channels;
    std::optional<PreferenceTables> prefs;
    try {
        record.scenario = sample_scenario(deployment, record.seeds.scenario);
        channels.emplace(realize_channels(record.scenario, record.seeds.channels));
        prefs.emplace(build_preferences(record.scenario, *channels));
    } catch (const std::exception& e) {
        record.error = e.what();
        record.wall_seconds = seconds_since(t0);
        return record;
    }

    const int n = record.scenario.num_uts();
    for (Stage1Scheme s1 : config.stage1) {
        std::optional<Matching> matching;
        std::optional<std::string> stage1_error;
        const auto t1 = std::chrono::steady_clock::now();
        try {
            matching.emplace(run_stage1(s1, *prefs, record.scenario, config, record.seeds));
        } catch (const std::exception& e) {
            stage1_error = e.what();
        }
        const double stage1_seconds = seconds_since(t1);
        std::optional<CoalitionGame> game;
        if (matching) game.emplace(*channels, record.scenario.params, matching->assignment());

        for (Stage2Scheme s2 : config.stage2) {
            TrialMetrics m;
            m.scheme = {s1, s2};
            if (!matching) {
                m.error = stage1_error;
                m.sentinel = true;
                record.metrics.push_back(std::move(m));
                continue;
            }
            const auto t2 = std::chrono::steady_clock::now();
            m.matching.assign(matching->assignment().begin(), matching->assignment().end());
            m.social_welfare = social_welfare(*matching, *prefs);
            try {
                run_stage2(s2, *game, config, record.seeds, m);
                m.sentinel = m.total.is_infeasible();
                m.average = m.sentinel ? std::numeric_limits<double>::quiet_NaN() : m.total.value() / n;
            } catch (const std::exception& e) {
                m.error = e.what();
                m.sentinel = true;
                m.total = Utility::infeasible();
            }
            m.wall_seconds = stage1_seconds + seconds_since(t2);
            record.metrics.push_back(std::move(m));
        }
    }
    record.wall_seconds = seconds_since(t0);
    return record;
}

MetricStats summarize(const std::vector<double>& samples) {
    MetricStats s;
    double sum = 0.0;
    for (double x : samples)
        if (!std::isnan(x)) {
            sum += x;
            ++s.n;
        }
    if (s.n == 0) return s;
    s.mean = sum / s.n;
    if (s.n < 2) return s;
    double ss = 0.0;
    for (double x : samples)
        if (!std::isnan(x)) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
    return s;
}

const SchemeSummary& PointResult::scheme(const SchemePair& s) const {
    for (const SchemeSummary& summary : schemes)
        if (summary.scheme == s) return summary;
    throw std::out_of_range("PointResult: no scheme " + s.label());
}

ExperimentResult run_experiment(const ExperimentConfig& config, const TrialObserver& observer) {
    config.validate();
    const std::vector<double> values = config.sweep_values();
    const std::vector<DeploymentConfig> points = config.sweep_points();
    const std::vector<SchemePair> schemes = config.schemes();
    const int reps = config.repetitions;
    int workers = config.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                                      : config.threads;
    workers = std::clamp(workers, 1, reps);

    ExperimentResult result;
    result.axis = config.sweep.axis;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    for (std::size_t p = 0; p < points.size(); ++p) {
        std::vector<TrialRecord> records(static_cast<std::size_t>(reps));
        std::atomic<int> next{0};
        std::exception_ptr fatal;
        std::atomic<bool> failed{false};
        auto work = [&] {
            for (int t = next++; t < reps && !failed; t = next++) {
                try {
                    records[static_cast<std::size_t>(t)] = run_trial(config, static_cast<int>(p), t);
                } catch (...) {
                    if (!failed.exchange(true)) fatal = std::current_exception();
                }
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        }
        if (fatal) std::rethrow_exception(fatal);

        PointResult point;
        point.sweep_value = values[p];
        point.deployment = points[p];
        for (const SchemePair& s : schemes) {
            SchemeSummary summary;
            summary.scheme = s;
            for (auto& v : summary.samples) v.assign(static_cast<std::size_t>(reps), nan);
            point.schemes.push_back(std::move(summary));
        }
        for (const TrialRecord& r : records) {
            if (observer) observer(r);
            for (std::size_t j = 0; j < schemes.size(); ++j) {
                SchemeSummary& summary = point.schemes[j];
                ++summary.trials;
                const auto t = static_cast<std::size_t>(r.trial_index);
                if (r.error || j >= r.metrics.size()) {
                    ++summary.failed;
                    continue;
                }
                const TrialMetrics& m = r.metrics[j];
                if (m.error) {
                    ++summary.failed;
                    continue;
                }
                summary.samples[2][t] = m.social_welfare;
                if (m.sentinel) {
                    ++summary.sentinel;
                    continue;
                }
                summary.samples[0][t] = m.total.value();
                summary.samples[1][t] = m.average;
            }
        }
        for (SchemeSummary& summary : point.schemes)
            for (std::size_t k = 0; k < kMetricNames.size(); ++k)
                summary.metrics[k] = summarize(summary.samples[k]);
        result.points.push_back(std::move(point));
    }
    return result;
}

std::array<ExperimentResult, 4> ablation_two_stage(const ExperimentConfig& config,
                                                   const TrialObserver& observer) {
    ExperimentConfig joint = config;
    joint.stage1 = {Stage1Scheme::RMS, Stage1Scheme::PMA};
    joint.stage2 = {Stage2Scheme::AS, Stage2Scheme::OCFA};
    const ExperimentResult all = run_experiment(joint, observer);

    const std::array<SchemePair, 4> quadrants{{{Stage1Scheme::RMS, Stage2Scheme::AS},
                                               {Stage1Scheme::PMA, Stage2Scheme::AS},
                                               {Stage1Scheme::RMS, Stage2Scheme::OCFA},
                                               {Stage1Scheme::PMA, Stage2Scheme::OCFA}}};
    std::array<ExperimentResult, 4> out;
    for (std::size_t q = 0; q < quadrants.size(); ++q) {
        out[q].axis = all.axis;
        for (const PointResult& p : all.points) {
            PointResult slice;
            slice.sweep_value = p.sweep_value;
            slice.deployment = p.deployment;
            slice.schemes.push_back(p.scheme(quadrants[q]));
            out[q].points.push_back(std::move(slice));
        }
    }
    return out;
}

}  // namespace uavsec
