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

#include "uavsec/cli/verify.hpp"

#include <cmath>
#include <complex>
#include <exception>
#include <numbers>

#include <Eigen/QR>

#include "uavsec/beamforming.hpp"
#include "uavsec/coalition.hpp"
#include "uavsec/matching.hpp"
#include "uavsec/random.hpp"

namespace uavsec::cli {

namespace {

constexpr double kRelTol = 1e-9;
constexpr int kRandomFeasible = 1000;

std::complex<double> random_gain(Rng& rng) {
    return std::polar(rng.uniform(0.1, 1.0), 2.0 * std::numbers::pi * rng.uniform());
}

void note(SuiteReport& report, const std::string& what) {
    if (report.failures++ == 0) report.first_failure = what;
}

std::string beamforming_instance(Rng& rng) {
    const int s = static_cast<int>(rng.below(5));
    const int n = s + 1 + static_cast<int>(rng.below(static_cast<std::size_t>(8 - s)));
    BeamformingProblem p;
    p.power_budget = rng.uniform(1e-3, 1.0);
    p.to_receiver.resize(n);
    p.to_eavesdroppers.resize(n, s);
    for (int r = 0; r < n; ++r) {
        p.to_receiver(r) = random_gain(rng);
        for (int c = 0; c < s; ++c) p.to_eavesdroppers(r, c) = random_gain(rng);
    }
    const BeamformingSolution sol = null_steering_weights(p);
    const double wnorm = sol.weights.norm();
    if (std::abs(wnorm * wnorm - p.power_budget) > kRelTol * p.power_budget)
        return "power constraint not tight";
    for (int c = 0; c < s; ++c) {
        const double leak = std::abs(sol.weights.dot(p.to_eavesdroppers.col(c)));
        if (leak > kRelTol * wnorm * p.to_eavesdroppers.col(c).norm()) return "null constraint violated";
    }
    CMatrix basis = CMatrix::Zero(n, 0);
    if (s > 0) {
        Eigen::HouseholderQR<CMatrix> qr(p.to_eavesdroppers);
        basis = qr.householderQ() * CMatrix::Identity(n, s);
    }
    for (int t = 0; t < kRandomFeasible; ++t) {
        CVector z(n);
        for (int r = 0; r < n; ++r) z(r) = random_gain(rng);
        if (s > 0) z -= basis * (basis.adjoint() * z);
        if (z.norm() == 0.0) continue;
        z *= std::sqrt(p.power_budget) / z.norm();
        const double gain = std::norm(z.dot(p.to_receiver));
        if (gain > sol.array_gain * (1.0 + kRelTol)) return "random feasible weights beat the closed form";
    }
    return {};
}

}  // namespace

std::vector<SuiteReport> run_verification(std::uint64_t seed, int instances) {
    SuiteReport bf{"beamforming_optimality", instances, 0, {}};
    SuiteReport pm{"pairwise_stability", instances, 0, {}};
    SuiteReport cs{"coalition_stability", instances, 0, {}};

    Rng rng(mix_seed(seed, 0));
    for (int t = 0; t < instances; ++t) {
        try {
            if (std::string err = beamforming_instance(rng); !err.empty())
                note(bf, "instance " + std::to_string(t) + ": " + err);
        } catch (const std::exception& e) {
            note(bf, "instance " + std::to_string(t) + ": " + e.what());
        }
    }

    const DeploymentConfig deployment;
    for (int t = 0; t < instances; ++t) {
        const std::uint64_t sub = mix_seed(mix_seed(seed, 1), static_cast<std::uint64_t>(t));
        try {
            const Scenario scenario = sample_scenario(deployment, mix_seed(sub, 1));
            const ChannelSet channels = realize_channels(scenario, mix_seed(sub, 2));
            const PreferenceTables prefs = build_preferences(scenario, channels);
            const Matching matching = proposed_matching(prefs, scenario);
            if (!is_pairwise_stable(matching, prefs).stable)
                note(pm, "instance " + std::to_string(t) + ": approved swap remains");

            const CoalitionGame game(channels, scenario.params, matching.assignment());
            const OcfResult r = ocf_iterate(initialize_structure(game), game, {mix_seed(sub, 4)});
            if (!check_stability(r.structure, game).stable)
                note(cs, "instance " + std::to_string(t) + ": terminal structure not stable");
            for (std::size_t i = 1; i < r.trace.size(); ++i)
                if (r.trace[i] < r.trace[i - 1]) {
                    note(cs, "instance " + std::to_string(t) + ": u decreased");
                    break;
                }
        } catch (const std::exception& e) {
            note(cs, "instance " + std::to_string(t) + ": " + e.what());
        }
    }
    return {bf, pm, cs};
}

}  // namespace uavsec::cli
