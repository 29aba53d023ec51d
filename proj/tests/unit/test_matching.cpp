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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "uavsec/errors.hpp"
#include "uavsec/matching.hpp"

using namespace uavsec;
using namespace uavsec::testing;

namespace {

PreferenceTables tables(const std::vector<std::vector<double>>& ut,
                        const std::vector<std::vector<double>>& ur) {
    PreferenceTables p;
    const int n = static_cast<int>(ut.size());
    const int m = static_cast<int>(ur.size());
    p.ut_pref.resize(n, m);
    p.ur_ref_pref.resize(m, n);
    p.rejection_counts = Eigen::MatrixXi::Zero(n, m);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i) {
            p.ut_pref(k, i) = ut[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            p.ur_ref_pref(i, k) = ur[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        }
    return p;
}

/// Positions are irrelevant to the matching routines; only counts and
/// quotas are read.
Scenario shell(int n, std::vector<int> quotas) {
    Scenario sc;
    sc.uts.resize(static_cast<std::size_t>(n));
    sc.urs.resize(quotas.size());
    sc.ues.resize(1);
    sc.quotas = std::move(quotas);
    return sc;
}

Matching from_assignment(const std::vector<int>& a, const std::vector<int>& quotas) {
    Matching m(static_cast<int>(a.size()), quotas);
    for (std::size_t k = 0; k < a.size(); ++k) m.assign(static_cast<int>(k), a[k]);
    return m;
}

struct Instance {
    Scenario scenario;
    ChannelSet channels;
    PreferenceTables prefs;
};

Instance make_instance(const DeploymentConfig& d, std::uint64_t seed) {
    Scenario sc = sample_scenario(d, mix_seed(seed, 1));
    ChannelSet ch = realize_channels(sc, mix_seed(seed, 2));
    PreferenceTables p = build_preferences(sc, ch);
    return {std::move(sc), std::move(ch), std::move(p)};
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("reference preference is W log2(1 + SNR)") {
    ChannelSet ch(1, 1, 1);
    ch.ut_ur(0, 0) = testing::gain(1e-6);
    CHECK(reference_preference(0, 0, ch, PhysicalParams{}) ==
          doctest::Approx(1e5 * std::log2(11.0)).epsilon(1e-12));
}

TEST_CASE("preference tables hold direct secrecy rates and reference preferences") {
    const Instance in = make_instance(DeploymentConfig{}, 5);
    for (int k = 0; k < 12; ++k)
        for (int i = 0; i < 3; ++i) {
            CHECK(in.prefs.ut_pref(k, i) == direct_secrecy_rate(k, i, in.channels, in.scenario.params));
            CHECK(in.prefs.ur_ref_pref(i, k) == reference_preference(k, i, in.channels, in.scenario.params));
        }
    CHECK(in.prefs.rejection_counts.sum() == 0);
}

TEST_CASE("UR set utility is the mean reference preference") {
    const PreferenceTables p = tables({{0, 0}, {0, 0}, {0, 0}}, {{6, 3, 9}, {1, 1, 1}});
    CHECK(ur_set_utility(p, 0, UtSet{}) == 0.0);
    CHECK(ur_set_utility(p, 0, UtSet{0, 2}) == doctest::Approx(7.5));
    CHECK(ur_set_utility(p, 0, UtSet{0, 1, 2}) == doctest::Approx(6.0));
}

TEST_CASE("matching bookkeeping") {
    Matching m(3, {1, 2});
    CHECK_FALSE(m.is_total());
    m.assign(0, 0);
    CHECK_THROWS_AS(m.assign(1, 0), InternalError);
    m.assign(1, 1);
    m.assign(2, 1);
    CHECK(m.is_total());
    CHECK(m.partners(1) == UtSet{1, 2});
    CHECK(m.remaining(1) == 0);
    m.assign(1, 1);  // no-op
    m.unassign(2);
    CHECK(m.receiver_of(2) == Matching::kUnmatched);
    CHECK(m.remaining(1) == 1);
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("delta defaults to max U over M, or 1 when U is all zero") {
    CHECK(default_delta(tables({{3, 1}, {2, 1}}, {{1, 1}, {1, 1}})) == doctest::Approx(1.5));
    CHECK(default_delta(tables({{0, 0}, {0, 0}}, {{1, 1}, {1, 1}})) == 1.0);
}

TEST_CASE("first-time selection admits in reference order while the running bar holds") {
    // UR 0 holds UT 0 (reference 10); applicants 1 (12), 2 (11), 3 (9).
    const PreferenceTables p = tables({{0}, {0}, {0}, {0}}, {{10, 12, 11, 9}});
    const std::vector<int> applicants{3, 2, 1};
    // 12 >= 10 -> bar 11; 11 >= 11 -> bar 11; 9 < 11 stops.
    CHECK(select_first_time(0, applicants, UtSet{0}, 3, p) == std::vector<int>{1, 2});
    CHECK(select_first_time(0, applicants, UtSet{0}, 1, p) == std::vector<int>{1});
    CHECK(select_first_time(0, applicants, UtSet{0}, 0, p).empty());
    // Empty UR: the bar starts at zero, then 12 admitted -> bar 12; 11 < 12 stops.
    CHECK(select_first_time(0, applicants, UtSet{}, 3, p) == std::vector<int>{1});
    // Below the bar from the start.
    const std::vector<int> weak{3};
    CHECK(select_first_time(0, weak, UtSet{0}, 2, p).empty());
}

TEST_CASE("phase 1 hand trace: rejection penalties redirect proposals") {
    // All prefer UR 0; UR 0 keeps only UT 0, whose reference (10) beats
    // the running bar for UT 2 (8) and UT 1 (5).
    PreferenceTables p = tables({{3, 1}, {2, 1}, {1, 0.5}}, {{10, 5, 8}, {1, 1, 1}});
    const Scenario sc = shell(3, {2, 2});
    const Matching m = phase1_preliminary(p, sc, {});
    CHECK(std::vector<int>(m.assignment().begin(), m.assignment().end()) == std::vector<int>{0, 1, 1});
    CHECK(p.rejection_counts(1, 0) == 1);
    CHECK(p.rejection_counts(2, 0) == 1);
    CHECK(p.ut_pref(1, 0) == doctest::Approx(0.5));  // delta = 3 / 2
    CHECK(p.ut_pref(2, 0) == doctest::Approx(-0.5));
}

TEST_CASE("phase 1 hand trace: repeat applicants get a second chance") {
    PreferenceTables p = tables({{3, 1}, {2, 1}, {2, 1}}, {{10, 5, 8}, {1, 1, 1}});
    const Scenario sc = shell(3, {2, 1});
    MatchingOptions opt;
    opt.delta = 0.1;
    const Matching m = phase1_preliminary(p, sc, opt);
    // Round 2: UTs 1 and 2 both return to UR 0 with one seat; the repeat
    // pool is ranked by reference, so UT 2 (8) wins over UT 1 (5).
    CHECK(std::vector<int>(m.assignment().begin(), m.assignment().end()) == std::vector<int>{0, 1, 0});
    CHECK(p.rejection_counts(2, 0) == 1);
    CHECK(p.rejection_counts(1, 0) >= 10);

    const PreferenceTables fresh = tables({{3, 1}, {2, 1}, {2, 1}}, {{10, 5, 8}, {1, 1, 1}});
    const Matching full = proposed_matching(fresh, sc, opt);
    CHECK(full.assignment()[1] == 1);
    CHECK(is_pairwise_stable(full, fresh).stable);
}

TEST_CASE("swap approval: hand cases") {
    const PreferenceTables p = tables({{1, 2}, {2, 1}}, {{5, 5}, {5, 5}});
    const Matching m = from_assignment({0, 1}, {1, 1});
    // Both UTs gain, both URs unchanged.
    CHECK(swap_approved(m, {0, 1, 0, 1}, p));
    const auto check = is_pairwise_stable(m, p);
    CHECK_FALSE(check.stable);
    REQUIRE(check.witness);
    CHECK(check.witness->ut_s == 0);
    CHECK(check.witness->ut_t == 1);
    const Matching swapped = apply_swap(m, *check.witness);
    CHECK(swapped.receiver_of(0) == 1);
    CHECK(is_pairwise_stable(swapped, p).stable);

    // A seat move that leaves the releasing UR empty is vetoed by it.
    const PreferenceTables q = tables({{1, 2}, {1, 1}}, {{5, 5}, {9, 1}});
    const Matching m2 = from_assignment({0, 1}, {2, 2});
    CHECK_FALSE(swap_approved(m2, {0, std::nullopt, 0, 1}, q));
}

TEST_CASE("phase 2 output is pairwise stable (100 default instances)") {
    for (std::uint64_t t = 0; t < 100; ++t) {
        const Instance in = make_instance(DeploymentConfig{}, 1000 + t);
        const Matching m = proposed_matching(in.prefs, in.scenario);
        CHECK(m.is_total());
        CHECK_NOTHROW(m.validate());
        CHECK(is_pairwise_stable(m, in.prefs).stable);
    }
}

TEST_CASE("stability checker agrees with exhaustive swap enumeration") {
    Rng rng(77);
    int unstable = 0;
    for (std::uint64_t t = 0; t < 60; ++t) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const int m = 1 + static_cast<int>(rng.below(3));
        const int q = (n + m - 1) / m + static_cast<int>(rng.below(2));
        const Instance in = make_instance(testing::small_config(n, m, 1 + static_cast<int>(rng.below(2)), q), t);
        for (const Matching& cand : {random_baseline(in.scenario, t), proposed_matching(in.prefs, in.scenario),
                                     da_baseline(in.prefs, in.scenario)}) {
            const std::vector<int> a(cand.assignment().begin(), cand.assignment().end());
            const bool expected = swap_oracle_stable(in.prefs, a, in.scenario.quotas);
            CHECK(is_pairwise_stable(cand, in.prefs).stable == expected);
            unstable += expected ? 0 : 1;
        }
    }
    CHECK(unstable > 0);  // the oracle saw both verdicts
}

TEST_CASE("deferred acceptance has no blocking pair") {
    for (std::uint64_t t = 0; t < 50; ++t) {
        const Instance in = make_instance(DeploymentConfig{}, 500 + t);
        const Matching m = da_baseline(in.prefs, in.scenario);
        REQUIRE(m.is_total());
        for (int k = 0; k < 12; ++k)
            for (int i = 0; i < 3; ++i) {
                if (!(in.prefs.ut_pref(k, i) > in.prefs.ut_pref(k, m.receiver_of(k)))) continue;
                bool ur_wants = m.remaining(i) > 0;
                m.partners(i).for_each([&](int j) {
                    ur_wants = ur_wants || in.prefs.ur_ref_pref(i, k) > in.prefs.ur_ref_pref(i, j);
                });
                CHECK_FALSE(ur_wants);
            }
    }
}

TEST_CASE("random matching: quotas respected and seats uniform") {
    const Scenario sc = shell(4, {2, 2});
    std::map<std::vector<int>, int> counts;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
        const Matching m = random_baseline(sc, mix_seed(9, static_cast<std::uint64_t>(t)));
        REQUIRE(m.is_total());
        REQUIRE(m.partners(0).size() == 2);
        ++counts[std::vector<int>(m.assignment().begin(), m.assignment().end())];
    }
    // C(4,2) = 6 equally likely assignments.
    REQUIRE(counts.size() == 6);
    const double p = 1.0 / 6.0;
    const double sigma = std::sqrt(draws * p * (1 - p));
    for (const auto& [a, c] : counts) CHECK(std::abs(c - draws * p) <= 3 * sigma);

    const Scenario loose = shell(3, {2, 3});
    for (int t = 0; t < 1000; ++t) CHECK_NOTHROW(random_baseline(loose, static_cast<std::uint64_t>(t)).validate());
    CHECK(random_baseline(loose, 5).assignment()[0] == random_baseline(loose, 5).assignment()[0]);
}

TEST_CASE("social welfare normalizes both sides by their maxima") {
    const PreferenceTables p = tables({{2, 1}, {1, 4}}, {{3, 1}, {2, 6}});
    const Matching m = from_assignment({0, 1}, {1, 1});
    // (2 + 4) / 4 + (3 + 6) / 6
    CHECK(social_welfare(m, p) == doctest::Approx(3.0));
    const Matching r = from_assignment({1, 0}, {1, 1});
    // (1 + 1) / 4 + (1 + 2) / 6
    CHECK(social_welfare(r, p) == doctest::Approx(1.0));
}

TEST_CASE("infeasible seating is rejected") {
    const Scenario sc = shell(5, {2, 2});
    const PreferenceTables p = tables({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}}, {{1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}});
    CHECK_THROWS_AS(proposed_matching(p, sc), InfeasibleError);
    CHECK_THROWS_AS(da_baseline(p, sc), InfeasibleError);
    CHECK_THROWS_AS(random_baseline(sc, 1), InfeasibleError);
}

}  // TEST_SUITE
