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

#include <functional>
#include <unordered_set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "uavsec/coalition.hpp"
#include "uavsec/errors.hpp"

using namespace uavsec;
using namespace uavsec::testing;

namespace {

constexpr double kNear = 4e-6;  // 500 m at alpha = 2: broadcast needs 2.5 mW
constexpr double kFar = 1e-8;   // 10 km: broadcast would need 1 W

/// n UTs, one UR, s UEs. `near(a, b)` decides which UT pairs can hear each
/// other within the default power budget. Phases are distinct so the
/// nulling problems are well posed.
ChannelSet hand_channels(int n, int s, const std::function<bool(int, int)>& near) {
    ChannelSet ch(n, 1, s);
    for (int k = 0; k < n; ++k) {
        ch.ut_ur(k, 0) = gain(1e-6 * (1.0 + 0.1 * k), 0.7 * k);
        for (int e = 0; e < s; ++e) ch.ut_ue(k, e) = gain(1e-7 * (1.0 + 0.2 * e), 1.3 * k + 0.5 * e + 0.2);
        for (int j = k + 1; j < n; ++j) ch.ut_ut(k, j) = ch.ut_ut(j, k) = gain(near(k, j) ? kNear : kFar, 0.1 * (k + j));
    }
    return ch;
}

std::vector<int> all_to(int n, int i) { return std::vector<int>(static_cast<std::size_t>(n), i); }

CoalitionStructure cs(int n, std::vector<UtSet> c) { return CoalitionStructure(n, std::move(c)); }

struct Instance {
    Scenario scenario;
    ChannelSet channels;
    Matching matching;
};

Instance make_instance(const DeploymentConfig& d, std::uint64_t seed) {
    Scenario sc = sample_scenario(d, mix_seed(seed, 1));
    ChannelSet ch = realize_channels(sc, mix_seed(seed, 2));
    Matching m = proposed_matching(build_preferences(sc, ch), sc);
    return {std::move(sc), std::move(ch), std::move(m)};
}

CoalitionStructure random_structure(Rng& rng, int n) {
    std::vector<UtSet> c;
    const int count = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(n)));
    for (int x = 0; x < count; ++x) {
        UtSet s;
        for (int k = 0; k < n; ++k)
            if (rng.uniform() < 0.4) s.insert(k);
        c.push_back(s);
    }
    UtSet covered;
    for (UtSet s : c) covered |= s;
    for (int k = 0; k < n; ++k)
        if (!covered.contains(k)) c.push_back(UtSet::single(k));
    return CoalitionStructure(n, c);
}

}  // namespace

TEST_SUITE("coalition") {

TEST_CASE("structures are canonical and must cover every UT") {
    const auto a = cs(4, {UtSet{2, 3}, UtSet{0, 1}, UtSet{}, UtSet{0, 1}});
    CHECK(a.size() == 2);
    CHECK(a.coalitions().front() == UtSet{0, 1});
    CHECK(a == cs(4, {UtSet{0, 1}, UtSet{2, 3}}));
    CHECK(a.hash() == cs(4, {UtSet{0, 1}, UtSet{2, 3}}).hash());
    CHECK_THROWS_AS(cs(4, {UtSet{0, 1}, UtSet{2}}), InternalError);
    CHECK_THROWS_AS(cs(3, {UtSet{0, 1, 2, 3}}), InternalError);
    CHECK_NOTHROW(a.validate());
}

TEST_CASE("groups are unions of the coalitions containing a UT (seven-UT example)") {
    // C1 = {1,2,3,4}, C2 = {3,4,6}, C3 = {5}, C4 = {7}, zero-based here.
    const auto pi = cs(7, {UtSet{0, 1, 2, 3}, UtSet{2, 3, 5}, UtSet{4}, UtSet{6}});
    CHECK(group_of(0, pi) == UtSet{0, 1, 2, 3});
    CHECK(group_of(1, pi) == UtSet{0, 1, 2, 3});
    CHECK(group_of(2, pi) == UtSet{0, 1, 2, 3, 5});
    CHECK(group_of(3, pi) == UtSet{0, 1, 2, 3, 5});
    CHECK(group_of(4, pi) == UtSet{4});
    CHECK(group_of(5, pi) == UtSet{2, 3, 5});
    CHECK(group_of(6, pi) == UtSet{6});
    const auto grand = cs(3, {UtSet{0, 1}, UtSet{0, 1, 2}});
    CHECK(group_of(1, grand) == UtSet{0, 1, 2});
}

TEST_CASE("memoized evaluation equals the cache-free evaluator") {
    Rng rng(31);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const Instance in = make_instance(DeploymentConfig{}, t);
        const CoalitionGame game(in.channels, in.scenario.params, in.matching.assignment());
        for (int r = 0; r < 10; ++r) {
            const auto pi = random_structure(rng, 12);
            const auto a = game.evaluate(pi);
            const auto b = evaluate_structure(pi, in.matching, in.channels, in.scenario.params);
            CHECK(a.total == b.total);
            CHECK(a.per_ut == b.per_ut);
            CHECK(a.infeasible_count == b.infeasible_count);
        }
    }
}

TEST_CASE("singletons evaluate to the sum of direct rates") {
    const Instance in = make_instance(DeploymentConfig{}, 3);
    const CoalitionGame game(in.channels, in.scenario.params, in.matching.assignment());
    double sum = 0.0;
    for (int k = 0; k < 12; ++k) sum += direct_secrecy_rate(k, in.matching.receiver_of(k), in.channels, in.scenario.params);
    CHECK(game.total(as_baseline(12)).value() == doctest::Approx(sum).epsilon(1e-12));
    CHECK(as_baseline(12).size() == 12);
}

TEST_CASE("compare_totals refines the sentinel order") {
    StructureUtility a, b;
    a.infeasible_count = 1;
    a.feasible_sum = 50;
    b.infeasible_count = 0;
    b.feasible_sum = 1;
    CHECK(compare_totals(b, a) > 0);
    a.infeasible_count = 0;
    CHECK(compare_totals(a, b) > 0);
    b.feasible_sum = 50;
    CHECK(compare_totals(a, b) == 0);
}

TEST_CASE("initialization: grand coalition when everyone is in range") {
    const ChannelSet ch = hand_channels(4, 2, [](int, int) { return true; });
    const CoalitionGame game(ch, PhysicalParams{}, all_to(4, 0));
    CHECK(initialize_structure(game) == cs(4, {UtSet{0, 1, 2, 3}}));
}

TEST_CASE("initialization: isolated UT stays alone and leaves the others") {
    const ChannelSet ch = hand_channels(4, 1, [](int a, int b) { return a != 3 && b != 3; });
    const CoalitionGame game(ch, PhysicalParams{}, all_to(4, 0));
    CHECK(game.neighborhood(3) == UtSet{3});
    CHECK(initialize_structure(game) == cs(4, {UtSet{0, 1, 2}, UtSet{3}}));
}

TEST_CASE("initialization: a neighborhood smaller than S+1 collapses") {
    // S = 2; UT 3 hears only UT 0.
    const ChannelSet ch = hand_channels(4, 2, [](int a, int b) { return b != 3 || a == 0; });
    const CoalitionGame game(ch, PhysicalParams{}, all_to(4, 0));
    CHECK(game.neighborhood(3) == UtSet{0, 3});
    CHECK(initialize_structure(game) == cs(4, {UtSet{0, 1, 2}, UtSet{3}}));
}

TEST_CASE("initialization: collapses cascade") {
    // S = 2; links 0-1, 0-2, 1-3. Removing 2 and 3 shrinks C0 and C1 to two.
    const ChannelSet ch = hand_channels(4, 2, [](int a, int b) {
        return (a == 0 && b == 1) || (a == 0 && b == 2) || (a == 1 && b == 3);
    });
    const CoalitionGame game(ch, PhysicalParams{}, all_to(4, 0));
    CHECK(initialize_structure(game) == as_baseline(4));
}

TEST_CASE("moves") {
    const auto pi = cs(4, {UtSet{0, 1}, UtSet{1, 2}, UtSet{3}});
    CHECK(apply_move(pi, {MoveKind::Quit, 0, UtSet{0, 1}, {}}) == cs(4, {UtSet{0}, UtSet{1}, UtSet{1, 2}, UtSet{3}}));
    CHECK(apply_move(pi, {MoveKind::Quit, 1, UtSet{0, 1}, {}}) == cs(4, {UtSet{0}, UtSet{1, 2}, UtSet{3}}));
    CHECK(apply_move(pi, {MoveKind::Join, 3, {}, UtSet{1, 2}}) == cs(4, {UtSet{0, 1}, UtSet{1, 2, 3}, UtSet{3}}));
    CHECK(apply_move(pi, {MoveKind::Switch, 3, UtSet{3}, UtSet{0, 1}}) == cs(4, {UtSet{0, 1, 3}, UtSet{1, 2}}));
    CHECK_THROWS_AS(apply_move(pi, {MoveKind::Quit, 2, UtSet{0, 1}, {}}), InternalError);
    CHECK_THROWS_AS(apply_move(pi, {MoveKind::Join, 1, {}, UtSet{1, 2}}), InternalError);
    CHECK_THROWS_AS(apply_move(pi, {MoveKind::Join, 0, {}, UtSet{0, 3}}), InternalError);
}

TEST_CASE("stability checker agrees with the exhaustive move oracle") {
    Rng rng(5);
    int unstable = 0;
    for (std::uint64_t t = 0; t < 40; ++t) {
        const int n = 3 + static_cast<int>(rng.below(3));
        DeploymentConfig d = testing::small_config(n, 1 + static_cast<int>(rng.below(2)), 1, n);
        d.params.power_budget = dbm_to_watts(14.0);
        const Instance in = make_instance(d, 40 + t);
        const CoalitionGame game(in.channels, in.scenario.params, in.matching.assignment());
        for (int r = 0; r < 6; ++r) {
            const auto pi = random_structure(rng, n);
            const bool expected = move_oracle_stable(pi, in.matching, in.channels, in.scenario.params);
            const auto got = check_stability(pi, game);
            CHECK(got.stable == expected);
            if (!got.stable) {
                REQUIRE(got.witness);
                CHECK(move_accepted(pi, *got.witness, game));
                ++unstable;
            }
        }
        const auto result = ocf_iterate(initialize_structure(game), game, {t});
        CHECK(move_oracle_stable(result.structure, in.matching, in.channels, in.scenario.params));
    }
    CHECK(unstable > 0);
}

TEST_CASE("planted quit: the UT that poisons the grand coalition leaves first") {
    // UTs 0 and 1 hear each other; UT 2 hears nobody, so any group with it
    // and someone else is infeasible.
    const ChannelSet ch = hand_channels(3, 1, [](int a, int b) { return a == 0 && b == 1; });
    const CoalitionGame game(ch, PhysicalParams{}, all_to(3, 0));
    const auto grand = cs(3, {UtSet{0, 1, 2}});
    CHECK(game.total(grand).is_infeasible());
    Rng rng(1);
    const auto next = ocf_step(grand, game, rng);
    REQUIRE(next);
    CHECK(*next == cs(3, {UtSet{0, 1}, UtSet{2}}));
    CHECK_FALSE(game.total(*next).is_infeasible());
}

TEST_CASE("a stable start is returned unchanged") {
    // Nobody is in range: every join is infeasible.
    const ChannelSet ch = hand_channels(4, 1, [](int, int) { return false; });
    const CoalitionGame game(ch, PhysicalParams{}, all_to(4, 0));
    const auto pi0 = initialize_structure(game);
    CHECK(pi0 == as_baseline(4));
    const auto r = ocf_iterate(pi0, game, {});
    CHECK(r.rounds == 0);
    CHECK(r.structure == pi0);
    CHECK(r.trace.size() == 1);
}

TEST_CASE("formation dynamics: stable, monotone, no revisits, deterministic") {
    for (std::uint64_t t = 0; t < 30; ++t) {
        const Instance in = make_instance(DeploymentConfig{}, 700 + t);
        const CoalitionGame game(in.channels, in.scenario.params, in.matching.assignment());
        const auto pi0 = initialize_structure(game);
        const auto r = ocf_iterate(pi0, game, {t});
        CHECK(check_stability(r.structure, game).stable);
        REQUIRE(r.trace.size() == static_cast<std::size_t>(r.rounds + 1));
        for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1]);
        CHECK(game.total(r.structure) >= game.total(pi0));
        CHECK_FALSE(game.total(r.structure).is_infeasible());
        CHECK_NOTHROW(r.structure.validate());

        const auto again = ocf_iterate(pi0, game, {t});
        CHECK(again.structure == r.structure);
    }
}

TEST_CASE("single steps never return to a visited structure") {
    const Instance in = make_instance(DeploymentConfig{}, 4242);
    const CoalitionGame game(in.channels, in.scenario.params, in.matching.assignment());
    Rng rng(3);
    StructureSet visited;
    CoalitionStructure pi = initialize_structure(game);
    visited.insert(pi);
    while (auto next = ocf_step(pi, game, rng, &visited)) {
        CHECK(visited.insert(*next).second);
        pi = *next;
    }
}

TEST_CASE("cooperation beats transmitting alone on average") {
    double ocfa = 0.0, alone = 0.0;
    for (std::uint64_t t = 0; t < 40; ++t) {
        const Instance in = make_instance(DeploymentConfig{}, 900 + t);
        const CoalitionGame game(in.channels, in.scenario.params, in.matching.assignment());
        ocfa += game.total(ocf_iterate(initialize_structure(game), game, {t}).structure).value();
        alone += game.total(as_baseline(12)).value();
    }
    CHECK(ocfa > 1.3 * alone);
}

TEST_CASE("full-group scheme uses whole neighborhoods or transmits alone") {
    const ChannelSet ch = hand_channels(4, 2, [](int a, int b) { return b != 3 || a == 0; });
    const CoalitionGame game(ch, PhysicalParams{}, all_to(4, 0));
    const auto groups = fgs_groups(game);
    CHECK(groups[0] == UtSet{0, 1, 2, 3});
    CHECK(groups[1] == UtSet{0, 1, 2});
    CHECK(groups[3] == UtSet{3});  // {0, 3} is smaller than S + 1
}

TEST_CASE("disjoint scheme: two in-range UTs merge iff the pair is worth more") {
    const ChannelSet ch = hand_channels(2, 1, [](int, int) { return true; });
    const PhysicalParams params;
    const CoalitionGame game(ch, params, all_to(2, 0));
    const Utility apart = game.utility(0, UtSet{0}) + game.utility(1, UtSet{1});
    const Utility together = game.utility(0, UtSet{0, 1}) + game.utility(1, UtSet{0, 1});
    const auto part = dcs_partition(game, 2);
    if (together > apart)
        CHECK(part == std::vector<UtSet>{UtSet{0, 1}});
    else
        CHECK(part.size() == 2);
    CHECK_THROWS_AS(dcs_partition(game, 1), std::invalid_argument);
}

TEST_CASE("disjoint scheme returns a partition") {
    for (std::uint64_t t = 0; t < 10; ++t) {
        const Instance in = make_instance(DeploymentConfig{}, 300 + t);
        const CoalitionGame game(in.channels, in.scenario.params, in.matching.assignment());
        const DcsResult r = dcs_baseline(game);
        UtSet seen;
        for (UtSet b : r.partition) {
            CHECK((seen & b).empty());
            seen |= b;
        }
        CHECK(seen == UtSet::first_n(12));
        CHECK(r.total == game.evaluate_groups(partition_groups(r.partition, 12)).total);
        CHECK(r.total >= game.total(as_baseline(12)));
    }
}

}  // TEST_SUITE
