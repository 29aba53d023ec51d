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

#ifndef UAVSEC_COALITION_HPP
#define UAVSEC_COALITION_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "uavsec/geometry.hpp"
#include "uavsec/matching.hpp"
#include "uavsec/random.hpp"
#include "uavsec/ut_set.hpp"
#include "uavsec/utility.hpp"

namespace uavsec {

/// Overlapping coalition structure over UTs 0..N-1.
///
/// Stored canonically: no empty or duplicate coalitions, sorted by bitmask.
/// Two structures holding the same family of sets compare equal. The group
/// F_k (union of the coalitions containing k) is computed on construction.
class CoalitionStructure {
public:
    CoalitionStructure() = default;

    /// Throws InternalError if the coalitions do not cover every UT or
    /// mention an index outside [0, N).
    CoalitionStructure(int num_uts, std::vector<UtSet> coalitions);

    int num_uts() const noexcept { return n_; }
    const std::vector<UtSet>& coalitions() const noexcept { return coalitions_; }
    std::size_t size() const noexcept { return coalitions_.size(); }

    UtSet group_of(int k) const { return groups_.at(static_cast<std::size_t>(k)); }
    const std::vector<UtSet>& groups() const noexcept { return groups_; }

    bool contains(UtSet coalition) const noexcept;
    std::size_t hash() const noexcept;

    /// Re-derives every invariant from scratch (coverage, canonical form,
    /// cached groups).
    void validate() const;

    friend bool operator==(const CoalitionStructure& a, const CoalitionStructure& b) {
        return a.n_ == b.n_ && a.coalitions_ == b.coalitions_;
    }

    struct Hash {
        std::size_t operator()(const CoalitionStructure& s) const noexcept { return s.hash(); }
    };

private:
    int n_ = 0;
    std::vector<UtSet> coalitions_;
    std::vector<UtSet> groups_;
};

/// F_k: union of the coalitions containing k.
UtSet group_of(int k, const CoalitionStructure& structure);

struct StructureUtility {
    std::vector<Utility> per_ut;
    Utility total;               ///< u(Pi); infeasible if any v_k is
    int infeasible_count = 0;    ///< UTs with infeasible v_k
    double feasible_sum = 0.0;   ///< sum of the finite v_k
};

/// Refinement of the order of `total`: agrees with it whenever either
/// total is finite, and ranks two infeasible totals by fewer infeasible
/// UTs, then larger finite sum. Used to pick among candidate structures.
std::partial_ordering compare_totals(const StructureUtility& a, const StructureUtility& b) noexcept;

/// Utility oracle for one trial's stage 2. Memoizes v_k per (k, F_k).
///
/// Not thread-safe; use one instance per trial.
class CoalitionGame {
public:
    CoalitionGame(const ChannelSet& channels, const PhysicalParams& params,
                  std::span<const int> receivers);

    int num_uts() const noexcept { return channels_->num_uts(); }
    int num_ues() const noexcept { return channels_->num_ues(); }
    const ChannelSet& channels() const noexcept { return *channels_; }
    const PhysicalParams& params() const noexcept { return params_; }
    int receiver_of(int k) const { return receivers_.at(static_cast<std::size_t>(k)); }

    /// v_k for group F_k.
    Utility utility(int k, UtSet group) const;

    /// UTs that k can reach at the decoding threshold within P0, plus k.
    UtSet neighborhood(int k) const { return neighborhoods_.at(static_cast<std::size_t>(k)); }

    /// Per-UT utilities for explicit groups (one per UT) and their sum.
    StructureUtility evaluate_groups(std::span<const UtSet> groups) const;
    StructureUtility evaluate(const CoalitionStructure& structure) const {
        return evaluate_groups(structure.groups());
    }
    Utility total(const CoalitionStructure& structure) const { return evaluate(structure).total; }

    std::size_t cache_size() const noexcept;

private:
    const ChannelSet* channels_;
    PhysicalParams params_;
    std::vector<int> receivers_;
    std::vector<UtSet> neighborhoods_;
    mutable std::vector<std::unordered_map<std::uint64_t, Utility>> cache_;
};

/// v_k for every UT under the structure, from scratch (no memoization).
StructureUtility evaluate_structure(const CoalitionStructure& structure, const Matching& matching,
                                    const ChannelSet& channels, const PhysicalParams& params);

/// Neighborhood coalitions C_k, then correction: any UT whose coalition
/// is smaller than S+1 becomes a singleton and leaves every other
/// coalition (repeated until no coalition shrinks below S+1), then
/// duplicates are dropped.
CoalitionStructure initialize_structure(const CoalitionGame& game);

enum class MoveKind { Quit, Join, Switch };

/// `from` is C_a (Quit, Switch); `to` is C_b (Join, Switch).
struct Move {
    MoveKind kind = MoveKind::Quit;
    int ut = 0;
    UtSet from;
    UtSet to;

    friend bool operator==(const Move&, const Move&) = default;
};

const char* to_string(MoveKind kind) noexcept;

/// Structure after the move. Quitting the only coalition that holds k
/// leaves k in the singleton {k}.
CoalitionStructure apply_move(const CoalitionStructure& structure, const Move& move);

/// Acceptance test of a move: Quit needs v_k' >= v_k, Join and Switch need
/// v_k' > v_k, and all need u' >= u. An infeasible u' passes only against
/// an infeasible u. A move that leaves the structure unchanged is never
/// accepted.
bool move_accepted(const CoalitionStructure& structure, const Move& move,
                   const CoalitionGame& game);

struct CoalitionStability {
    bool stable = true;
    std::optional<Move> witness;
};

/// Enumerates every Quit, Join and Switch of every UT.
CoalitionStability check_stability(const CoalitionStructure& structure, const CoalitionGame& game);

using StructureSet = std::unordered_set<CoalitionStructure, CoalitionStructure::Hash>;

/// One round of the formation dynamics from `structure`: every UT scans
/// its shuffled (C_a, C_b) candidates, offering Quit, then Join, then
/// Switch for each pair, and keeps its accepted move whose structure ranks
/// highest under compare_totals (first offered wins ties). Across UTs the
/// highest-ranking structure wins, lowest UT index on ties. Moves into a
/// structure listed in `visited` are skipped. While u(structure) is
/// infeasible only Quits by UTs with infeasible v_k are offered; each one
/// shrinks the non-singleton coalitions, so a feasible structure follows.
/// Returns nothing when no UT has an eligible move.
std::optional<CoalitionStructure> ocf_step(const CoalitionStructure& structure,
                                           const CoalitionGame& game, Rng& rng,
                                           const StructureSet* visited = nullptr);

struct OcfOptions {
    std::uint64_t seed = 0;  ///< candidate shuffling
    long max_rounds = 100'000;
};

struct OcfResult {
    CoalitionStructure structure;
    std::vector<Utility> trace;  ///< u(Pi) at start and after each round
    long rounds = 0;
};

/// Overlapping coalition formation: repeats ocf_step until no UT moves.
///
/// Throws InternalError if a structure repeats or the result fails the
/// stability check, NonConvergenceError at the round cap.
OcfResult ocf_iterate(const CoalitionStructure& initial, const CoalitionGame& game,
                      const OcfOptions& options = {});

/// Every UT alone.
CoalitionStructure as_baseline(int num_uts);

/// Each UT takes its whole neighborhood as group, or transmits alone when
/// the neighborhood is smaller than S+1. Returns one group per UT.
std::vector<UtSet> fgs_groups(const CoalitionGame& game);

/// Disjoint coalitions by q-merge and 2-split on total utility, starting
/// from singletons. Returns the final partition. 2 <= q <= 6.
std::vector<UtSet> dcs_partition(const CoalitionGame& game, int q);

/// Best total utility of dcs_partition over q = 2..max_q.
struct DcsResult {
    std::vector<UtSet> partition;
    int q = 2;
    Utility total;
};
DcsResult dcs_baseline(const CoalitionGame& game, int max_q = 6);

/// Groups F_k induced by a disjoint partition.
std::vector<UtSet> partition_groups(std::span<const UtSet> partition, int num_uts);

}  // namespace uavsec

#endif  // UAVSEC_COALITION_HPP
