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

#ifndef UAVSEC_MATCHING_HPP
#define UAVSEC_MATCHING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uavsec/geometry.hpp"
#include "uavsec/ut_set.hpp"

namespace uavsec {

/// Preference data of the UT-UR association game.
struct PreferenceTables {
    /// N x M, U_k^i: direct secrecy rate of UT k toward UR i [bit/s/Hz].
    /// Phase I lowers entries by delta on each rejection.
    Eigen::MatrixXd ut_pref;
    /// M x N, reference preference W log2(1 + gamma_ki) [bit/s].
    Eigen::MatrixXd ur_ref_pref;
    /// N x M rejections of UT k by UR i.
    Eigen::MatrixXi rejection_counts;

    int num_uts() const noexcept { return static_cast<int>(ut_pref.rows()); }
    int num_urs() const noexcept { return static_cast<int>(ut_pref.cols()); }
};

/// W log2(1 + P0 |h_ki|^2 / sigma^2), what UR i alone earns from UT k.
double reference_preference(int k, int i, const ChannelSet& channels,
                            const PhysicalParams& params);

PreferenceTables build_preferences(const Scenario& scenario, const ChannelSet& channels);

/// Average receiving rate of UR i over its partner set; 0 for an empty set.
double ur_set_utility(int i, UtSet partners, const ChannelSet& channels,
                      const PhysicalParams& params);

/// Same quantity read from the reference-preference table.
double ur_set_utility(const PreferenceTables& prefs, int i, UtSet partners);

/// Many-to-one assignment of UTs to URs with per-UR quotas.
class Matching {
public:
    static constexpr int kUnmatched = -1;

    Matching() = default;
    Matching(int num_uts, std::vector<int> quotas);

    int num_uts() const noexcept { return static_cast<int>(assignment_.size()); }
    int num_urs() const noexcept { return static_cast<int>(quotas_.size()); }

    /// UR of UT k, or kUnmatched.
    int receiver_of(int k) const { return assignment_.at(static_cast<std::size_t>(k)); }
    UtSet partners(int i) const { return partners_.at(static_cast<std::size_t>(i)); }
    int quota(int i) const { return quotas_.at(static_cast<std::size_t>(i)); }
    /// Open seats e_i = Q_i - |T_i|.
    int remaining(int i) const { return quota(i) - partners(i).size(); }
    bool is_total() const noexcept;

    std::span<const int> assignment() const noexcept { return assignment_; }
    std::span<const int> quotas() const noexcept { return quotas_; }

    /// Seats UT k at UR i (moving it if already matched). Throws
    /// InternalError if UR i has no open seat.
    void assign(int k, int i);
    void unassign(int k);

    /// Checks quota bounds and the assignment/partner-set correspondence.
    void validate() const;

    friend bool operator==(const Matching&, const Matching&) = default;

private:
    std::vector<int> assignment_;
    std::vector<int> quotas_;
    std::vector<UtSet> partners_;
};

struct MatchingOptions {
    /// Penalty per rejection. Non-positive selects max(U)/M, or 1 when
    /// every entry of U is zero.
    double delta = 0.0;
    long max_rounds = 1'000'000;
    long max_swaps = 1'000'000;
};

double default_delta(const PreferenceTables& prefs);

/// Phase I of the proposed matching: proposals with no eviction, second
/// chances for rejected UTs, and priority for repeat applicants.
///
/// Mutates `prefs.ut_pref` (delta penalties) and `prefs.rejection_counts`.
/// Throws InfeasibleError if the quotas cannot seat every UT.
Matching phase1_preliminary(PreferenceTables& prefs, const Scenario& scenario,
                            const MatchingOptions& options = {});

/// Picks first-time applicants for UR i: best reference preference first,
/// admitted while it is at least the running set utility, stopping at the
/// first failure or after `seats` admissions.
std::vector<int> select_first_time(int i, std::span<const int> applicants, UtSet current,
                                   int seats, const PreferenceTables& prefs);

/// A swap of UT s (at UR h) with UT t (at UR g), or with an open seat at
/// UR g when `partner` is empty.
struct SwapProposal {
    int ut_s = 0;
    std::optional<int> ut_t;
    int ur_h = 0;
    int ur_g = 0;

    bool is_seat() const noexcept { return !ut_t.has_value(); }
    friend bool operator==(const SwapProposal&, const SwapProposal&) = default;
};

/// Applies a swap, returning the new matching.
Matching apply_swap(const Matching& matching, const SwapProposal& swap);

/// True when the swap weakly improves UT s, UT t, UR h and UR g with at
/// least one strict improvement. A seat counts as an agent of utility 0.
/// Utilities are the unpenalized U_k^i and the UR set utilities.
bool swap_approved(const Matching& matching, const SwapProposal& swap,
                   const PreferenceTables& prefs);

struct PairwiseStability {
    bool stable = true;
    std::optional<SwapProposal> witness;
};

/// Scans every UT pair on different URs, then every UT-seat pair, in
/// lexicographic order and reports the first approved swap.
PairwiseStability is_pairwise_stable(const Matching& matching, const PreferenceTables& prefs);

/// Phase II: executes the first approved swap and rescans until none is
/// left. `prefs` must hold the unpenalized U_k^i.
Matching phase2_swap_stabilize(Matching matching, const PreferenceTables& prefs,
                               const MatchingOptions& options = {});

/// Phase I on a private copy of `prefs`, then Phase II on the originals.
Matching proposed_matching(const PreferenceTables& prefs, const Scenario& scenario,
                           const MatchingOptions& options = {});

/// Deferred acceptance on fixed lists: UTs propose in order of U_k^i and
/// each UR keeps its Q_i best applicants by reference preference.
Matching da_baseline(const PreferenceTables& prefs, const Scenario& scenario);

/// Uniformly shuffled seats; UT k takes the k-th seat.
Matching random_baseline(const Scenario& scenario, std::uint64_t seed);

/// Sum of UT utilities over max_{k,i} U_k^i plus sum of UR set utilities
/// over max_{k,i} of the reference preference. Each family lies in [0, count].
double social_welfare(const Matching& matching, const PreferenceTables& prefs);

}  // namespace uavsec

#endif  // UAVSEC_MATCHING_HPP
