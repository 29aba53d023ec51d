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

#include "uavsec/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uavsec/beamforming.hpp"
#include "uavsec/errors.hpp"
#include "uavsec/random.hpp"

namespace uavsec {

namespace {

void require_seating(const Scenario& scenario) {
    if (scenario.total_seats() < scenario.num_uts())
        throw InfeasibleError("matching: total quota " + std::to_string(scenario.total_seats()) +
                              " below N = " + std::to_string(scenario.num_uts()));
}

/// Most preferred UR of UT k by the current table; lowest index on ties.
int top_choice(const Eigen::MatrixXd& pref, int k) {
    int best = 0;
    for (int i = 1; i < pref.cols(); ++i)
        if (pref(k, i) > pref(k, best)) best = i;
    return best;
}

/// Sorts UTs by UR i's reference preference, best first, lowest index on ties.
void sort_by_reference(std::vector<int>& uts, int i, const PreferenceTables& prefs) {
    std::stable_sort(uts.begin(), uts.end(), [&](int a, int b) {
        const double ua = prefs.ur_ref_pref(i, a);
        const double ub = prefs.ur_ref_pref(i, b);
        if (ua != ub) return ua > ub;
        return a < b;
    });
}

}  // namespace

double reference_preference(int k, int i, const ChannelSet& channels,
                            const PhysicalParams& params) {
    return params.bandwidth *
           std::log2(1.0 + snr(params.power_budget, channels.ut_ur(k, i).power(), params.noise_power));
}

PreferenceTables build_preferences(const Scenario& scenario, const ChannelSet& channels) {
    const int n = scenario.num_uts();
    const int m = scenario.num_urs();
    PreferenceTables prefs;
    prefs.ut_pref.resize(n, m);
    prefs.ur_ref_pref.resize(m, n);
    prefs.rejection_counts = Eigen::MatrixXi::Zero(n, m);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < m; ++i) {
            prefs.ut_pref(k, i) = direct_secrecy_rate(k, i, channels, scenario.params);
            prefs.ur_ref_pref(i, k) = reference_preference(k, i, channels, scenario.params);
        }
    }
    return prefs;
}

double ur_set_utility(int i, UtSet partners, const ChannelSet& channels,
                      const PhysicalParams& params) {
    if (partners.empty()) return 0.0;
    double sum = 0.0;
    partners.for_each([&](int k) { sum += reference_preference(k, i, channels, params); });
    return sum / partners.size();
}

double ur_set_utility(const PreferenceTables& prefs, int i, UtSet partners) {
    if (partners.empty()) return 0.0;
    double sum = 0.0;
    partners.for_each([&](int k) { sum += prefs.ur_ref_pref(i, k); });
    return sum / partners.size();
}

Matching::Matching(int num_uts, std::vector<int> quotas)
    : assignment_(static_cast<std::size_t>(num_uts), kUnmatched),
      quotas_(std::move(quotas)),
      partners_(quotas_.size()) {
    if (num_uts > UtSet::kCapacity) throw ConfigError("Matching: at most 64 UTs supported");
    for (int q : quotas_)
        if (q < 0) throw ConfigError("Matching: negative quota");
}

bool Matching::is_total() const noexcept {
    return std::none_of(assignment_.begin(), assignment_.end(),
                        [](int i) { return i == kUnmatched; });
}

void Matching::assign(int k, int i) {
    const auto ki = static_cast<std::size_t>(k);
    const auto ii = static_cast<std::size_t>(i);
    if (assignment_.at(ki) == i) return;
    if (partners_.at(ii).size() >= quotas_[ii])
        throw InternalError("Matching::assign: UR " + std::to_string(i) + " is full");
    unassign(k);
    assignment_[ki] = i;
    partners_[ii].insert(k);
}

void Matching::unassign(int k) {
    const auto ki = static_cast<std::size_t>(k);
    const int old = assignment_.at(ki);
    if (old == kUnmatched) return;
    partners_[static_cast<std::size_t>(old)].erase(k);
    assignment_[ki] = kUnmatched;
}

void Matching::validate() const {
    std::vector<UtSet> expect(quotas_.size());
    for (std::size_t k = 0; k < assignment_.size(); ++k) {
        const int i = assignment_[k];
        if (i == kUnmatched) continue;
        if (i < 0 || i >= num_urs()) throw InternalError("Matching: UR index out of range");
        expect[static_cast<std::size_t>(i)].insert(static_cast<int>(k));
    }
    for (std::size_t i = 0; i < quotas_.size(); ++i) {
        if (expect[i] != partners_[i]) throw InternalError("Matching: partner sets out of sync");
        if (partners_[i].size() > quotas_[i]) throw InternalError("Matching: quota exceeded");
    }
}

double default_delta(const PreferenceTables& prefs) {
    const double top = prefs.ut_pref.size() > 0 ? prefs.ut_pref.maxCoeff() : 0.0;
    return top > 0.0 ? top / prefs.num_urs() : 1.0;
}

std::vector<int> select_first_time(int i, std::span<const int> applicants, UtSet current,
                                   int seats, const PreferenceTables& prefs) {
    std::vector<int> order(applicants.begin(), applicants.end());
    sort_by_reference(order, i, prefs);
    std::vector<int> accepted;
    const std::size_t limit = std::min(order.size(), static_cast<std::size_t>(std::max(seats, 0)));
    for (std::size_t n = 0; n < limit; ++n) {
        const int k = order[n];
        if (prefs.ur_ref_pref(i, k) >= ur_set_utility(prefs, i, current)) {
            accepted.push_back(k);
            current.insert(k);
        } else {
            break;
        }
    }
    return accepted;
}

Matching phase1_preliminary(PreferenceTables& prefs, const Scenario& scenario,
                            const MatchingOptions& options) {
    require_seating(scenario);
    const int n = scenario.num_uts();
    const int m = scenario.num_urs();
    const double delta = options.delta > 0.0 ? options.delta : default_delta(prefs);

    Matching matching(n, scenario.quotas);
    std::vector<std::vector<int>> proposals(static_cast<std::size_t>(m));
    std::vector<std::pair<int, int>> rejected;  // (UT, UR)

    for (long round = 0;; ++round) {
        if (matching.is_total()) break;
        if (round >= options.max_rounds) throw NonConvergenceError("phase1_preliminary: round cap reached");

        for (auto& p : proposals) p.clear();
        for (int k = 0; k < n; ++k)
            if (matching.receiver_of(k) == Matching::kUnmatched)
                proposals[static_cast<std::size_t>(top_choice(prefs.ut_pref, k))].push_back(k);

        rejected.clear();
        for (int i = 0; i < m; ++i) {
            auto& applicants = proposals[static_cast<std::size_t>(i)];
            if (applicants.empty()) continue;
            const int seats = matching.remaining(i);
            if (seats == 0) {
                for (int k : applicants) rejected.emplace_back(k, i);
                continue;
            }
            std::vector<int> first_time;
            std::vector<int> repeat;
            for (int k : applicants)
                (prefs.rejection_counts(k, i) == 0 ? first_time : repeat).push_back(k);

            std::vector<int> admitted;
            if (static_cast<int>(repeat.size()) >= seats) {
                sort_by_reference(repeat, i, prefs);
                admitted.assign(repeat.begin(), repeat.begin() + seats);
            } else {
                admitted = repeat;
                UtSet current = matching.partners(i);
                for (int k : repeat) current.insert(k);
                const auto picked = select_first_time(i, first_time, current,
                                                      seats - static_cast<int>(repeat.size()), prefs);
                admitted.insert(admitted.end(), picked.begin(), picked.end());
            }
            for (int k : admitted) matching.assign(k, i);
            for (int k : applicants)
                if (std::find(admitted.begin(), admitted.end(), k) == admitted.end())
                    rejected.emplace_back(k, i);
        }

        for (auto [k, i] : rejected) {
            prefs.ut_pref(k, i) -= delta;
            prefs.rejection_counts(k, i) += 1;
        }
    }
    matching.validate();
    return matching;
}

Matching apply_swap(const Matching& matching, const SwapProposal& swap) {
    Matching out = matching;
    if (swap.ut_t) {
        out.unassign(swap.ut_s);
        out.unassign(*swap.ut_t);
        out.assign(swap.ut_s, swap.ur_g);
        out.assign(*swap.ut_t, swap.ur_h);
    } else {
        out.assign(swap.ut_s, swap.ur_g);
    }
    return out;
}

bool swap_approved(const Matching& matching, const SwapProposal& swap,
                   const PreferenceTables& prefs) {
    const int s = swap.ut_s;
    const int h = swap.ur_h;
    const int g = swap.ur_g;
    if (h == g || matching.receiver_of(s) != h) return false;
    if (swap.ut_t) {
        if (matching.receiver_of(*swap.ut_t) != g) return false;
    } else if (matching.remaining(g) < 1) {
        return false;
    }

    bool strict = false;
    auto weakly_better = [&strict](double before, double after) {
        if (after < before) return false;
        if (after > before) strict = true;
        return true;
    };

    if (!weakly_better(prefs.ut_pref(s, h), prefs.ut_pref(s, g))) return false;

    UtSet new_h = matching.partners(h).without(s);
    UtSet new_g = matching.partners(g).with(s);
    if (swap.ut_t) {
        const int t = *swap.ut_t;
        if (!weakly_better(prefs.ut_pref(t, g), prefs.ut_pref(t, h))) return false;
        new_h.insert(t);
        new_g.erase(t);
    }
    if (!weakly_better(ur_set_utility(prefs, h, matching.partners(h)),
                       ur_set_utility(prefs, h, new_h)))
        return false;
    if (!weakly_better(ur_set_utility(prefs, g, matching.partners(g)),
                       ur_set_utility(prefs, g, new_g)))
        return false;
    return strict;
}

PairwiseStability is_pairwise_stable(const Matching& matching, const PreferenceTables& prefs) {
    const int n = matching.num_uts();
    const int m = matching.num_urs();
    for (int s = 0; s < n; ++s) {
        const int h = matching.receiver_of(s);
        for (int t = s + 1; t < n; ++t) {
            const int g = matching.receiver_of(t);
            if (g == h) continue;
            SwapProposal p{s, t, h, g};
            if (swap_approved(matching, p, prefs)) return {false, p};
        }
        for (int g = 0; g < m; ++g) {
            if (g == h || matching.remaining(g) < 1) continue;
            SwapProposal p{s, std::nullopt, h, g};
            if (swap_approved(matching, p, prefs)) return {false, p};
        }
    }
    return {};
}

Matching phase2_swap_stabilize(Matching matching, const PreferenceTables& prefs,
                               const MatchingOptions& options) {
    if (!matching.is_total()) throw std::invalid_argument("phase2_swap_stabilize: matching not total");
    for (long swaps = 0;; ++swaps) {
        const auto check = is_pairwise_stable(matching, prefs);
        if (check.stable) break;
        if (swaps >= options.max_swaps) throw NonConvergenceError("phase2_swap_stabilize: swap cap reached");
        matching = apply_swap(matching, *check.witness);
    }
    matching.validate();
    return matching;
}

Matching proposed_matching(const PreferenceTables& prefs, const Scenario& scenario,
                           const MatchingOptions& options) {
    PreferenceTables working = prefs;
    Matching prelim = phase1_preliminary(working, scenario, options);
    return phase2_swap_stabilize(std::move(prelim), prefs, options);
}

Matching da_baseline(const PreferenceTables& prefs, const Scenario& scenario) {
    require_seating(scenario);
    const int n = scenario.num_uts();
    const int m = scenario.num_urs();

    // Fixed proposal lists, best U_k^i first.
    std::vector<std::vector<int>> lists(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        auto& list = lists[static_cast<std::size_t>(k)];
        list.resize(static_cast<std::size_t>(m));
        std::iota(list.begin(), list.end(), 0);
        std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
            return prefs.ut_pref(k, a) > prefs.ut_pref(k, b);
        });
    }

    std::vector<std::size_t> next(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> held(static_cast<std::size_t>(m));
    std::vector<int> free_uts(static_cast<std::size_t>(n));
    std::iota(free_uts.begin(), free_uts.end(), 0);

    while (!free_uts.empty()) {
        std::vector<std::vector<int>> incoming(static_cast<std::size_t>(m));
        for (int k : free_uts) {
            auto& ptr = next[static_cast<std::size_t>(k)];
            if (ptr >= static_cast<std::size_t>(m)) throw InternalError("da_baseline: UT exhausted its list");
            incoming[static_cast<std::size_t>(lists[static_cast<std::size_t>(k)][ptr])].push_back(k);
            ++ptr;
        }
        free_uts.clear();
        for (int i = 0; i < m; ++i) {
            auto& pool = held[static_cast<std::size_t>(i)];
            const auto& inc = incoming[static_cast<std::size_t>(i)];
            if (inc.empty()) continue;
            pool.insert(pool.end(), inc.begin(), inc.end());
            sort_by_reference(pool, i, prefs);
            const auto quota = static_cast<std::size_t>(scenario.quotas[static_cast<std::size_t>(i)]);
            if (pool.size() > quota) {
                free_uts.insert(free_uts.end(), pool.begin() + static_cast<long>(quota), pool.end());
                pool.resize(quota);
            }
        }
        std::sort(free_uts.begin(), free_uts.end());
    }

    Matching matching(n, scenario.quotas);
    for (int i = 0; i < m; ++i)
        for (int k : held[static_cast<std::size_t>(i)]) matching.assign(k, i);
    matching.validate();
    return matching;
}

Matching random_baseline(const Scenario& scenario, std::uint64_t seed) {
    require_seating(scenario);
    std::vector<int> seats;
    for (int i = 0; i < scenario.num_urs(); ++i)
        seats.insert(seats.end(), static_cast<std::size_t>(scenario.quotas[static_cast<std::size_t>(i)]), i);
    Rng rng(seed);
    rng.shuffle(std::span<int>(seats));
    Matching matching(scenario.num_uts(), scenario.quotas);
    for (int k = 0; k < scenario.num_uts(); ++k) matching.assign(k, seats[static_cast<std::size_t>(k)]);
    return matching;
}

double social_welfare(const Matching& matching, const PreferenceTables& prefs) {
    if (!matching.is_total()) throw std::invalid_argument("social_welfare: matching not total");
    const double ut_scale = prefs.ut_pref.size() > 0 ? prefs.ut_pref.maxCoeff() : 0.0;
    const double ur_scale = prefs.ur_ref_pref.size() > 0 ? prefs.ur_ref_pref.maxCoeff() : 0.0;
    double ut_sum = 0.0;
    for (int k = 0; k < matching.num_uts(); ++k) ut_sum += prefs.ut_pref(k, matching.receiver_of(k));
    double ur_sum = 0.0;
    for (int i = 0; i < matching.num_urs(); ++i) ur_sum += ur_set_utility(prefs, i, matching.partners(i));
    const double ut_term = ut_scale > 0.0 ? ut_sum / ut_scale : 0.0;
    const double ur_term = ur_scale > 0.0 ? ur_sum / ur_scale : 0.0;
    return ut_term + ur_term;
}

}  // namespace uavsec
