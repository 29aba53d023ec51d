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

#ifndef UAVSEC_TESTS_ORACLES_HPP
#define UAVSEC_TESTS_ORACLES_HPP

// Brute-force reference checks, written against the definitions rather
// than the library's own checkers.

#include <optional>
#include <utility>
#include <vector>

#include "uavsec/coalition.hpp"
#include "uavsec/matching.hpp"

namespace uavsec::testing {

// ---- independent swap oracle --------------------------------------------

inline double mean_ref(const PreferenceTables& p, int i, const std::vector<int>& a) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] == i) {
            sum += p.ur_ref_pref(i, static_cast<int>(k));
            ++count;
        }
    return count ? sum / count : 0.0;
}

/// Every affected agent weakly better, one strictly.
inline bool oracle_approves(const PreferenceTables& p, const std::vector<int>& before,
                            const std::vector<int>& after, std::vector<int> uts, std::vector<int> urs) {
    bool strict = false;
    for (int k : uts) {
        const double b = p.ut_pref(k, before[static_cast<std::size_t>(k)]);
        const double a = p.ut_pref(k, after[static_cast<std::size_t>(k)]);
        if (a < b) return false;
        strict = strict || a > b;
    }
    for (int i : urs) {
        const double b = mean_ref(p, i, before);
        const double a = mean_ref(p, i, after);
        if (a < b) return false;
        strict = strict || a > b;
    }
    return strict;
}

/// True when no UT pair swap or seat move is approved by every affected
/// agent with one strictly better.
inline bool swap_oracle_stable(const PreferenceTables& p, const std::vector<int>& a,
                               const std::vector<int>& quotas) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(quotas.size());
    std::vector<int> load(static_cast<std::size_t>(m), 0);
    for (int i : a) ++load[static_cast<std::size_t>(i)];
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            const int h = a[static_cast<std::size_t>(s)];
            const int g = a[static_cast<std::size_t>(t)];
            if (h == g) continue;
            std::vector<int> b = a;
            std::swap(b[static_cast<std::size_t>(s)], b[static_cast<std::size_t>(t)]);
            if (oracle_approves(p, a, b, {s, t}, {h, g})) return false;
        }
    for (int s = 0; s < n; ++s)
        for (int g = 0; g < m; ++g) {
            const int h = a[static_cast<std::size_t>(s)];
            if (g == h || load[static_cast<std::size_t>(g)] >= quotas[static_cast<std::size_t>(g)]) continue;
            std::vector<int> b = a;
            b[static_cast<std::size_t>(s)] = g;
            if (oracle_approves(p, a, b, {s}, {h, g})) return false;
        }
    return true;
}

// ---- independent move oracle ---------------------------------------------

/// Applies a move on raw coalition lists, without apply_move.
inline std::vector<UtSet> raw_move(const std::vector<UtSet>& pi, int k, std::optional<UtSet> from,
                                   std::optional<UtSet> to) {
    std::vector<UtSet> out;
    bool member = false;
    for (UtSet c : pi) {
        UtSet d = c;
        if (from && c == *from) d.erase(k);
        if (to && c == *to) d.insert(k);
        if (!d.empty()) out.push_back(d);
        member = member || d.contains(k);
    }
    if (!member) out.push_back(UtSet::single(k));
    return out;
}

inline bool oracle_accepts(bool quit, Utility vk, Utility vk2, Utility u, Utility u2) {
    if (!(u2 >= u)) return false;
    return quit ? vk2 >= vk : vk2 > vk;
}

/// True when no UT has an accepted Quit, Join or Switch; utilities from the
/// cache-free evaluator.
inline bool move_oracle_stable(const CoalitionStructure& pi, const Matching& m,
                               const ChannelSet& ch, const PhysicalParams& params) {
    const auto before = evaluate_structure(pi, m, ch, params);
    const auto& list = pi.coalitions();
    for (int k = 0; k < pi.num_uts(); ++k) {
        auto check = [&](bool quit, std::optional<UtSet> from, std::optional<UtSet> to) {
            const CoalitionStructure next(pi.num_uts(), raw_move(list, k, from, to));
            if (next == pi) return false;
            const auto after = evaluate_structure(next, m, ch, params);
            return oracle_accepts(quit, before.per_ut[static_cast<std::size_t>(k)],
                                  after.per_ut[static_cast<std::size_t>(k)], before.total, after.total);
        };
        for (UtSet a : list) {
            if (!a.contains(k)) continue;
            if (check(true, a, std::nullopt)) return false;
            for (UtSet b : list)
                if (!b.contains(k) && check(false, a, b)) return false;
        }
        for (UtSet b : list)
            if (!b.contains(k) && check(false, std::nullopt, b)) return false;
    }
    return true;
}

}  // namespace uavsec::testing

#endif  // UAVSEC_TESTS_ORACLES_HPP
