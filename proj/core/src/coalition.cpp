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

#include "uavsec/coalition.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "uavsec/beamforming.hpp"
#include "uavsec/errors.hpp"
#include "uavsec/random.hpp"

namespace uavsec {

namespace {

std::vector<UtSet> canonical(std::vector<UtSet> coalitions) {
    std::erase_if(coalitions, [](UtSet c) { return c.empty(); });
    std::sort(coalitions.begin(), coalitions.end());
    coalitions.erase(std::unique(coalitions.begin(), coalitions.end()), coalitions.end());
    return coalitions;
}

std::vector<UtSet> derive_groups(int n, const std::vector<UtSet>& coalitions) {
    std::vector<UtSet> groups(static_cast<std::size_t>(n));
    for (UtSet c : coalitions)
        c.for_each([&](int k) { groups[static_cast<std::size_t>(k)] |= c; });
    return groups;
}

}  // namespace

CoalitionStructure::CoalitionStructure(int num_uts, std::vector<UtSet> coalitions)
    : n_(num_uts), coalitions_(canonical(std::move(coalitions))) {
    if (n_ < 1 || n_ > UtSet::kCapacity) throw InternalError("CoalitionStructure: bad UT count");
    UtSet covered;
    for (UtSet c : coalitions_) covered |= c;
    if (covered != UtSet::first_n(n_))
        throw InternalError("CoalitionStructure: coalitions must cover exactly UTs 0..N-1");
    groups_ = derive_groups(n_, coalitions_);
}

bool CoalitionStructure::contains(UtSet coalition) const noexcept {
    return std::binary_search(coalitions_.begin(), coalitions_.end(), coalition);
}

std::size_t CoalitionStructure::hash() const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(n_);
    for (UtSet c : coalitions_) h = mix_seed(h, c.bits());
    return static_cast<std::size_t>(h);
}

void CoalitionStructure::validate() const {
    if (coalitions_ != canonical(coalitions_)) throw InternalError("CoalitionStructure: not canonical");
    UtSet covered;
    for (UtSet c : coalitions_) covered |= c;
    if (covered != UtSet::first_n(n_)) throw InternalError("CoalitionStructure: coverage broken");
    if (groups_ != derive_groups(n_, coalitions_)) throw InternalError("CoalitionStructure: stale groups");
}

UtSet group_of(int k, const CoalitionStructure& structure) { return structure.group_of(k); }

CoalitionGame::CoalitionGame(const ChannelSet& channels, const PhysicalParams& params,
                             std::span<const int> receivers)
    : channels_(&channels), params_(params), receivers_(receivers.begin(), receivers.end()),
      cache_(static_cast<std::size_t>(channels.num_uts())) {
    const int n = channels.num_uts();
    if (static_cast<int>(receivers_.size()) != n)
        throw std::invalid_argument("CoalitionGame: one receiver per UT required");
    for (int r : receivers_)
        if (r < 0 || r >= channels.num_urs()) throw std::invalid_argument("CoalitionGame: UT without receiver");
    neighborhoods_.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        UtSet nb = UtSet::single(k);
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            const double pb = params_.snr_threshold * params_.noise_power / channels.ut_ut(k, j).power();
            if (broadcast_feasible(pb, params_)) nb.insert(j);
        }
        neighborhoods_[static_cast<std::size_t>(k)] = nb;
    }
}

Utility CoalitionGame::utility(int k, UtSet group) const {
    auto& slot = cache_.at(static_cast<std::size_t>(k));
    if (auto it = slot.find(group.bits()); it != slot.end()) return it->second;
    const Utility v = coalition_utility(k, group, receiver_of(k), *channels_, params_);
    slot.emplace(group.bits(), v);
    return v;
}

namespace {

void accumulate(StructureUtility& out, Utility v) {
    out.per_ut.push_back(v);
    out.total += v;
    if (v.is_infeasible())
        ++out.infeasible_count;
    else
        out.feasible_sum += v.value();
}

}  // namespace

std::partial_ordering compare_totals(const StructureUtility& a, const StructureUtility& b) noexcept {
    if (a.infeasible_count != b.infeasible_count)
        return b.infeasible_count <=> a.infeasible_count;
    return a.feasible_sum <=> b.feasible_sum;
}

StructureUtility CoalitionGame::evaluate_groups(std::span<const UtSet> groups) const {
    StructureUtility out;
    out.per_ut.reserve(groups.size());
    out.total = Utility(0.0);
    for (std::size_t k = 0; k < groups.size(); ++k) accumulate(out, utility(static_cast<int>(k), groups[k]));
    return out;
}

std::size_t CoalitionGame::cache_size() const noexcept {
    std::size_t total = 0;
    for (const auto& m : cache_) total += m.size();
    return total;
}

StructureUtility evaluate_structure(const CoalitionStructure& structure, const Matching& matching,
                                    const ChannelSet& channels, const PhysicalParams& params) {
    StructureUtility out;
    out.total = Utility(0.0);
    for (int k = 0; k < structure.num_uts(); ++k) {
        UtSet group;
        for (UtSet c : structure.coalitions())
            if (c.contains(k)) group |= c;
        accumulate(out, coalition_utility(k, group, matching.receiver_of(k), channels, params));
    }
    return out;
}

CoalitionStructure initialize_structure(const CoalitionGame& game) {
    const int n = game.num_uts();
    const int min_size = game.num_ues() + 1;
    std::vector<UtSet> coalitions(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) coalitions[static_cast<std::size_t>(k)] = game.neighborhood(k);

    std::vector<bool> isolated(static_cast<std::size_t>(n), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (int k = 0; k < n; ++k) {
            if (isolated[static_cast<std::size_t>(k)]) continue;
            if (coalitions[static_cast<std::size_t>(k)].size() >= min_size) continue;
            isolated[static_cast<std::size_t>(k)] = true;
            changed = true;
            coalitions[static_cast<std::size_t>(k)] = UtSet::single(k);
            for (int p = 0; p < n; ++p)
                if (p != k) coalitions[static_cast<std::size_t>(p)].erase(k);
        }
    }
    return CoalitionStructure(n, std::move(coalitions));
}

const char* to_string(MoveKind kind) noexcept {
    switch (kind) {
        case MoveKind::Quit: return "quit";
        case MoveKind::Join: return "join";
        case MoveKind::Switch: return "switch";
    }
    return "?";
}

CoalitionStructure apply_move(const CoalitionStructure& structure, const Move& move) {
    const int k = move.ut;
    std::vector<UtSet> next;
    next.reserve(structure.size() + 1);
    const bool drop_from = move.kind != MoveKind::Join;
    const bool drop_to = move.kind != MoveKind::Quit;
    if (drop_from && !move.from.contains(k)) throw InternalError("apply_move: UT not in source coalition");
    if (drop_to && move.to.contains(k)) throw InternalError("apply_move: UT already in target coalition");
    if (drop_from && !structure.contains(move.from)) throw InternalError("apply_move: unknown source coalition");
    if (drop_to && !structure.contains(move.to)) throw InternalError("apply_move: unknown target coalition");

    bool still_member = false;
    for (UtSet c : structure.coalitions()) {
        if (drop_from && c == move.from) continue;
        if (drop_to && c == move.to) continue;
        next.push_back(c);
        still_member = still_member || c.contains(k);
    }
    if (drop_from) next.push_back(move.from.without(k));
    if (drop_to) {
        next.push_back(move.to.with(k));
        still_member = true;
    }
    if (!still_member) next.push_back(UtSet::single(k));
    return CoalitionStructure(structure.num_uts(), std::move(next));
}

namespace {

/// Accept test against precomputed v_k and u of the current structure.
bool accepts(MoveKind kind, Utility vk_before, const StructureUtility& u_before,
             Utility vk_after, const StructureUtility& u_after) {
    if (!(u_after.total >= u_before.total)) return false;
    return kind == MoveKind::Quit ? vk_after >= vk_before : vk_after > vk_before;
}

struct Evaluated {
    CoalitionStructure structure;
    Utility vk;
    StructureUtility u;
};

Evaluated evaluate_move(const CoalitionStructure& structure, const Move& move,
                        const CoalitionGame& game) {
    CoalitionStructure next = apply_move(structure, move);
    auto eval = game.evaluate(next);
    const Utility vk = eval.per_ut[static_cast<std::size_t>(move.ut)];
    return {std::move(next), vk, std::move(eval)};
}

}  // namespace

bool move_accepted(const CoalitionStructure& structure, const Move& move,
                   const CoalitionGame& game) {
    const auto before = game.evaluate(structure);
    const auto after = evaluate_move(structure, move, game);
    if (after.structure == structure) return false;
    return accepts(move.kind, before.per_ut[static_cast<std::size_t>(move.ut)], before, after.vk,
                   after.u);
}

CoalitionStability check_stability(const CoalitionStructure& structure, const CoalitionGame& game) {
    const auto before = game.evaluate(structure);
    for (int k = 0; k < structure.num_uts(); ++k) {
        const Utility vk = before.per_ut[static_cast<std::size_t>(k)];
        auto try_move = [&](const Move& m) {
            const auto after = evaluate_move(structure, m, game);
            return !(after.structure == structure) &&
                   accepts(m.kind, vk, before, after.vk, after.u);
        };
        for (UtSet a : structure.coalitions()) {
            if (!a.contains(k)) continue;
            if (Move m{MoveKind::Quit, k, a, {}}; try_move(m)) return {false, m};
        }
        for (UtSet b : structure.coalitions()) {
            if (b.contains(k)) continue;
            if (Move m{MoveKind::Join, k, {}, b}; try_move(m)) return {false, m};
        }
        for (UtSet a : structure.coalitions()) {
            if (!a.contains(k)) continue;
            for (UtSet b : structure.coalitions()) {
                if (b.contains(k)) continue;
                if (Move m{MoveKind::Switch, k, a, b}; try_move(m)) return {false, m};
            }
        }
    }
    return {};
}

std::optional<CoalitionStructure> ocf_step(const CoalitionStructure& pi,
                                           const CoalitionGame& game, Rng& rng,
                                           const StructureSet* visited) {
    const auto current = game.evaluate(pi);
    // While u is infeasible only infeasible UTs move, and only by quitting.
    const bool repair = current.total.is_infeasible();
    // (C_a, C_b) candidates; an empty C_b stands for "no join target".
    std::vector<std::pair<UtSet, std::optional<UtSet>>> pairs;
    std::optional<Evaluated> best;
    for (int k = 0; k < pi.num_uts(); ++k) {
        const Utility vk = current.per_ut[static_cast<std::size_t>(k)];
        if (repair && vk.is_finite()) continue;
        pairs.clear();
        for (UtSet a : pi.coalitions()) {
            if (!a.contains(k)) continue;
            pairs.emplace_back(a, std::nullopt);
            for (UtSet b : pi.coalitions())
                if (!b.contains(k)) pairs.emplace_back(a, b);
        }
        rng.shuffle(std::span(pairs));

        std::unordered_map<std::uint64_t, std::optional<Evaluated>> quit_memo;
        std::unordered_map<std::uint64_t, std::optional<Evaluated>> join_memo;
        auto tested = [&](const Move& m) -> std::optional<Evaluated> {
            auto e = evaluate_move(pi, m, game);
            if (e.structure == pi || !accepts(m.kind, vk, current, e.vk, e.u)) return std::nullopt;
            if (visited && visited->contains(e.structure)) return std::nullopt;
            return e;
        };

        // Every accepted move competes; within a pair Quit, Join, Switch are
        // offered in that order, so earlier ones win exact ties.
        std::optional<Evaluated> chosen;
        auto offer = [&](const std::optional<Evaluated>& e) {
            if (e && (!chosen || compare_totals(e->u, chosen->u) > 0)) chosen = e;
        };
        for (const auto& [a, b] : pairs) {
            auto qit = quit_memo.find(a.bits());
            if (qit == quit_memo.end())
                qit = quit_memo.emplace(a.bits(), tested(Move{MoveKind::Quit, k, a, {}})).first;
            offer(qit->second);
            if (!b || repair) continue;
            auto jit = join_memo.find(b->bits());
            if (jit == join_memo.end())
                jit = join_memo.emplace(b->bits(), tested(Move{MoveKind::Join, k, {}, *b})).first;
            offer(jit->second);
            offer(tested(Move{MoveKind::Switch, k, a, *b}));
        }
        if (chosen && (!best || compare_totals(chosen->u, best->u) > 0)) best = std::move(chosen);
    }
    if (!best) return std::nullopt;
    return std::move(best->structure);
}

OcfResult ocf_iterate(const CoalitionStructure& initial, const CoalitionGame& game,
                      const OcfOptions& options) {
    if (initial.num_uts() != game.num_uts()) throw std::invalid_argument("ocf_iterate: size mismatch");
    Rng rng(options.seed);
    OcfResult result;
    result.structure = initial;
    result.trace.push_back(game.total(initial));

    StructureSet visited;
    visited.insert(initial);

    for (;;) {
        auto next = ocf_step(result.structure, game, rng, &visited);
        if (!next) break;
        if (result.rounds >= options.max_rounds) throw NonConvergenceError("ocf_iterate: round cap reached");
        if (!visited.insert(*next).second)
            throw InternalError("ocf_iterate: coalition structure revisited");
        result.structure = std::move(*next);
        result.trace.push_back(game.total(result.structure));
        ++result.rounds;
    }

    if (!check_stability(result.structure, game).stable)
        throw InternalError("ocf_iterate: terminal structure is not stable");
    return result;
}

CoalitionStructure as_baseline(int num_uts) {
    std::vector<UtSet> singles;
    for (int k = 0; k < num_uts; ++k) singles.push_back(UtSet::single(k));
    return CoalitionStructure(num_uts, std::move(singles));
}

std::vector<UtSet> fgs_groups(const CoalitionGame& game) {
    std::vector<UtSet> groups;
    for (int k = 0; k < game.num_uts(); ++k) {
        const UtSet nb = game.neighborhood(k);
        groups.push_back(nb.size() >= game.num_ues() + 1 ? nb : UtSet::single(k));
    }
    return groups;
}

std::vector<UtSet> partition_groups(std::span<const UtSet> partition, int num_uts) {
    std::vector<UtSet> groups(static_cast<std::size_t>(num_uts));
    for (UtSet block : partition) block.for_each([&](int k) { groups[static_cast<std::size_t>(k)] = block; });
    return groups;
}

namespace {

Utility block_value(UtSet block, const CoalitionGame& game) {
    Utility sum(0.0);
    block.for_each([&](int k) { sum += game.utility(k, block); });
    return sum;
}

/// Calls f(indices) for every r-subset of [0, n) in lexicographic order
/// until f returns true.
template <typename F>
bool for_each_subset(int n, int r, F&& f) {
    if (r > n) return false;
    std::vector<int> idx(static_cast<std::size_t>(r));
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        if (f(std::span<const int>(idx))) return true;
        int pos = r - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - r + pos) --pos;
        if (pos < 0) return false;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < r; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

std::vector<UtSet> dcs_partition(const CoalitionGame& game, int q) {
    if (q < 2 || q > 6) throw std::invalid_argument("dcs_partition: q must be in [2, 6]");
    std::vector<UtSet> blocks;
    for (int k = 0; k < game.num_uts(); ++k) blocks.push_back(UtSet::single(k));

    auto try_merge = [&]() {
        const int count = static_cast<int>(blocks.size());
        for (int r = 2; r <= std::min(q, count); ++r) {
            std::vector<int> chosen;
            const bool found = for_each_subset(count, r, [&](std::span<const int> idx) {
                UtSet merged;
                Utility before(0.0);
                for (int j : idx) {
                    merged |= blocks[static_cast<std::size_t>(j)];
                    before += block_value(blocks[static_cast<std::size_t>(j)], game);
                }
                if (block_value(merged, game) > before) {
                    chosen.assign(idx.begin(), idx.end());
                    return true;
                }
                return false;
            });
            if (found) {
                UtSet merged;
                for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
                    merged |= blocks[static_cast<std::size_t>(*it)];
                    blocks.erase(blocks.begin() + *it);
                }
                blocks.push_back(merged);
                return true;
            }
        }
        return false;
    };

    auto try_split = [&]() {
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const UtSet block = blocks[j];
            if (block.size() < 2) continue;
            const auto members = block.members();
            const Utility before = block_value(block, game);
            // Part A always holds the lowest member; enumerate the rest.
            const int rest = static_cast<int>(members.size()) - 1;
            for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << rest); ++mask) {
                UtSet a = UtSet::single(members[0]);
                for (int b = 0; b < rest; ++b)
                    if ((mask >> b) & 1U) a.insert(members[static_cast<std::size_t>(b + 1)]);
                const UtSet other = block - a;
                if (block_value(a, game) + block_value(other, game) > before) {
                    blocks[j] = a;
                    blocks.push_back(other);
                    return true;
                }
            }
        }
        return false;
    };

    for (long guard = 0;; ++guard) {
        if (guard > 1'000'000) throw NonConvergenceError("dcs_partition: iteration cap reached");
        if (try_merge()) continue;
        if (try_split()) continue;
        break;
    }
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

DcsResult dcs_baseline(const CoalitionGame& game, int max_q) {
    DcsResult best;
    bool have = false;
    for (int q = 2; q <= max_q; ++q) {
        auto part = dcs_partition(game, q);
        const auto groups = partition_groups(part, game.num_uts());
        const Utility total = game.evaluate_groups(groups).total;
        if (!have || total > best.total) {
            best = DcsResult{std::move(part), q, total};
            have = true;
        }
    }
    return best;
}

}  // namespace uavsec
