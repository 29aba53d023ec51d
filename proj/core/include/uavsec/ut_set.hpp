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

#ifndef UAVSEC_UT_SET_HPP
#define UAVSEC_UT_SET_HPP

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace uavsec {

/// Set of UT indices in [0, 64), stored as a bitmask.
class UtSet {
public:
    static constexpr int kCapacity = 64;

    constexpr UtSet() noexcept = default;
    constexpr explicit UtSet(std::uint64_t bits) noexcept : bits_(bits) {}
    constexpr UtSet(std::initializer_list<int> members) noexcept {
        for (int k : members) insert(k);
    }

    static constexpr UtSet single(int k) noexcept { return UtSet(std::uint64_t{1} << k); }
    static constexpr UtSet first_n(int n) noexcept {
        return UtSet(n >= kCapacity ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }

    constexpr std::uint64_t bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr int size() const noexcept { return std::popcount(bits_); }
    constexpr bool contains(int k) const noexcept { return (bits_ >> k) & 1U; }

    constexpr void insert(int k) noexcept { bits_ |= std::uint64_t{1} << k; }
    constexpr void erase(int k) noexcept { bits_ &= ~(std::uint64_t{1} << k); }

    constexpr UtSet with(int k) const noexcept { return UtSet(bits_ | (std::uint64_t{1} << k)); }
    constexpr UtSet without(int k) const noexcept {
        return UtSet(bits_ & ~(std::uint64_t{1} << k));
    }

    constexpr bool is_subset_of(UtSet other) const noexcept {
        return (bits_ & ~other.bits_) == 0;
    }

    /// Members in ascending index order.
    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for_each([&](int k) { out.push_back(k); });
        return out;
    }

    template <typename F>
    constexpr void for_each(F&& f) const {
        std::uint64_t b = bits_;
        while (b != 0) {
            f(std::countr_zero(b));
            b &= b - 1;
        }
    }

    friend constexpr UtSet operator|(UtSet a, UtSet b) noexcept { return UtSet(a.bits_ | b.bits_); }
    friend constexpr UtSet operator&(UtSet a, UtSet b) noexcept { return UtSet(a.bits_ & b.bits_); }
    friend constexpr UtSet operator-(UtSet a, UtSet b) noexcept {
        return UtSet(a.bits_ & ~b.bits_);
    }
    UtSet& operator|=(UtSet o) noexcept {
        bits_ |= o.bits_;
        return *this;
    }

    friend constexpr bool operator==(UtSet, UtSet) = default;
    friend constexpr auto operator<=>(UtSet, UtSet) = default;

private:
    std::uint64_t bits_ = 0;
};

}  // namespace uavsec

template <>
struct std::hash<uavsec::UtSet> {
    std::size_t operator()(uavsec::UtSet s) const noexcept {
        return std::hash<std::uint64_t>{}(s.bits());
    }
};

#endif  // UAVSEC_UT_SET_HPP
