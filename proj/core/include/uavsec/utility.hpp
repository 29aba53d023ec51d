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

#ifndef UAVSEC_UTILITY_HPP
#define UAVSEC_UTILITY_HPP

#include <compare>
#include <ostream>

namespace uavsec {

/// A UT or structure utility that is either a finite real or the
/// "infeasible" value, ordered strictly below every real.
///
/// Infeasible absorbs in sums. It is never converted to a floating-point
/// infinity; value() on an infeasible utility throws.
class Utility {
public:
    constexpr Utility() noexcept = default;
    constexpr explicit Utility(double v) noexcept : value_(v) {}

    static constexpr Utility infeasible() noexcept {
        Utility u;
        u.infeasible_ = true;
        return u;
    }

    constexpr bool is_infeasible() const noexcept { return infeasible_; }
    constexpr bool is_finite() const noexcept { return !infeasible_; }

    /// Throws std::logic_error when infeasible.
    double value() const;

    /// The finite value, or `fallback` when infeasible.
    constexpr double value_or(double fallback) const noexcept {
        return infeasible_ ? fallback : value_;
    }

    friend constexpr Utility operator+(Utility a, Utility b) noexcept {
        if (a.infeasible_ || b.infeasible_) return infeasible();
        return Utility(a.value_ + b.value_);
    }
    Utility& operator+=(Utility o) noexcept { return *this = *this + o; }

    friend constexpr bool operator==(Utility a, Utility b) noexcept {
        if (a.infeasible_ || b.infeasible_) return a.infeasible_ == b.infeasible_;
        return a.value_ == b.value_;
    }

    friend constexpr std::partial_ordering operator<=>(Utility a, Utility b) noexcept {
        if (a.infeasible_ && b.infeasible_) return std::partial_ordering::equivalent;
        if (a.infeasible_) return std::partial_ordering::less;
        if (b.infeasible_) return std::partial_ordering::greater;
        return a.value_ <=> b.value_;
    }

    friend std::ostream& operator<<(std::ostream& os, Utility u);

private:
    double value_ = 0.0;
    bool infeasible_ = false;
};

}  // namespace uavsec

#endif  // UAVSEC_UTILITY_HPP
