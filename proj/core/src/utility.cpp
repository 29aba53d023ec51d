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

#include "uavsec/utility.hpp"

#include <stdexcept>

namespace uavsec {

std::ostream& operator<<(std::ostream& os, Utility u) {
    if (u.is_infeasible()) return os << "-inf";
    return os << u.value_;
}

double Utility::value() const {
    if (infeasible_) throw std::logic_error("Utility::value() on infeasible utility");
    return value_;
}

}  // namespace uavsec
