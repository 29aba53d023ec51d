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

#ifndef UAVSEC_CLI_VERIFY_HPP
#define UAVSEC_CLI_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace uavsec::cli {

struct SuiteReport {
    std::string name;
    int instances = 0;
    int failures = 0;
    std::string first_failure;
};

/// Beamforming optimality, pairwise stability of the proposed matching and
/// stability of the formation dynamics on `instances` random instances each.
std::vector<SuiteReport> run_verification(std::uint64_t seed, int instances);

}  // namespace uavsec::cli

#endif  // UAVSEC_CLI_VERIFY_HPP
