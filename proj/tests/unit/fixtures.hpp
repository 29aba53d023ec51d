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

#ifndef UAVSEC_TESTS_FIXTURES_HPP
#define UAVSEC_TESTS_FIXTURES_HPP

#include <cmath>
#include <complex>
#include <numbers>

#include "uavsec/beamforming.hpp"
#include "uavsec/geometry.hpp"
#include "uavsec/random.hpp"

namespace uavsec::testing {

/// Gain with the given power |h|^2 and phase.
inline ComplexGain gain(double power, double phase = 0.0) { return {std::sqrt(power), phase}; }

/// Random complex entries with magnitude in [0.1, 1) and uniform phase.
inline std::complex<double> random_entry(Rng& rng) {
    return std::polar(rng.uniform(0.1, 1.0), 2.0 * std::numbers::pi * rng.uniform());
}

inline CVector random_vector(Rng& rng, int n) {
    CVector v(n);
    for (int r = 0; r < n; ++r) v(r) = random_entry(rng);
    return v;
}

inline CMatrix random_matrix(Rng& rng, int rows, int cols) {
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = random_entry(rng);
    return m;
}

/// Small default-parameter layout for property tests.
inline DeploymentConfig small_config(int n, int m, int s, int q) {
    DeploymentConfig d;
    d.num_uts = n;
    d.num_urs = m;
    d.num_ues = s;
    d.quota = q;
    return d;
}

}  // namespace uavsec::testing

#endif  // UAVSEC_TESTS_FIXTURES_HPP
