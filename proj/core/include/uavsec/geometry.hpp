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

#ifndef UAVSEC_GEOMETRY_HPP
#define UAVSEC_GEOMETRY_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace uavsec {

struct Position3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Position3D&, const Position3D&) = default;
};

/// Euclidean distance in meters.
double distance(const Position3D& p, const Position3D& q) noexcept;

/// Physical-layer constants of one trial, all in linear SI units.
struct PhysicalParams {
    double path_loss_exponent = 2.0;  ///< alpha
    double noise_power = 1e-9;        ///< sigma^2 [W], -60 dBm
    double power_budget = 1e-2;       ///< P0 [W], 10 dBm
    double bandwidth = 1e5;           ///< W [Hz]
    double snr_threshold = 10.0;      ///< decoding threshold, linear (10 dB)

    /// Throws ConfigError naming the first non-positive or non-finite field.
    void validate() const;

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

double dbm_to_watts(double dbm) noexcept;
double watts_to_dbm(double watts) noexcept;
double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// Closed altitude (or horizontal) interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Deployment volume. Horizontal extent is shared by all roles; each role
/// has its own altitude slab.
struct DeploymentRegion {
    Interval x{0.0, 2000.0};
    Interval y{0.0, 2000.0};
    Interval ut_z{0.0, 500.0};
    Interval ur_z{500.0, 1000.0};
    Interval ue_z{0.0, 1000.0};

    void validate() const;

    friend bool operator==(const DeploymentRegion&, const DeploymentRegion&) = default;
};

/// Everything needed to draw one random layout.
struct DeploymentConfig {
    int num_uts = 12;           ///< N
    int num_urs = 3;            ///< M
    int num_ues = 2;            ///< S
    int quota = 4;              ///< Q, identical for every UR
    PhysicalParams params{};
    DeploymentRegion region{};

    /// Checks counts, bounds, params and the seating constraint M*Q >= N.
    void validate() const;

    friend bool operator==(const DeploymentConfig&, const DeploymentConfig&) = default;
};

/// One immutable random layout.
struct Scenario {
    std::vector<Position3D> uts;
    std::vector<Position3D> urs;
    std::vector<Position3D> ues;
    PhysicalParams params{};
    std::vector<int> quotas;  ///< one per UR

    int num_uts() const noexcept { return static_cast<int>(uts.size()); }
    int num_urs() const noexcept { return static_cast<int>(urs.size()); }
    int num_ues() const noexcept { return static_cast<int>(ues.size()); }
    long total_seats() const noexcept;

    /// Throws ConfigError on empty roles or non-finite coordinates, and
    /// InfeasibleError when the quotas cannot seat every UT.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Uniform layout in the configured slabs. Each role draws from its own
/// stream, so changing one count leaves the other roles' positions fixed.
Scenario sample_scenario(const DeploymentConfig& config, std::uint64_t seed);

/// LoS gain h = d^(-alpha/2) e^(j theta).
struct ComplexGain {
    double magnitude = 0.0;
    double phase = 0.0;  ///< radians in [0, 2pi)

    std::complex<double> value() const { return std::polar(magnitude, phase); }
    double power() const noexcept { return magnitude * magnitude; }
};

/// LoS path-loss magnitude d^(-alpha/2). Throws DegenerateGeometryError
/// for d <= 0.
double los_magnitude(double d, double path_loss_exponent);

/// All UT-UR, UT-UE and UT-UT gains of a scenario.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(int num_uts, int num_urs, int num_ues);

    int num_uts() const noexcept { return n_; }
    int num_urs() const noexcept { return m_; }
    int num_ues() const noexcept { return s_; }

    const ComplexGain& ut_ur(int k, int i) const { return ut_ur_[idx(k, i, m_)]; }
    const ComplexGain& ut_ue(int k, int s) const { return ut_ue_[idx(k, s, s_)]; }
    /// Symmetric; the diagonal is unused and holds a zero gain.
    const ComplexGain& ut_ut(int k, int j) const { return ut_ut_[idx(k, j, n_)]; }

    ComplexGain& ut_ur(int k, int i) { return ut_ur_[idx(k, i, m_)]; }
    ComplexGain& ut_ue(int k, int s) { return ut_ue_[idx(k, s, s_)]; }
    ComplexGain& ut_ut(int k, int j) { return ut_ut_[idx(k, j, n_)]; }

private:
    static std::size_t idx(int r, int c, int cols) {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(c);
    }

    int n_ = 0;
    int m_ = 0;
    int s_ = 0;
    std::vector<ComplexGain> ut_ur_;
    std::vector<ComplexGain> ut_ue_;
    std::vector<ComplexGain> ut_ut_;
};

/// Realizes every gain of the scenario. The phase of each link is a pure
/// function of (seed, link kind, endpoints), so it does not depend on the
/// node counts; UT-UT gains are reciprocal.
ChannelSet realize_channels(const Scenario& scenario, std::uint64_t seed);

/// Received SNR P|h|^2 / sigma^2.
inline double snr(double tx_power, double gain_sq, double noise) noexcept {
    return tx_power * gain_sq / noise;
}

/// Radius of the effective communication circle: the largest UT-UT
/// distance a source can reach at the decoding threshold within P0.
double effective_radius(const PhysicalParams& params) noexcept;

}  // namespace uavsec

#endif  // UAVSEC_GEOMETRY_HPP
