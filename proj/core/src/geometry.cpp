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

#include "uavsec/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "uavsec/errors.hpp"
#include "uavsec/random.hpp"

namespace uavsec {

namespace {

enum class Role : std::uint64_t { Ut = 1, Ur = 2, Ue = 3 };
enum class LinkKind : std::uint64_t { UtUr = 11, UtUe = 12, UtUt = 13 };

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0))
        throw ConfigError(std::string(name) + " must be positive and finite, got " +
                          std::to_string(v));
}

void require_interval(const Interval& iv, const char* name) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
        throw ConfigError(std::string(name) + ": lower bound must be below upper bound");
}

std::vector<Position3D> sample_role(const DeploymentRegion& region, const Interval& z,
                                    int count, std::uint64_t seed, Role role) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(role)));
    std::vector<Position3D> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) {
        Position3D p;
        p.x = rng.uniform(region.x.lo, region.x.hi);
        p.y = rng.uniform(region.y.lo, region.y.hi);
        p.z = rng.uniform(z.lo, z.hi);
        out.push_back(p);
    }
    return out;
}

double link_phase(std::uint64_t seed, LinkKind kind, int a, int b) {
    std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(kind));
    s = mix_seed(s, static_cast<std::uint64_t>(a));
    s = mix_seed(s, static_cast<std::uint64_t>(b));
    return 2.0 * std::numbers::pi * unit_interval(s);
}

ComplexGain make_gain(const Position3D& p, const Position3D& q, double alpha,
                      double phase, const char* what) {
    const double d = distance(p, q);
    if (!(d > 0.0)) throw DegenerateGeometryError(std::string("co-located ") + what);
    return ComplexGain{los_magnitude(d, alpha), phase};
}

}  // namespace

double distance(const Position3D& p, const Position3D& q) noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dz = p.z - q.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double watts_to_dbm(double watts) noexcept { return 10.0 * std::log10(watts * 1e3); }
double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

void PhysicalParams::validate() const {
    require_positive(path_loss_exponent, "path_loss_exponent");
    require_positive(noise_power, "noise_power");
    require_positive(power_budget, "power_budget");
    require_positive(bandwidth, "bandwidth");
    require_positive(snr_threshold, "snr_threshold");
}

void DeploymentRegion::validate() const {
    require_interval(x, "region.x");
    require_interval(y, "region.y");
    require_interval(ut_z, "region.ut_z");
    require_interval(ur_z, "region.ur_z");
    require_interval(ue_z, "region.ue_z");
    if (ut_z.lo < 0.0 || ur_z.lo < 0.0 || ue_z.lo < 0.0)
        throw ConfigError("region: altitudes must be non-negative");
}

void DeploymentConfig::validate() const {
    if (num_uts < 1) throw ConfigError("N (num_uts) must be at least 1");
    if (num_urs < 1) throw ConfigError("M (num_urs) must be at least 1");
    if (num_ues < 1) throw ConfigError("S (num_ues) must be at least 1");
    if (num_uts > 64) throw ConfigError("N (num_uts) must not exceed 64");
    params.validate();
    region.validate();
    if (static_cast<long>(num_urs) * quota < num_uts)
        throw InfeasibleError("quota: M*Q = " + std::to_string(num_urs) + "*" +
                              std::to_string(quota) + " cannot seat N = " +
                              std::to_string(num_uts) + " UTs");
}

long Scenario::total_seats() const noexcept {
    long total = 0;
    for (int q : quotas) total += q;
    return total;
}

void Scenario::validate() const {
    if (uts.empty() || urs.empty() || ues.empty())
        throw ConfigError("scenario needs at least one UT, UR and UE");
    if (quotas.size() != urs.size()) throw ConfigError("scenario: one quota per UR required");
    for (const auto* role : {&uts, &urs, &ues}) {
        for (const auto& p : *role) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) || p.z < 0.0)
                throw ConfigError("scenario: coordinates must be finite with z >= 0");
        }
    }
    params.validate();
    if (total_seats() < num_uts())
        throw InfeasibleError("scenario: total quota below number of UTs");
}

Scenario sample_scenario(const DeploymentConfig& config, std::uint64_t seed) {
    config.validate();
    Scenario sc;
    sc.uts = sample_role(config.region, config.region.ut_z, config.num_uts, seed, Role::Ut);
    sc.urs = sample_role(config.region, config.region.ur_z, config.num_urs, seed, Role::Ur);
    sc.ues = sample_role(config.region, config.region.ue_z, config.num_ues, seed, Role::Ue);
    sc.params = config.params;
    sc.quotas.assign(static_cast<std::size_t>(config.num_urs), config.quota);
    return sc;
}

double los_magnitude(double d, double path_loss_exponent) {
    if (!(d > 0.0)) throw DegenerateGeometryError("zero link distance");
    return std::pow(d, -0.5 * path_loss_exponent);
}

ChannelSet::ChannelSet(int num_uts, int num_urs, int num_ues)
    : n_(num_uts), m_(num_urs), s_(num_ues),
      ut_ur_(static_cast<std::size_t>(num_uts) * static_cast<std::size_t>(num_urs)),
      ut_ue_(static_cast<std::size_t>(num_uts) * static_cast<std::size_t>(num_ues)),
      ut_ut_(static_cast<std::size_t>(num_uts) * static_cast<std::size_t>(num_uts)) {}

ChannelSet realize_channels(const Scenario& scenario, std::uint64_t seed) {
    const int n = scenario.num_uts();
    const int m = scenario.num_urs();
    const int s = scenario.num_ues();
    const double alpha = scenario.params.path_loss_exponent;
    ChannelSet ch(n, m, s);
    for (int k = 0; k < n; ++k) {
        const auto& ut = scenario.uts[static_cast<std::size_t>(k)];
        for (int i = 0; i < m; ++i)
            ch.ut_ur(k, i) = make_gain(ut, scenario.urs[static_cast<std::size_t>(i)], alpha,
                                       link_phase(seed, LinkKind::UtUr, k, i), "UT and UR");
        for (int e = 0; e < s; ++e)
            ch.ut_ue(k, e) = make_gain(ut, scenario.ues[static_cast<std::size_t>(e)], alpha,
                                       link_phase(seed, LinkKind::UtUe, k, e), "UT and UE");
        for (int j = k + 1; j < n; ++j) {
            const ComplexGain g = make_gain(ut, scenario.uts[static_cast<std::size_t>(j)], alpha,
                                            link_phase(seed, LinkKind::UtUt, k, j), "UTs");
            ch.ut_ut(k, j) = g;
            ch.ut_ut(j, k) = g;
        }
    }
    return ch;
}

double effective_radius(const PhysicalParams& params) noexcept {
    return std::pow(params.power_budget / (params.snr_threshold * params.noise_power),
                    1.0 / params.path_loss_exponent);
}

}  // namespace uavsec
