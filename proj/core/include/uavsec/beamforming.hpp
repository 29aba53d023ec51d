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

#ifndef UAVSEC_BEAMFORMING_HPP
#define UAVSEC_BEAMFORMING_HPP

#include <Eigen/Dense>

#include "uavsec/geometry.hpp"
#include "uavsec/ut_set.hpp"
#include "uavsec/utility.hpp"

namespace uavsec {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Rank threshold for the eavesdropper channel matrix, relative to its
/// largest pivot.
inline constexpr double kRankTolerance = 1e-12;

/// One null-steering instance: n transmitters, S eavesdroppers.
struct BeamformingProblem {
    CVector to_receiver;       ///< n channels toward the intended receiver
    CMatrix to_eavesdroppers;  ///< n x S, one column per eavesdropper
    double power_budget = 0.0;

    int num_transmitters() const noexcept { return static_cast<int>(to_receiver.size()); }
    int num_eavesdroppers() const noexcept { return static_cast<int>(to_eavesdroppers.cols()); }
};

struct BeamformingSolution {
    CVector weights;
    double array_gain = 0.0;        ///< |w^H h_R|^2
    double residual_leakage = 0.0;  ///< max_s |w^H h_E,s|
};

/// Orthogonal projector onto span(H): H (H^H H)^-1 H^H, via a Cholesky
/// solve of the Gram matrix. Throws SingularProjectorError when H is rank
/// deficient.
CMatrix eavesdropper_projector(const CMatrix& h_te);

/// Maximizes |w^H h_R|^2 subject to w^H w <= P0 and w^H H_E = 0.
///
/// The optimum is w = sqrt(P0) (I - U) h_R / ||(I - U) h_R||, with U the
/// projector onto the eavesdropper span; the projection is computed from a
/// column-pivoted QR of H_E rather than by forming U.
///
/// Throws std::invalid_argument if n <= S, SingularProjectorError if H_E is
/// rank deficient, and ZeroProjectionError if h_R lies in span(H_E).
BeamformingSolution null_steering_weights(const BeamformingProblem& problem);

/// Stacks the channels of `group` (ascending UT index) toward UR `receiver`
/// and toward every UE.
BeamformingProblem make_problem(UtSet group, int receiver, const ChannelSet& channels,
                                const PhysicalParams& params);

/// Secrecy rate of UT k transmitting alone to UR i at full power.
double direct_secrecy_rate(int k, int i, const ChannelSet& channels, const PhysicalParams& params);

/// Power the source needs so that every relay in its group decodes at the
/// threshold: gamma * sigma^2 / |h_k,far|^2 for the weakest (furthest)
/// ally. Throws NoRelaysError if the group has no member besides k.
double broadcast_power(int k, UtSet group, const ChannelSet& channels,
                       const PhysicalParams& params);

/// P_b <= P0, with 1e-12 relative slack so that an ally sitting exactly on
/// the effective radius stays feasible.
bool broadcast_feasible(double broadcast_power, const PhysicalParams& params) noexcept;

/// Secrecy loss of the half-slot broadcast: 0.5 max_s log2(1 + P_b|h_ks|^2/sigma^2).
double broadcast_cost(int k, double broadcast_power, const ChannelSet& channels,
                      const PhysicalParams& params);

/// Secrecy rate of the cooperative half-slot: 0.5 log2(a + |w^H h_R|^2/sigma^2)
/// with a = 1 + P_b |h_ki|^2 / sigma^2.
double cooperative_payoff(int k, int receiver, const BeamformingSolution& solution,
                          double broadcast_power, const ChannelSet& channels,
                          const PhysicalParams& params);

/// Which case of the utility law applied to a group.
enum class UtilityBranch {
    Direct,       ///< |F_k| = 1
    Cooperative,  ///< |F_k| >= S+1 and P_b <= P0, nulling succeeded
    Infeasible,   ///< everything else
};

/// Full breakdown of UT k's transmission with group F_k toward UR `receiver`.
struct CoalitionTransmission {
    int source = 0;
    UtSet group;
    int receiver = 0;
    UtilityBranch branch = UtilityBranch::Infeasible;
    double broadcast_power = 0.0;  ///< 0 for the direct branch
    double payoff = 0.0;           ///< C_k, cooperative branch only
    double cost = 0.0;             ///< c_k, cooperative branch only
    Utility utility = Utility::infeasible();
};

CoalitionTransmission describe_transmission(int k, UtSet group, int receiver,
                                            const ChannelSet& channels,
                                            const PhysicalParams& params);

/// v_k: direct rate when alone, [C_k - c_k]^+ for a feasible cooperative
/// group, infeasible otherwise.
inline Utility coalition_utility(int k, UtSet group, int receiver, const ChannelSet& channels,
                                 const PhysicalParams& params) {
    return describe_transmission(k, group, receiver, channels, params).utility;
}

}  // namespace uavsec

#endif  // UAVSEC_BEAMFORMING_HPP
