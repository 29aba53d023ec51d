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

#include "uavsec/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavsec/errors.hpp"

namespace uavsec {

CMatrix eavesdropper_projector(const CMatrix& h_te) {
    const Eigen::Index n = h_te.rows();
    if (h_te.cols() == 0) return CMatrix::Zero(n, n);
    Eigen::ColPivHouseholderQR<CMatrix> qr(h_te);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < h_te.cols()) throw SingularProjectorError("eavesdropper channels are rank deficient");
    const CMatrix gram = h_te.adjoint() * h_te;
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success) throw SingularProjectorError("Gram matrix not positive definite");
    return h_te * llt.solve(h_te.adjoint());
}

BeamformingSolution null_steering_weights(const BeamformingProblem& problem) {
    const auto& h = problem.to_receiver;
    const auto& e = problem.to_eavesdroppers;
    const Eigen::Index n = h.size();
    const Eigen::Index s = e.cols();
    if (e.rows() != n && s > 0) throw std::invalid_argument("null_steering_weights: shape mismatch");
    if (n <= s) throw std::invalid_argument("null_steering_weights: need more transmitters than eavesdroppers");
    if (!(problem.power_budget > 0.0)) throw std::invalid_argument("null_steering_weights: power budget must be positive");

    CVector projected = h;
    if (s > 0) {
        Eigen::ColPivHouseholderQR<CMatrix> qr(e);
        qr.setThreshold(kRankTolerance);
        if (qr.rank() < s) throw SingularProjectorError("eavesdropper channels are rank deficient");
        // Orthonormal basis of span(H_E) is the leading s columns of Q.
        const CMatrix basis = CMatrix(qr.householderQ()).leftCols(s);
        projected -= basis * (basis.adjoint() * h);
    }
    const double norm = projected.norm();
    if (!(norm > kRankTolerance * h.norm()))
        throw ZeroProjectionError("receiver channel lies in the eavesdropper span");

    BeamformingSolution sol;
    sol.weights = (std::sqrt(problem.power_budget) / norm) * projected;
    sol.array_gain = std::norm(sol.weights.dot(h));
    for (Eigen::Index c = 0; c < s; ++c)
        sol.residual_leakage = std::max(sol.residual_leakage, std::abs(sol.weights.dot(e.col(c))));
    return sol;
}

BeamformingProblem make_problem(UtSet group, int receiver, const ChannelSet& channels,
                                const PhysicalParams& params) {
    const int n = group.size();
    const int s = channels.num_ues();
    BeamformingProblem p;
    p.to_receiver.resize(n);
    p.to_eavesdroppers.resize(n, s);
    p.power_budget = params.power_budget;
    int row = 0;
    group.for_each([&](int k) {
        p.to_receiver(row) = channels.ut_ur(k, receiver).value();
        for (int e = 0; e < s; ++e) p.to_eavesdroppers(row, e) = channels.ut_ue(k, e).value();
        ++row;
    });
    return p;
}

double direct_secrecy_rate(int k, int i, const ChannelSet& channels, const PhysicalParams& params) {
    const double p0 = params.power_budget;
    const double noise = params.noise_power;
    const double legit = std::log2(1.0 + snr(p0, channels.ut_ur(k, i).power(), noise));
    double leak = 0.0;
    for (int s = 0; s < channels.num_ues(); ++s)
        leak = std::max(leak, std::log2(1.0 + snr(p0, channels.ut_ue(k, s).power(), noise)));
    return std::max(legit - leak, 0.0);
}

double broadcast_power(int k, UtSet group, const ChannelSet& channels,
                       const PhysicalParams& params) {
    const UtSet allies = group.without(k);
    if (allies.empty()) throw NoRelaysError("broadcast_power: group has no relays");
    double weakest = 0.0;
    bool first = true;
    allies.for_each([&](int j) {
        const double g = channels.ut_ut(k, j).power();
        if (first || g < weakest) weakest = g;
        first = false;
    });
    return params.snr_threshold * params.noise_power / weakest;
}

bool broadcast_feasible(double broadcast_power, const PhysicalParams& params) noexcept {
    return broadcast_power <= params.power_budget * (1.0 + 1e-12);
}

double broadcast_cost(int k, double broadcast_power, const ChannelSet& channels,
                      const PhysicalParams& params) {
    double worst = 0.0;
    for (int s = 0; s < channels.num_ues(); ++s)
        worst = std::max(worst, std::log2(1.0 + snr(broadcast_power, channels.ut_ue(k, s).power(),
                                                     params.noise_power)));
    return 0.5 * worst;
}

double cooperative_payoff(int k, int receiver, const BeamformingSolution& solution,
                          double broadcast_power, const ChannelSet& channels,
                          const PhysicalParams& params) {
    const double a = 1.0 + snr(broadcast_power, channels.ut_ur(k, receiver).power(),
                               params.noise_power);
    return 0.5 * std::log2(a + solution.array_gain / params.noise_power);
}

CoalitionTransmission describe_transmission(int k, UtSet group, int receiver,
                                            const ChannelSet& channels,
                                            const PhysicalParams& params) {
    if (!group.contains(k)) throw std::invalid_argument("describe_transmission: source not in group");
    CoalitionTransmission t;
    t.source = k;
    t.group = group;
    t.receiver = receiver;

    if (group.size() == 1) {
        t.branch = UtilityBranch::Direct;
        t.utility = Utility(direct_secrecy_rate(k, receiver, channels, params));
        return t;
    }
    t.broadcast_power = broadcast_power(k, group, channels, params);
    if (group.size() < channels.num_ues() + 1 || !broadcast_feasible(t.broadcast_power, params))
        return t;

    BeamformingSolution sol;
    try {
        sol = null_steering_weights(make_problem(group, receiver, channels, params));
    } catch (const ZeroProjectionError&) {
        return t;
    } catch (const SingularProjectorError&) {
        return t;
    }
    t.branch = UtilityBranch::Cooperative;
    t.payoff = cooperative_payoff(k, receiver, sol, t.broadcast_power, channels, params);
    t.cost = broadcast_cost(k, t.broadcast_power, channels, params);
    t.utility = Utility(std::max(t.payoff - t.cost, 0.0));
    return t;
}

}  // namespace uavsec
