// SPDX-License-Identifier: Apache-2.0
//
// wpt-lab: beamforming policies for multi-antenna RF wireless power transfer
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef WPT_POLICY_HPP
#define WPT_POLICY_HPP

#include "wpt/channel.hpp"
#include "wpt/errors.hpp"
#include "wpt/linalg.hpp"
#include "wpt/threshold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wpt
{

enum class PolicyKind
{
    optimal_energy, // single receiver, threshold on lambda_max(W_1)
    mdpp_energy,    // drift-plus-penalty, minimize transmit power subject to per-receiver targets
    optimal_power,  // threshold on lambda_max(sum W_i)
    mdpp_power,     // drift-plus-penalty, maximize total received power under an average budget
    mmf,            // max-min fair
    qpf             // proportional fair with a per-receiver floor
};

inline constexpr std::array<std::pair<PolicyKind, std::string_view>, 6> policy_names{{
    {PolicyKind::optimal_energy, "optimal-energy"},
    {PolicyKind::mdpp_energy, "mdpp-energy"},
    {PolicyKind::optimal_power, "optimal-power"},
    {PolicyKind::mdpp_power, "mdpp-power"},
    {PolicyKind::mmf, "mmf"},
    {PolicyKind::qpf, "qpf"},
}};

inline std::string_view to_string(PolicyKind kind)
{
    for (const auto &[k, name] : policy_names)
        if (k == kind)
            return name;
    return "?";
}

inline PolicyKind parse_policy_kind(std::string_view name)
{
    for (const auto &[k, n] : policy_names)
        if (n == name)
            return k;
    throw StructuralError("unknown policy '" + std::string(name) +
                          "' (expected optimal-energy, mdpp-energy, optimal-power, mdpp-power, mmf or qpf)");
}

inline bool is_optimal(PolicyKind kind) { return kind == PolicyKind::optimal_energy || kind == PolicyKind::optimal_power; }

inline bool is_energy_limited(PolicyKind kind)
{
    return kind == PolicyKind::optimal_energy || kind == PolicyKind::mdpp_energy;
}

struct PolicyParams
{
    std::optional<double> v;        // drift-plus-penalty trade-off; unset selects default_v()
    double p_peak = 5.0;            // W
    double p_avg = 5.0;             // W, power-limited policies
    std::vector<double> p_targets;  // W per receiver, energy-limited policies
    double p_min = 0.0;             // W, proportional-fair floor

    void validate(PolicyKind kind, std::size_t receivers) const
    {
        if (!(p_peak > 0.0) || !std::isfinite(p_peak))
            throw StructuralError("policy.p_peak: must be > 0");
        if (v && !(*v > 0.0 && std::isfinite(*v)))
            throw StructuralError("policy.v: must be > 0");
        if (!is_energy_limited(kind) && !(p_avg > 0.0 && p_avg <= p_peak))
            throw StructuralError("policy.p_avg: need 0 < p_avg <= p_peak");
        if (is_energy_limited(kind))
        {
            if (p_targets.size() != receivers)
                throw StructuralError("policy.p_targets: " + std::to_string(p_targets.size()) + " targets for " +
                                      std::to_string(receivers) + " receivers");
            for (const double p : p_targets)
                if (!(p >= 0.0) || !std::isfinite(p))
                    throw StructuralError("policy.p_targets: targets must be finite and >= 0");
        }
        if (!(p_min >= 0.0) || !std::isfinite(p_min))
            throw StructuralError("policy.p_min: must be >= 0");
        if (kind == PolicyKind::optimal_energy && receivers != 1)
            throw StructuralError("optimal-energy is a single-receiver policy, scenario has " +
                                  std::to_string(receivers) + " receivers");
    }

    friend bool operator==(const PolicyParams &, const PolicyParams &) = default;
};

// Virtual queues. z: constraint queues, g: auxiliary (fairness) queues, gamma: auxiliary targets of the last slot.
struct QueueState
{
    std::vector<double> z;
    std::vector<double> g;
    std::vector<double> gamma;

    static QueueState initial(PolicyKind kind, std::size_t receivers)
    {
        switch (kind)
        {
        case PolicyKind::mdpp_energy:
            return {std::vector<double>(receivers), {}, {}};
        case PolicyKind::mdpp_power:
            return {std::vector<double>(1), {}, {}};
        case PolicyKind::mmf:
            return {std::vector<double>(1), std::vector<double>(receivers), std::vector<double>(receivers)};
        case PolicyKind::qpf:
            return {std::vector<double>(receivers + 1), std::vector<double>(receivers), std::vector<double>(receivers)};
        default:
            return {};
        }
    }

    // Lyapunov function 0.5 * sum of squares over every queue
    double lyapunov() const noexcept
    {
        double s = 0.0;
        for (const double q : z)
            s += q * q;
        for (const double q : g)
            s += q * q;
        return 0.5 * s;
    }

    friend bool operator==(const QueueState &, const QueueState &) = default;
};

struct SlotDecision
{
    BeamVector beam;
    double transmitted_power = 0.0;     // exactly 0 or p_peak
    std::vector<double> received_power; // zeta * x^* W_i x
    // Per-queue increments of this slot, z queues first then g queues (empty for the stateless policies)
    std::vector<double> deficits;
    double lambda_max = 0.0; // largest eigenvalue of the matrix the decision was taken on
    bool transmitting() const noexcept { return transmitted_power > 0.0; }
};

namespace detail
{
inline void require_shape(const QueueState &s, std::size_t nz, std::size_t ng, const char *who)
{
    if (s.z.size() != nz || s.g.size() != ng)
        throw StructuralError(std::string(who) + ": queue state has |z|=" + std::to_string(s.z.size()) +
                              ", |g|=" + std::to_string(s.g.size()) + ", expected " + std::to_string(nz) + ", " +
                              std::to_string(ng));
}

// Two-level beam along u_max(w) when `on`; fills beam, powers and lambda_max
inline SlotDecision two_level(const EigenPair &top, bool on, double p_peak, double efficiency,
                              const std::vector<GramMatrix> &grams)
{
    SlotDecision d;
    d.lambda_max = top.value;
    const std::size_t n = top.vector.size();
    d.received_power.assign(grams.size(), 0.0);
    if (!on)
    {
        d.beam = BeamVector::zeros(n);
        return d;
    }
    const double amp = std::sqrt(p_peak);
    d.beam.entries.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        d.beam.entries[j] = amp * top.vector[j];
    d.transmitted_power = p_peak;
    for (std::size_t i = 0; i < grams.size(); ++i)
        d.received_power[i] = std::max(0.0, efficiency * quad_form(grams[i], d.beam));
    return d;
}

inline double clip_update(double q, double increment) { return std::max(q + increment, 0.0); }
} // namespace detail

// Single receiver, stateless: transmit sqrt(p_peak) u_max(W_1) iff lambda_max(W_1) >= lambda_th
inline SlotDecision step_optimal_energy(const ScenarioConfig &cfg, const PolicyParams &params,
                                        const ThresholdValue &threshold, const SlotChannels &channels)
{
    if (channels.channels.size() != 1)
        throw StructuralError("step_optimal_energy: single-receiver policy given " +
                              std::to_string(channels.channels.size()) + " channels");
    const auto w = grams_of(channels);
    const EigenPair top = max_eigpair(w.front());
    return detail::two_level(top, top.value >= threshold.lambda_th, params.p_peak, cfg.efficiency, w);
}

// Energy-limited drift-plus-penalty step.
//   W' = sum_i Z_i W_i - V I ; transmit iff lambda_max(W') > 0 ; Z_i <- max(Z_i + P_i - Q_i, 0)
inline std::pair<SlotDecision, QueueState> step_mdpp_energy(const ScenarioConfig &cfg, QueueState state,
                                                            const PolicyParams &params, const SlotChannels &channels)
{
    const std::size_t k = channels.channels.size();
    detail::require_shape(state, k, 0, "step_mdpp_energy");
    const auto w = grams_of(channels);
    const EigenPair top = max_eigpair(weighted_combine(state.z, w, *params.v));
    SlotDecision d = detail::two_level(top, top.value > 0.0, params.p_peak, cfg.efficiency, w);
    d.deficits.resize(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        d.deficits[i] = params.p_targets[i] - d.received_power[i];
        state.z[i] = detail::clip_update(state.z[i], d.deficits[i]);
    }
    return {std::move(d), std::move(state)};
}

// Power-limited optimum, stateless: W' = sum_i W_i, transmit iff lambda_max(W') >= lambda_th
inline SlotDecision step_optimal_power(const ScenarioConfig &cfg, const PolicyParams &params,
                                       const ThresholdValue &threshold, const SlotChannels &channels)
{
    const auto w = grams_of(channels);
    const std::vector<double> ones(w.size(), 1.0);
    const EigenPair top = max_eigpair(weighted_combine(ones, w, 0.0));
    return detail::two_level(top, top.value >= threshold.lambda_th, params.p_peak, cfg.efficiency, w);
}

// Power-limited drift-plus-penalty step.
//   W' = V sum_i W_i - Z_1 I ; Z_1 <- max(Z_1 + P_tx - P_avg, 0)
inline std::pair<SlotDecision, QueueState> step_mdpp_power(const ScenarioConfig &cfg, QueueState state,
                                                           const PolicyParams &params, const SlotChannels &channels)
{
    detail::require_shape(state, 1, 0, "step_mdpp_power");
    const auto w = grams_of(channels);
    const std::vector<double> weights(w.size(), *params.v);
    const EigenPair top = max_eigpair(weighted_combine(weights, w, state.z[0]));
    SlotDecision d = detail::two_level(top, top.value > 0.0, params.p_peak, cfg.efficiency, w);
    d.deficits = {d.transmitted_power - params.p_avg};
    state.z[0] = detail::clip_update(state.z[0], d.deficits[0]);
    return {std::move(d), std::move(state)};
}

// Max-min fair step.
//   gamma_i = p_peak for all i if V > sum_i G_i, else 0
//   W' = sum_i G_i W_i - Z_1 I
//   Z_1 <- max(Z_1 + P_tx - P_avg, 0) ; G_i <- max(G_i + gamma_i - Q_i, 0)
inline std::pair<SlotDecision, QueueState> step_mmf(const ScenarioConfig &cfg, QueueState state,
                                                    const PolicyParams &params, const SlotChannels &channels)
{
    const std::size_t k = channels.channels.size();
    detail::require_shape(state, 1, k, "step_mmf");
    double g_sum = 0.0;
    for (const double g : state.g)
        g_sum += g;
    state.gamma.assign(k, *params.v > g_sum ? params.p_peak : 0.0);

    const auto w = grams_of(channels);
    const EigenPair top = max_eigpair(weighted_combine(state.g, w, state.z[0]));
    SlotDecision d = detail::two_level(top, top.value > 0.0, params.p_peak, cfg.efficiency, w);

    d.deficits.resize(1 + k);
    d.deficits[0] = d.transmitted_power - params.p_avg;
    state.z[0] = detail::clip_update(state.z[0], d.deficits[0]);
    for (std::size_t i = 0; i < k; ++i)
    {
        d.deficits[1 + i] = state.gamma[i] - d.received_power[i];
        state.g[i] = detail::clip_update(state.g[i], d.deficits[1 + i]);
    }
    return {std::move(d), std::move(state)};
}

// QoS-aware proportional fair step.
//   gamma_i = min(V / G_i, p_peak) (p_peak when G_i = 0)
//   W' = sum_i (Z_i + G_i) W_i - Z_{K+1} I
//   G_i <- max(G_i + gamma_i - Q_i, 0) ; Z_i <- max(Z_i + P_min - Q_i, 0) ; Z_{K+1} <- max(Z_{K+1} + P_tx - P_avg, 0)
inline std::pair<SlotDecision, QueueState> step_qpf(const ScenarioConfig &cfg, QueueState state,
                                                    const PolicyParams &params, const SlotChannels &channels)
{
    const std::size_t k = channels.channels.size();
    detail::require_shape(state, k + 1, k, "step_qpf");
    state.gamma.resize(k);
    std::vector<double> weights(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        state.gamma[i] = state.g[i] > 0.0 ? std::min(*params.v / state.g[i], params.p_peak) : params.p_peak;
        weights[i] = state.z[i] + state.g[i];
    }

    const auto w = grams_of(channels);
    const EigenPair top = max_eigpair(weighted_combine(weights, w, state.z[k]));
    SlotDecision d = detail::two_level(top, top.value > 0.0, params.p_peak, cfg.efficiency, w);

    // deficit layout: z_1..z_K, z_{K+1}, g_1..g_K
    d.deficits.resize(2 * k + 1);
    for (std::size_t i = 0; i < k; ++i)
    {
        d.deficits[i] = params.p_min - d.received_power[i];
        d.deficits[k + 1 + i] = state.gamma[i] - d.received_power[i];
        state.z[i] = detail::clip_update(state.z[i], d.deficits[i]);
        state.g[i] = detail::clip_update(state.g[i], d.deficits[k + 1 + i]);
    }
    d.deficits[k] = d.transmitted_power - params.p_avg;
    state.z[k] = detail::clip_update(state.z[k], d.deficits[k]);
    return {std::move(d), std::move(state)};
}

// Upper bound B on the per-slot second-order drift term for each drift-plus-penalty policy
inline double drift_constant(PolicyKind kind, std::size_t receivers, double p_peak)
{
    const double k = static_cast<double>(receivers);
    const double p2 = p_peak * p_peak;
    switch (kind)
    {
    case PolicyKind::mdpp_energy:
        return 0.5 * k * p2;
    case PolicyKind::mdpp_power:
        return 0.5 * p2;
    case PolicyKind::mmf:
        return 0.5 * (k + 1.0) * p2;
    case PolicyKind::qpf:
        return 0.5 * (2.0 * k + 1.0) * p2;
    default:
        return 0.0;
    }
}

// Default-V coefficients. Each rule scales V with the channel so that the steady-state queue
// backlog is a fixed multiple of the queue's own power scale; the multiples below keep
// Z[L]/L under stability_fraction of that scale at 1e5 slots while leaving the optimality gap
// of the drift-plus-penalty policies at a few percent.
inline constexpr double default_v_energy = 80.0; // V = c * min_i P_i g_i M N
inline constexpr double default_v_power = 30.0;  // V = c * P_avg / sum_i g_i M N
inline constexpr double default_v_mmf = 150.0;   // V = c * P_avg * sum_i g_i M N
inline constexpr double default_v_qpf = 100.0;   // V = c * P_avg * sum_i g_i M N

// Trade-off parameter used when none is configured, derived from the mean channel gains g_i M N
inline double default_v(PolicyKind kind, const ScenarioConfig &cfg, const PolicyParams &params)
{
    const double mn = static_cast<double>(cfg.n_rx * cfg.n_tx);
    double gain_sum = 0.0;
    for (std::size_t i = 0; i < cfg.receiver_count(); ++i)
        gain_sum += cfg.path_gain(i) * mn;

    double v = 1.0;
    switch (kind)
    {
    case PolicyKind::mdpp_energy: {
        double floor = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cfg.receiver_count() && i < params.p_targets.size(); ++i)
            if (params.p_targets[i] > 0.0)
                floor = std::min(floor, params.p_targets[i] * cfg.path_gain(i) * mn);
        if (std::isfinite(floor))
            v = default_v_energy * floor;
        break;
    }
    case PolicyKind::mdpp_power:
        v = default_v_power * params.p_avg / gain_sum;
        break;
    case PolicyKind::mmf:
        v = default_v_mmf * params.p_avg * gain_sum;
        break;
    case PolicyKind::qpf:
        v = default_v_qpf * params.p_avg * gain_sum;
        break;
    default:
        break;
    }
    // degenerate scenarios (zero gain) fall back to 1
    return v > 0.0 && std::isfinite(v) ? v : 1.0;
}

// A running policy instance: kind, queues and (for the optimal policies) the threshold.
class Policy
{
public:
    Policy(PolicyKind kind, const ScenarioConfig &cfg, PolicyParams params,
           std::optional<ThresholdValue> threshold = std::nullopt)
        : kind_(kind), cfg_(&cfg), params_(std::move(params)), threshold_(threshold),
          state_(QueueState::initial(kind, cfg.receiver_count()))
    {
        params_.validate(kind, cfg.receiver_count());
        if (!params_.v)
            params_.v = default_v(kind, cfg, params_);
        if (is_optimal(kind) && !threshold_)
            throw StructuralError(std::string(to_string(kind)) + " needs a threshold");
    }

    SlotDecision step(const SlotChannels &channels)
    {
        switch (kind_)
        {
        case PolicyKind::optimal_energy:
            return step_optimal_energy(*cfg_, params_, *threshold_, channels);
        case PolicyKind::optimal_power:
            return step_optimal_power(*cfg_, params_, *threshold_, channels);
        case PolicyKind::mdpp_energy:
            return advance(step_mdpp_energy(*cfg_, std::move(state_), params_, channels));
        case PolicyKind::mdpp_power:
            return advance(step_mdpp_power(*cfg_, std::move(state_), params_, channels));
        case PolicyKind::mmf:
            return advance(step_mmf(*cfg_, std::move(state_), params_, channels));
        case PolicyKind::qpf:
            return advance(step_qpf(*cfg_, std::move(state_), params_, channels));
        }
        throw StructuralError("Policy::step: unknown kind");
    }

    PolicyKind kind() const noexcept { return kind_; }
    const QueueState &state() const noexcept { return state_; }
    const PolicyParams &params() const noexcept { return params_; }

private:
    SlotDecision advance(std::pair<SlotDecision, QueueState> r)
    {
        state_ = std::move(r.second);
        return std::move(r.first);
    }

    PolicyKind kind_;
    const ScenarioConfig *cfg_;
    PolicyParams params_;
    std::optional<ThresholdValue> threshold_;
    QueueState state_;
};

} // namespace wpt

#endif
