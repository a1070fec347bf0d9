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

#include "wpt/channel.hpp"
#include "wpt/policy.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace wpt;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
// Channels H_i = diag(sqrt(d_i)), so that W_i = diag(d_i)
SlotChannels diagonal_slot(const std::vector<std::vector<double>> &diags)
{
    SlotChannels s;
    for (const auto &d : diags)
    {
        ChannelMatrix h(d.size(), d.size());
        for (std::size_t j = 0; j < d.size(); ++j)
            h(j, j) = std::sqrt(d[j]);
        s.channels.push_back(std::move(h));
    }
    return s;
}

ScenarioConfig small_cfg(std::size_t receivers, double efficiency = 1.0)
{
    ScenarioConfig cfg;
    cfg.receivers.resize(receivers, Point{0.3, 0.3});
    cfg.efficiency = efficiency;
    return cfg;
}

PolicyParams params_with(double v, double p_peak, double p_avg, std::vector<double> targets = {}, double p_min = 0)
{
    PolicyParams p;
    p.v = v;
    p.p_peak = p_peak;
    p.p_avg = p_avg;
    p.p_targets = std::move(targets);
    p.p_min = p_min;
    return p;
}

// Combined matrix each drift-plus-penalty policy decides on, rebuilt from the pre-step state
GramMatrix decision_matrix(PolicyKind kind, const QueueState &q, const PolicyParams &p, const SlotChannels &s)
{
    const auto w = grams_of(s);
    const std::size_t k = w.size();
    switch (kind)
    {
    case PolicyKind::mdpp_energy:
        return weighted_combine(q.z, w, *p.v);
    case PolicyKind::mdpp_power:
        return weighted_combine(std::vector<double>(k, *p.v), w, q.z[0]);
    case PolicyKind::mmf:
        return weighted_combine(q.g, w, q.z[0]);
    case PolicyKind::qpf: {
        std::vector<double> wt(k);
        for (std::size_t i = 0; i < k; ++i)
            wt[i] = q.z[i] + q.g[i];
        return weighted_combine(wt, w, q.z[k]);
    }
    default:
        return weighted_combine(std::vector<double>(k, 1.0), w, 0.0);
    }
}
} // namespace

TEST_CASE("optimal-energy threshold rule", "[policy][optimal-energy]")
{
    const auto cfg = small_cfg(1, 0.5);
    const auto p = params_with(1.0, 5.0, 5.0, {0.01});
    const auto slot = diagonal_slot({{4.0, 1.0}});

    // closed tail: lambda_max equal to the threshold transmits
    CHECK(step_optimal_energy(cfg, p, ThresholdValue{4.0, 0.0}, slot).transmitting());

    const SlotDecision d = step_optimal_energy(cfg, p, ThresholdValue{2.0, 0.0}, slot);
    CHECK(d.transmitted_power == 5.0);
    CHECK_THAT(std::abs(d.beam.entries[0]), WithinRel(std::sqrt(5.0), 1e-14));
    CHECK(std::abs(d.beam.entries[1]) < 1e-14);
    CHECK_THAT(d.received_power[0], WithinRel(0.5 * 20.0, 1e-12));

    const SlotDecision z = step_optimal_energy(cfg, p, ThresholdValue{2.0, 0.0}, diagonal_slot({{0.0, 0.0}}));
    CHECK_FALSE(z.transmitting());
    CHECK(z.beam.power() == 0.0);
    CHECK(z.received_power[0] == 0.0);

    CHECK_THROWS_AS(step_optimal_energy(cfg, p, ThresholdValue{}, diagonal_slot({{1, 1}, {1, 1}})), StructuralError);
}

TEST_CASE("mdpp-energy steps", "[policy][mdpp-energy]")
{
    const auto cfg = small_cfg(1);
    SECTION("cold start is silent and queues the target")
    {
        const auto p = params_with(2.0, 5.0, 5.0, {0.03});
        const auto [d, q] = step_mdpp_energy(cfg, QueueState::initial(PolicyKind::mdpp_energy, 1), p,
                                             diagonal_slot({{5.0, 1.0}}));
        CHECK_FALSE(d.transmitting());
        CHECK_THAT(d.lambda_max, WithinAbs(-2.0, 1e-14));
        CHECK(q.z[0] == 0.03);
    }
    SECTION("weighted matrix diag(3, -1) transmits along e1")
    {
        const auto p = params_with(2.0, 5.0, 5.0, {0.0});
        const auto [d, q] = step_mdpp_energy(cfg, QueueState{{1.0}, {}, {}}, p, diagonal_slot({{5.0, 1.0}}));
        CHECK(d.transmitting());
        CHECK_THAT(d.lambda_max, WithinAbs(3.0, 1e-12));
        CHECK_THAT(std::abs(d.beam.entries[0]), WithinRel(std::sqrt(5.0), 1e-12));
        CHECK(std::abs(d.beam.entries[1]) < 1e-12);
        CHECK(q.z[0] == 0.0); // 1 + 0 - 25 clipped at zero
    }
    SECTION("queue update Z + P - Q")
    {
        const auto p = params_with(1e-5, 1.0, 1.0, {0.01});
        const auto [d, q] = step_mdpp_energy(cfg, QueueState{{0.01}, {}, {}}, p, diagonal_slot({{0.004, 0.0}}));
        CHECK(d.transmitting());
        CHECK_THAT(d.received_power[0], WithinRel(0.004, 1e-12));
        CHECK_THAT(q.z[0], WithinRel(0.016, 1e-12));
        CHECK_THAT(d.deficits[0], WithinRel(0.006, 1e-12));
    }
    CHECK_THROWS_AS(step_mdpp_energy(cfg, QueueState{}, params_with(1, 1, 1, {0.0}), diagonal_slot({{1, 1}})),
                    StructuralError);
}

TEST_CASE("optimal-power threshold rule", "[policy][optimal-power]")
{
    const auto cfg = small_cfg(2);
    const auto p = params_with(1.0, 5.0, 5.0);
    // threshold 0 transmits every slot
    CHECK(step_optimal_power(cfg, p, ThresholdValue{0.0, 1.0}, diagonal_slot({{0, 0}, {0, 0}})).transmitting());
    CHECK_FALSE(step_optimal_power(cfg, p, ThresholdValue{1.0, 0.0}, diagonal_slot({{0, 0}, {0, 0}})).transmitting());

    const SlotDecision d = step_optimal_power(cfg, p, ThresholdValue{2.0, 0.0}, diagonal_slot({{3, 0}, {0, 1}}));
    CHECK(d.transmitting());
    CHECK_THAT(d.lambda_max, WithinRel(3.0, 1e-12));
    CHECK_THAT(d.received_power[0], WithinRel(3.0 * 5.0, 1e-12));
    CHECK(d.received_power[1] < 1e-24);
}

TEST_CASE("mdpp-power steps", "[policy][mdpp-power]")
{
    const auto cfg = small_cfg(2);
    const auto p = params_with(10.0, 5.0, 2.0);
    const auto slot = diagonal_slot({{0.3, 0.1}, {0.2, 0.0}});

    const auto [on, q_on] = step_mdpp_power(cfg, QueueState::initial(PolicyKind::mdpp_power, 2), p, slot);
    CHECK(on.transmitting());
    CHECK(q_on.z[0] == 3.0);

    const auto [off, q_off] = step_mdpp_power(cfg, QueueState{{100.0}, {}, {}}, p, slot);
    CHECK_FALSE(off.transmitting());
    CHECK(q_off.z[0] == 98.0);
}

TEST_CASE("mdpp-power on a constant channel alternates at half duty", "[policy][mdpp-power]")
{
    ScenarioConfig cfg;
    cfg.rician_k = 1e12; // deterministic channel
    Policy policy(PolicyKind::mdpp_power, cfg, params_with(1.0, 4.0, 2.0));
    int on = 0;
    const int slots = 1001;
    for (int l = 0; l < slots; ++l)
        on += policy.step(sample_slot(cfg, {1, 0}, std::uint64_t(l))).transmitting() ? 1 : 0;
    CHECK(std::abs(on - slots / 2.0) <= 1.0);
}

TEST_CASE("mmf steps", "[policy][mmf]")
{
    const auto cfg = small_cfg(2);
    const auto p = params_with(3.0, 5.0, 2.5);
    const auto slot = diagonal_slot({{0.3, 0.1}, {0.2, 0.0}});

    const auto [d0, q0] = step_mmf(cfg, QueueState::initial(PolicyKind::mmf, 2), p, slot);
    CHECK_FALSE(d0.transmitting()); // lambda_max of the zero matrix is 0, not > 0
    CHECK(q0.gamma == std::vector<double>{5.0, 5.0});
    CHECK(q0.g == std::vector<double>{5.0, 5.0});
    CHECK(q0.z[0] == 0.0);

    // sum G >= V switches the auxiliary targets off; G only drains
    const auto [d1, q1] = step_mmf(cfg, q0, p, slot);
    CHECK(q1.gamma == std::vector<double>{0.0, 0.0});
    CHECK(d1.transmitting());
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(q1.g[i] <= q0.g[i]);
    CHECK(q1.z[0] == 2.5);
}

TEST_CASE("qpf steps", "[policy][qpf]")
{
    const auto cfg = small_cfg(2);
    const auto p = params_with(2.0, 5.0, 2.5, {}, 0.01);
    const auto slot = diagonal_slot({{0.3, 0.1}, {0.2, 0.0}});

    const auto [d0, q0] = step_qpf(cfg, QueueState::initial(PolicyKind::qpf, 2), p, slot);
    CHECK_FALSE(d0.transmitting());
    CHECK(q0.gamma == std::vector<double>{5.0, 5.0});
    CHECK(q0.g == std::vector<double>{5.0, 5.0});
    CHECK(q0.z == std::vector<double>{0.01, 0.01, 0.0});

    // gamma = min(V / G, p_peak) shrinks like 1 / G
    const auto [d1, q1] = step_qpf(cfg, QueueState{{0, 0, 0}, {1e6, 4e6}, {}}, p, slot);
    CHECK_THAT(q1.gamma[0], WithinRel(2e-6, 1e-12));
    CHECK_THAT(q1.gamma[1], WithinRel(5e-7, 1e-12));
    CHECK(d1.transmitting());
}

TEST_CASE("policy invariants on random channel sequences", "[policy][property]")
{
    ScenarioConfig cfg;
    cfg.efficiency = 0.7;
    for (const auto kind : {PolicyKind::mdpp_energy, PolicyKind::mdpp_power, PolicyKind::mmf, PolicyKind::qpf})
    {
        CAPTURE(to_string(kind));
        auto params = params_with(0.0, 5.0, 2.0, {0.01, 0.005}, 0.002);
        params.v.reset();
        Policy policy(kind, cfg, params);
        const PolicyParams &p = policy.params();
        for (std::uint64_t l = 0; l < 2000; ++l)
        {
            const SlotChannels slot = sample_slot(cfg, {5, 0}, l);
            const QueueState before = policy.state();
            const GramMatrix w = decision_matrix(kind, before, p, slot);
            const SlotDecision d = policy.step(slot);
            const QueueState &after = policy.state();

            // two levels, exact
            REQUIRE((d.transmitted_power == 0.0 || d.transmitted_power == p.p_peak));
            REQUIRE_THAT(d.beam.power(), WithinAbs(d.transmitted_power, 1e-12));
            // nonnegative queues
            for (const double z : after.z)
                REQUIRE(z >= 0.0);
            for (const double g : after.g)
                REQUIRE(g >= 0.0);
            // received power is the efficiency-scaled quadratic form
            const auto grams = grams_of(slot);
            for (std::size_t i = 0; i < grams.size(); ++i)
                REQUIRE_THAT(d.received_power[i],
                             WithinAbs(std::max(0.0, cfg.efficiency * quad_form(grams[i], d.beam)), 1e-15));
            // realized one-step drift bound
            std::vector<double> q(before.z);
            q.insert(q.end(), before.g.begin(), before.g.end());
            double bound = 0.0;
            for (std::size_t j = 0; j < q.size(); ++j)
                bound += q[j] * d.deficits[j] + 0.5 * d.deficits[j] * d.deficits[j];
            REQUIRE(after.lyapunov() - before.lyapunov() <=
                    bound + 1e-9 * (1.0 + after.lyapunov() + before.lyapunov()));
            // beam along u_max of the combined matrix, up to phase
            const EigenPair top = max_eigpair(w);
            REQUIRE(d.transmitting() == (top.value > 0.0));
            if (d.transmitting())
            {
                cplx overlap = 0.0;
                for (std::size_t j = 0; j < top.vector.size(); ++j)
                    overlap += std::conj(top.vector[j]) * d.beam.entries[j];
                REQUIRE_THAT(std::abs(overlap) / std::sqrt(p.p_peak), WithinAbs(1.0, 1e-8));
            }
        }
    }
}

TEST_CASE("mdpp-power decisions are invariant to scaling gains by c and V by 1/c", "[policy][property]")
{
    ScenarioConfig a, b;
    const double c = 8.0;
    b.reference_gain = c * a.reference_gain;
    Policy pa(PolicyKind::mdpp_power, a, params_with(2000.0, 5.0, 2.0));
    Policy pb(PolicyKind::mdpp_power, b, params_with(2000.0 / c, 5.0, 2.0));
    for (std::uint64_t l = 0; l < 1000; ++l)
        REQUIRE(pa.step(sample_slot(a, {3, 0}, l)).transmitting() == pb.step(sample_slot(b, {3, 0}, l)).transmitting());
}

TEST_CASE("policy names, queue shapes and constants", "[policy]")
{
    for (const auto &[kind, name] : policy_names)
        CHECK(parse_policy_kind(name) == kind);
    CHECK_THROWS_WITH(parse_policy_kind("greedy"), ContainsSubstring("unknown policy"));

    CHECK(QueueState::initial(PolicyKind::mdpp_energy, 3).z.size() == 3);
    CHECK(QueueState::initial(PolicyKind::mdpp_power, 3).z.size() == 1);
    CHECK(QueueState::initial(PolicyKind::mmf, 3).g.size() == 3);
    CHECK(QueueState::initial(PolicyKind::qpf, 3).z.size() == 4);
    CHECK(QueueState::initial(PolicyKind::qpf, 3).g.size() == 3);

    CHECK(drift_constant(PolicyKind::mdpp_energy, 2, 5.0) == 25.0);
    CHECK(drift_constant(PolicyKind::mdpp_power, 2, 5.0) == 12.5);
    CHECK(drift_constant(PolicyKind::mmf, 2, 5.0) == 37.5);
    CHECK(drift_constant(PolicyKind::qpf, 2, 5.0) == 62.5);
}

TEST_CASE("Policy construction validates parameters", "[policy]")
{
    ScenarioConfig two;
    ScenarioConfig one = small_cfg(1);
    CHECK_THROWS_AS(Policy(PolicyKind::optimal_power, two, params_with(1, 5, 5)), StructuralError);
    CHECK_THROWS_WITH(Policy(PolicyKind::optimal_energy, two, params_with(1, 5, 5, {0.01, 0.01}), ThresholdValue{}),
                      ContainsSubstring("single-receiver"));
    CHECK_THROWS_AS(Policy(PolicyKind::mdpp_energy, two, params_with(1, 5, 5, {0.01})), StructuralError);
    CHECK_THROWS_AS(Policy(PolicyKind::mdpp_power, two, params_with(-1, 5, 5)), StructuralError);
    CHECK_THROWS_AS(Policy(PolicyKind::mdpp_power, two, params_with(1, 5, 6)), StructuralError);
    CHECK_NOTHROW(Policy(PolicyKind::optimal_energy, one, params_with(1, 5, 5, {0.01}), ThresholdValue{}));

    for (const auto kind : {PolicyKind::mdpp_energy, PolicyKind::mdpp_power, PolicyKind::mmf, PolicyKind::qpf})
    {
        auto p = params_with(1, 5, 2.5, {0.01, 0.01});
        p.v.reset();
        const Policy policy(kind, two, p);
        CHECK(*policy.params().v > 0.0);
        CHECK(*policy.params().v == default_v(kind, two, p));
    }
}
