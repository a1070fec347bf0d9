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

#ifndef WPT_HARNESS_HPP
#define WPT_HARNESS_HPP

#include "wpt/channel.hpp"
#include "wpt/errors.hpp"
#include "wpt/policy.hpp"
#include "wpt/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <atomic>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace wpt
{

// Time averages and diagnostics of one simulated run
struct RunSummary
{
    PolicyKind policy = PolicyKind::mdpp_power;
    ScenarioConfig cfg;
    PolicyParams params; // with v resolved
    std::size_t slots = 0;

    double avg_transmit_power = 0.0;
    std::vector<double> avg_received_power;
    double min_received = 0.0;
    double sum_log_received = 0.0;
    double duty_cycle = 0.0;
    std::vector<double> z_rates; // Z_i[L] / L
    std::vector<double> g_rates; // G_i[L] / L
    std::optional<ThresholdValue> threshold;

    // every constraint queue below 1e-3 of its power scale per slot
    bool stable = true;
    // slots where the realized one-step drift exceeded sum Z d + 0.5 sum d^2
    std::size_t drift_violations = 0;
    double max_drift_excess = -std::numeric_limits<double>::infinity();

    double total_received() const
    {
        double s = 0.0;
        for (const double q : avg_received_power)
            s += q;
        return s;
    }
};

inline constexpr double stability_fraction = 1e-3;
inline constexpr double drift_slack = 1e-9;

namespace detail
{
// Power scale of each constraint queue, in the order of QueueState::z
inline std::vector<double> constraint_scales(PolicyKind kind, const PolicyParams &p, std::size_t receivers)
{
    switch (kind)
    {
    case PolicyKind::mdpp_energy:
        return p.p_targets;
    case PolicyKind::mdpp_power:
    case PolicyKind::mmf:
        return {p.p_avg};
    case PolicyKind::qpf: {
        std::vector<double> s(receivers, p.p_min);
        s.push_back(p.p_avg);
        return s;
    }
    default:
        return {};
    }
}

inline ThresholdValue warmup_threshold(PolicyKind kind, const ScenarioConfig &cfg, const PolicyParams &params)
{
    const ChannelStream warm{cfg.seed, ChannelStream::warmup};
    if (kind == PolicyKind::optimal_energy)
    {
        if (params.p_targets.front() == 0.0)
            return ThresholdValue{ThresholdValue::never, 0.0};
        const auto spec = empirical_gain_spectrum(cfg, CombineRule::first_receiver, cfg.warmup, warm);
        return solve_energy_threshold(spec, params.p_targets.front() / cfg.efficiency, params.p_peak);
    }
    const auto spec = empirical_gain_spectrum(cfg, CombineRule::sum, cfg.warmup, warm);
    return solve_power_threshold(spec, params.p_avg, params.p_peak);
}
} // namespace detail

// Simulates cfg.slots slots of one policy on the evaluation stream of cfg.seed.
// Optimal policies first estimate their threshold from cfg.warmup draws of the disjoint warm-up stream.
inline RunSummary run(const ScenarioConfig &cfg, const PolicyParams &params, PolicyKind kind)
{
    cfg.validate();
    params.validate(kind, cfg.receiver_count());
    if (is_optimal(kind) && cfg.warmup == 0)
        throw StructuralError("scenario.warmup: optimal policies need warm-up samples");
    if (kind == PolicyKind::optimal_energy && cfg.efficiency == 0.0)
        throw StructuralError("scenario.efficiency: optimal-energy needs a nonzero efficiency");

    const std::size_t k = cfg.receiver_count();
    RunSummary out;
    out.policy = kind;
    out.cfg = cfg;
    out.slots = cfg.slots;
    if (is_optimal(kind))
        out.threshold = detail::warmup_threshold(kind, cfg, params);

    Policy policy(kind, out.cfg, params, out.threshold);
    out.params = policy.params();

    const ChannelStream eval{cfg.seed, ChannelStream::evaluation};
    double tx_sum = 0.0;
    std::vector<double> rx_sum(k, 0.0);
    std::size_t on = 0;
    std::vector<double> before;
    for (std::uint64_t l = 0; l < cfg.slots; ++l)
    {
        const SlotChannels slot = sample_slot(cfg, eval, l);
        const QueueState &q = policy.state();
        before.assign(q.z.begin(), q.z.end());
        before.insert(before.end(), q.g.begin(), q.g.end());
        const double lyap_before = q.lyapunov();

        const SlotDecision d = policy.step(slot);

        tx_sum += d.transmitted_power;
        on += d.transmitting() ? 1 : 0;
        for (std::size_t i = 0; i < k; ++i)
            rx_sum[i] += d.received_power[i];

        if (!d.deficits.empty())
        {
            double bound = 0.0;
            for (std::size_t j = 0; j < before.size(); ++j)
                bound += before[j] * d.deficits[j] + 0.5 * d.deficits[j] * d.deficits[j];
            const double lyap_after = policy.state().lyapunov();
            const double excess = (lyap_after - lyap_before) - bound;
            out.max_drift_excess = std::max(out.max_drift_excess, excess);
            if (excess > drift_slack * (1.0 + lyap_before + lyap_after))
                ++out.drift_violations;
        }
    }

    const double slots = static_cast<double>(cfg.slots);
    out.avg_transmit_power = tx_sum / slots;
    out.duty_cycle = static_cast<double>(on) / slots;
    out.avg_received_power.resize(k);
    out.sum_log_received = 0.0;
    for (std::size_t i = 0; i < k; ++i)
    {
        out.avg_received_power[i] = rx_sum[i] / slots;
        out.sum_log_received += std::log(out.avg_received_power[i]);
    }
    out.min_received = *std::min_element(out.avg_received_power.begin(), out.avg_received_power.end());

    const QueueState &fin = policy.state();
    for (const double z : fin.z)
        out.z_rates.push_back(z / slots);
    for (const double g : fin.g)
        out.g_rates.push_back(g / slots);
    const auto scales = detail::constraint_scales(kind, out.params, k);
    for (std::size_t j = 0; j < out.z_rates.size(); ++j)
        if (out.z_rates[j] > stability_fraction * scales[j])
            out.stable = false;
    return out;
}

enum class SweepParameter
{
    n_tx,
    v,
    d_r,
    p_target
};

inline std::string_view to_string(SweepParameter p)
{
    switch (p)
    {
    case SweepParameter::n_tx:
        return "n_tx";
    case SweepParameter::v:
        return "v";
    case SweepParameter::d_r:
        return "d_r";
    case SweepParameter::p_target:
        return "p_target";
    }
    return "?";
}

inline SweepParameter parse_sweep_parameter(std::string_view name)
{
    for (const auto p : {SweepParameter::n_tx, SweepParameter::v, SweepParameter::d_r, SweepParameter::p_target})
        if (to_string(p) == name)
            return p;
    throw StructuralError("sweep.parameter: unknown '" + std::string(name) + "' (expected n_tx, v, d_r or p_target)");
}

struct SweepSpec
{
    SweepParameter parameter = SweepParameter::n_tx;
    std::vector<double> values;
    std::size_t repetitions = 1;

    void validate() const
    {
        if (values.empty())
            throw StructuralError("sweep.values: at least one value is required");
        if (repetitions < 1)
            throw StructuralError("sweep.repetitions: must be >= 1");
    }

    friend bool operator==(const SweepSpec &, const SweepSpec &) = default;
};

// One (point, repetition, policy) result. Exactly one of summary / error is set.
struct SweepRow
{
    std::size_t point = 0;
    double value = 0.0;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    PolicyKind policy = PolicyKind::mdpp_power;
    std::optional<RunSummary> summary;
    std::string error;
};

// Seed of (point, repetition): distinct for every pair, equal to the base seed at (0, 0)
inline std::uint64_t sweep_seed(std::uint64_t base, std::size_t point, std::size_t repetition, std::size_t repetitions)
{
    return base + static_cast<std::uint64_t>(point * repetitions + repetition);
}

inline void apply_sweep_value(SweepParameter p, double value, ScenarioConfig &cfg, PolicyParams &params)
{
    switch (p)
    {
    case SweepParameter::n_tx:
        if (!(value >= 1.0) || value != std::floor(value))
            throw StructuralError("sweep: n_tx value " + std::to_string(value) + " is not a positive integer");
        cfg.n_tx = static_cast<std::size_t>(value);
        break;
    case SweepParameter::v:
        params.v = value;
        break;
    case SweepParameter::d_r:
        cfg.distance_ratio = value;
        cfg.apply_distance_ratio();
        break;
    case SweepParameter::p_target:
        std::fill(params.p_targets.begin(), params.p_targets.end(), value);
        break;
    }
}

// Runs jobs on up to `threads` workers; results land at their own index so order never depends on scheduling
template <class Job, class Result>
void run_indexed(const std::vector<Job> &jobs, std::vector<Result> &results, unsigned threads,
                 const std::function<Result(const Job &)> &fn)
{
    results.resize(jobs.size());
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            results[i] = fn(jobs[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Every (point, repetition, policy) combination, rows ordered by point, then repetition, then policy
inline std::vector<SweepRow> sweep(const ScenarioConfig &base_cfg, const PolicyParams &base_params,
                                   const SweepSpec &spec, const std::vector<PolicyKind> &kinds,
                                   unsigned threads = default_threads())
{
    spec.validate();
    if (kinds.empty())
        throw StructuralError("sweep: no policies given");
    struct Job
    {
        std::size_t point, repetition;
        std::uint64_t seed;
        PolicyKind policy;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < spec.values.size(); ++p)
        for (std::size_t r = 0; r < spec.repetitions; ++r)
            for (const auto kind : kinds)
                jobs.push_back(Job{p, r, sweep_seed(base_cfg.seed, p, r, spec.repetitions), kind});

    std::vector<SweepRow> rows;
    run_indexed<Job, SweepRow>(jobs, rows, threads, [&](const Job &job) {
        const double value = spec.values[job.point];
        try
        {
            ScenarioConfig cfg = base_cfg;
            PolicyParams params = base_params;
            cfg.seed = job.seed;
            apply_sweep_value(spec.parameter, value, cfg, params);
            return SweepRow{job.point, value, job.repetition, job.seed, job.policy, run(cfg, params, job.policy), {}};
        }
        catch (const std::exception &e)
        {
            return SweepRow{job.point, value, job.repetition, job.seed, job.policy, std::nullopt, e.what()};
        }
    });
    return rows;
}


// Optimal / drift-plus-penalty pair compared by compare(): (optimal, mdpp)
inline std::pair<PolicyKind, PolicyKind> comparison_pair(PolicyKind kind)
{
    if (is_energy_limited(kind))
        return {PolicyKind::optimal_energy, PolicyKind::mdpp_energy};
    if (kind == PolicyKind::optimal_power || kind == PolicyKind::mdpp_power)
        return {PolicyKind::optimal_power, PolicyKind::mdpp_power};
    throw StructuralError("compare: " + std::string(to_string(kind)) + " has no optimal counterpart");
}

// Optimal against drift-plus-penalty at one (point, repetition), both on the same seed.
// The metric is the average transmit power for energy-limited pairs and the total received power otherwise.
struct CompareRow
{
    std::size_t point = 0;
    double value = 0.0;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    double optimal = 0.0;
    double mdpp = 0.0;
    double v = 0.0;
    double b_over_v = 0.0;
    std::string error;

    double gap() const noexcept { return mdpp - optimal; }
    double relative_gap() const noexcept { return optimal != 0.0 ? gap() / optimal : 0.0; }
};

// Mean over the repetitions of one point; standard_error is that of the mean gap
struct CompareAggregate
{
    std::size_t point = 0;
    double value = 0.0;
    std::size_t repetitions = 0;
    double optimal = 0.0;
    double mdpp = 0.0;
    double standard_error = 0.0;
    double b_over_v = 0.0;

    double gap() const noexcept { return mdpp - optimal; }
    double relative_gap() const noexcept { return optimal != 0.0 ? gap() / optimal : 0.0; }
};

inline double compare_metric(const RunSummary &r)
{
    return is_energy_limited(r.policy) ? r.avg_transmit_power : r.total_received();
}

inline std::vector<CompareRow> compare(const ScenarioConfig &cfg, const PolicyParams &params, PolicyKind kind,
                                       const SweepSpec &spec, unsigned threads = default_threads())
{
    const auto [opt, mdpp] = comparison_pair(kind);
    const auto rows = sweep(cfg, params, spec, {opt, mdpp}, threads);
    std::vector<CompareRow> out;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2)
    {
        const SweepRow &a = rows[i], &b = rows[i + 1];
        CompareRow c;
        c.point = a.point;
        c.value = a.value;
        c.repetition = a.repetition;
        c.seed = a.seed;
        if (!a.error.empty() || !b.error.empty())
            c.error = !a.error.empty() ? a.error : b.error;
        else
        {
            c.optimal = compare_metric(*a.summary);
            c.mdpp = compare_metric(*b.summary);
            c.v = *b.summary->params.v;
            c.b_over_v = drift_constant(mdpp, b.summary->cfg.receiver_count(), params.p_peak) / c.v;
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline std::vector<CompareAggregate> aggregate(const std::vector<CompareRow> &rows)
{
    std::vector<CompareAggregate> out;
    for (const auto &r : rows)
    {
        if (!r.error.empty())
            continue;
        if (out.empty() || out.back().point != r.point)
            out.push_back(CompareAggregate{r.point, r.value});
        auto &a = out.back();
        ++a.repetitions;
        a.optimal += r.optimal;
        a.mdpp += r.mdpp;
        a.b_over_v += r.b_over_v;
    }
    for (auto &a : out)
    {
        const double n = static_cast<double>(a.repetitions);
        a.optimal /= n;
        a.mdpp /= n;
        a.b_over_v /= n;
        double ss = 0.0;
        for (const auto &r : rows)
            if (r.error.empty() && r.point == a.point)
                ss += (r.gap() - a.gap()) * (r.gap() - a.gap());
        a.standard_error = a.repetitions > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    }
    return out;
}

} // namespace wpt

#endif
