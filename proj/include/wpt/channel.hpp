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

#ifndef WPT_CHANNEL_HPP
#define WPT_CHANNEL_HPP

#include "wpt/errors.hpp"
#include "wpt/linalg.hpp"
#include "wpt/philox.hpp"
#include "wpt/spectrum.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace wpt
{

struct Point
{
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point &, const Point &) = default;
};

// Line-of-sight component shape.
//  boresight: all-ones M x N matrix for every receiver
//  ula:       1_M a(theta)^T with a_n = exp(-j pi n cos theta), theta the bearing of the receiver
//             seen from a half-wavelength uniform linear array along the x axis
enum class LosModel
{
    boresight,
    ula
};

// Expected per-entry channel power gain at the reference distance used by the defaults
inline constexpr double default_gain_at_reference = 1e-3;
inline constexpr double default_pathloss_exponent = 2.5;

// Distance of E-R1 at (0.3, 0.3) from the access point
inline double reference_distance() { return std::hypot(0.3, 0.3); }

// Gain at 1 m such that a receiver at reference_distance() sees default_gain_at_reference
inline double default_reference_gain()
{
    return default_gain_at_reference * std::pow(reference_distance(), default_pathloss_exponent);
}

struct ScenarioConfig
{
    std::size_t n_tx = 8; // N
    std::size_t n_rx = 4; // M
    Point ap{};
    std::vector<Point> receivers{{0.3, 0.3}, {0.0, 0.5 * std::numbers::sqrt2}};
    // When set, receiver 2 is placed on the +y axis at distance_ratio * |receiver 1|
    std::optional<double> distance_ratio;
    double rician_k = 3.0;
    double pathloss_exponent = default_pathloss_exponent;
    double reference_gain = default_reference_gain();
    double efficiency = 1.0; // zeta
    LosModel los = LosModel::ula;
    std::size_t slots = 100000;
    std::uint64_t seed = 1;
    std::size_t warmup = 20000;

    std::size_t receiver_count() const noexcept { return receivers.size(); }

    double distance(std::size_t i) const { return std::hypot(receivers[i].x - ap.x, receivers[i].y - ap.y); }

    double bearing(std::size_t i) const { return std::atan2(receivers[i].y - ap.y, receivers[i].x - ap.x); }

    // Large-scale power gain g_i = reference_gain * d_i^-exponent
    double path_gain(std::size_t i) const { return reference_gain * std::pow(distance(i), -pathloss_exponent); }

    // Re-derives receiver 2 from distance_ratio, if set
    void apply_distance_ratio()
    {
        if (!distance_ratio)
            return;
        if (receivers.empty())
            throw StructuralError("scenario.distance_ratio: needs a near receiver");
        if (receivers.size() < 2)
            receivers.resize(2);
        receivers[1] = Point{ap.x, ap.y + *distance_ratio * distance(0)};
    }

    void validate() const
    {
        if (n_rx < 1)
            throw StructuralError("scenario.n_rx: must be >= 1");
        if (n_tx <= n_rx)
            throw StructuralError("scenario.n_tx: need N > M (N=" + std::to_string(n_tx) + ", M=" +
                                  std::to_string(n_rx) + "); the access point must have more antennas than a receiver");
        if (receivers.empty())
            throw StructuralError("scenario.receivers: at least one receiver is required");
        for (std::size_t i = 0; i < receivers.size(); ++i)
            if (!(distance(i) > 0.0))
                throw StructuralError("scenario.receivers: receiver " + std::to_string(i + 1) +
                                      " is co-located with the access point");
        if (distance_ratio && !(*distance_ratio > 0.0))
            throw StructuralError("scenario.distance_ratio: must be > 0");
        if (!(rician_k >= 0.0))
            throw StructuralError("scenario.rician_k: must be >= 0");
        if (!(pathloss_exponent > 0.0))
            throw StructuralError("scenario.pathloss_exponent: must be > 0");
        if (!(reference_gain >= 0.0) || !std::isfinite(reference_gain))
            throw StructuralError("scenario.reference_gain: must be finite and >= 0");
        if (!(efficiency >= 0.0 && efficiency <= 1.0))
            throw StructuralError("scenario.efficiency: must lie in [0, 1]");
        if (slots < 1)
            throw StructuralError("scenario.slots: must be >= 1");
    }

    friend bool operator==(const ScenarioConfig &, const ScenarioConfig &) = default;
};

struct SlotChannels
{
    std::uint64_t slot_index = 0;
    std::vector<ChannelMatrix> channels;
};

// Identifies one random stream: (seed, stream id). Warm-up and evaluation use different ids.
struct ChannelStream
{
    static constexpr std::uint32_t evaluation = 0;
    static constexpr std::uint32_t warmup = 1;

    std::uint64_t seed = 0;
    std::uint32_t id = evaluation;
};

namespace detail
{
// CN(0, 1) draw number `draw` of slot `slot` in `stream` (Box-Muller on one Philox block)
inline cplx complex_gaussian(const ChannelStream &stream, std::uint64_t slot, std::uint32_t draw)
{
    const Philox4x32::Counter ctr{draw, static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(slot >> 32),
                                  stream.id};
    const auto u = Philox4x32::uniform_pair(Philox4x32::generate(ctr, Philox4x32::key_from_seed(stream.seed)));
    const double r = std::sqrt(-std::log(u[0]));
    const double phi = 2.0 * std::numbers::pi * u[1];
    return {r * std::cos(phi), r * std::sin(phi)};
}
} // namespace detail

// Rician MIMO channels of every receiver for one slot. Pure function of (cfg, stream, slot_index).
//   H_i = sqrt(g_i) (sqrt(k/(k+1)) H_LOS + sqrt(1/(k+1)) H_NLOS)
// For k >= 1e12 the scattered part is dropped entirely.
inline SlotChannels sample_slot(const ScenarioConfig &cfg, const ChannelStream &stream, std::uint64_t slot_index)
{
    const std::size_t m = cfg.n_rx, n = cfg.n_tx, k = cfg.receiver_count();
    const bool pure_los = cfg.rician_k >= 1e12;
    const double los_w = pure_los ? 1.0 : std::sqrt(cfg.rician_k / (cfg.rician_k + 1.0));
    const double nlos_w = pure_los ? 0.0 : std::sqrt(1.0 / (cfg.rician_k + 1.0));

    SlotChannels out{slot_index, {}};
    out.channels.reserve(k);
    std::uint32_t draw = 0;
    for (std::size_t i = 0; i < k; ++i)
    {
        const double amp = std::sqrt(cfg.path_gain(i));
        CVector steer(n, cplx{1.0, 0.0});
        if (cfg.los == LosModel::ula)
        {
            const double c = std::cos(cfg.bearing(i));
            for (std::size_t col = 0; col < n; ++col)
                steer[col] = std::polar(1.0, -std::numbers::pi * static_cast<double>(col) * c);
        }
        ChannelMatrix h(m, n);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t col = 0; col < n; ++col, ++draw)
            {
                cplx entry = los_w * steer[col];
                if (!pure_los)
                    entry += nlos_w * detail::complex_gaussian(stream, slot_index, draw);
                h(r, col) = amp * entry;
            }
        out.channels.push_back(std::move(h));
    }
    return out;
}

inline std::vector<GramMatrix> grams_of(const SlotChannels &slot)
{
    std::vector<GramMatrix> w;
    w.reserve(slot.channels.size());
    for (const auto &h : slot.channels)
        w.push_back(gram(h));
    return w;
}

// Which largest eigenvalue a spectrum tracks
enum class CombineRule
{
    first_receiver, // lambda_max(W_1), single-receiver energy-limited threshold
    sum             // lambda_max(sum_i W_i), power-limited threshold
};

// Largest eigenvalue of the selected combination for one slot's channels, clamped at 0
inline double combined_lambda_max(const SlotChannels &slot, CombineRule rule)
{
    const auto w = grams_of(slot);
    double value = 0.0;
    if (rule == CombineRule::first_receiver)
        value = max_eigpair(w.front()).value;
    else
    {
        const std::vector<double> ones(w.size(), 1.0);
        value = max_eigpair(weighted_combine(ones, w, 0.0)).value;
    }
    return std::max(value, 0.0);
}

// n_samples fresh draws of the selected largest eigenvalue, taken from `stream` (normally the warm-up stream)
inline EmpiricalSpectrum empirical_gain_spectrum(const ScenarioConfig &cfg, CombineRule rule, std::size_t n_samples,
                                                 const ChannelStream &stream)
{
    if (n_samples == 0)
        throw StructuralError("empirical_gain_spectrum: n_samples must be >= 1");
    std::vector<double> samples;
    samples.reserve(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s)
        samples.push_back(combined_lambda_max(sample_slot(cfg, stream, s), rule));
    return EmpiricalSpectrum(std::move(samples));
}

} // namespace wpt

#endif
