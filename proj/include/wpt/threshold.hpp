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

#ifndef WPT_THRESHOLD_HPP
#define WPT_THRESHOLD_HPP

#include "wpt/errors.hpp"
#include "wpt/spectrum.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wpt
{

// Transmit when lambda_max >= lambda_th (closed tail).
// lambda_th is 0 (always transmit), one of the spectrum samples, or +inf (never transmit).
struct ThresholdValue
{
    double lambda_th = 0.0;
    // Tail statistic reached on the spectrum: tail mean of lambda (energy) or duty fraction (power)
    double achieved_target = 0.0;

    static constexpr double never = std::numeric_limits<double>::infinity();
};

// Threshold for the single-receiver energy-limited optimum: the largest grid point t with
//   (1/n) sum_{lambda_j >= t} lambda_j >= p_target / p_peak.
// If the qualifying tail is the whole spectrum, the threshold is reported as 0.
inline ThresholdValue solve_energy_threshold(const EmpiricalSpectrum &spectrum, double p_target, double p_peak)
{
    if (!(p_target > 0.0))
        throw StructuralError("solve_energy_threshold: p_target must be > 0");
    if (!(p_peak > 0.0))
        throw StructuralError("solve_energy_threshold: p_peak must be > 0");

    const auto &s = spectrum.samples();
    const double n = static_cast<double>(s.size());
    const double need = p_target / p_peak;
    const double full = spectrum.mean();
    if (full < need)
        throw InfeasibleError("solve_energy_threshold: always transmitting delivers " + std::to_string(full * p_peak) +
                                  " W on average, target is " + std::to_string(p_target) + " W",
                              p_target - full * p_peak);

    // Walk distinct values from the top; all samples equal to the candidate join its tail.
    double tail = 0.0;
    std::size_t i = s.size();
    while (i > 0)
    {
        const double t = s[i - 1];
        while (i > 0 && s[i - 1] == t)
            tail += s[--i];
        if (tail / n >= need)
            return ThresholdValue{i == 0 ? 0.0 : t, tail / n};
    }
    return ThresholdValue{0.0, full};
}

// Threshold for the power-limited optimum: the sample at sorted position ceil(n (1 - p_avg/p_peak)),
// so that for distinct samples the closed tail holds floor(n p_avg/p_peak) samples.
// p_avg >= p_peak gives 0; a budget below one sample gives the `never` sentinel.
inline ThresholdValue solve_power_threshold(const EmpiricalSpectrum &spectrum, double p_avg, double p_peak)
{
    if (!(p_avg > 0.0))
        throw StructuralError("solve_power_threshold: p_avg must be > 0");
    if (!(p_peak > 0.0))
        throw StructuralError("solve_power_threshold: p_peak must be > 0");
    if (p_avg >= p_peak)
        return ThresholdValue{0.0, 1.0};

    const auto &s = spectrum.samples();
    const double n = static_cast<double>(s.size());
    const double below = n * (1.0 - p_avg / p_peak);
    // shave round-off so that exact products like 4 * 0.5 are not pushed up a slot
    const auto idx = static_cast<std::size_t>(std::ceil(below - 1e-9 * n));
    if (idx >= s.size())
        return ThresholdValue{ThresholdValue::never, 0.0};

    const double t = s[idx];
    std::size_t first = idx;
    while (first > 0 && s[first - 1] == t)
        --first;
    return ThresholdValue{t, (n - static_cast<double>(first)) / n};
}

} // namespace wpt

#endif
