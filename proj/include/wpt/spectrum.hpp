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

#ifndef WPT_SPECTRUM_HPP
#define WPT_SPECTRUM_HPP

#include "wpt/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

namespace wpt
{

// Sorted, nonnegative samples of a largest-eigenvalue distribution
class EmpiricalSpectrum
{
public:
    explicit EmpiricalSpectrum(std::vector<double> samples) : samples_(std::move(samples))
    {
        if (samples_.empty())
            throw StructuralError("EmpiricalSpectrum: no samples");
        for (const double s : samples_)
            if (!std::isfinite(s) || s < 0.0)
                throw StructuralError("EmpiricalSpectrum: samples must be finite and >= 0");
        std::sort(samples_.begin(), samples_.end());
    }

    const std::vector<double> &samples() const noexcept { return samples_; }
    std::size_t count() const noexcept { return samples_.size(); }

    double mean() const noexcept
    {
        return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
    }

    // Smallest sample s with (#samples <= s) / n >= p; p is clamped to [0, 1]
    double quantile(double p) const noexcept
    {
        const double n = static_cast<double>(samples_.size());
        const double pos = std::ceil(std::clamp(p, 0.0, 1.0) * n);
        const auto idx = static_cast<std::size_t>(std::max(pos, 1.0)) - 1;
        return samples_[std::min(idx, samples_.size() - 1)];
    }

    // One value per line, shortest round-trip formatting
    void dump(const std::string &path) const
    {
        std::ofstream out(path);
        if (!out)
            throw StructuralError("EmpiricalSpectrum::dump: cannot open " + path);
        char buf[64];
        for (const double s : samples_)
        {
            const auto res = std::to_chars(buf, buf + sizeof buf, s);
            out.write(buf, res.ptr - buf).put('\n');
        }
        if (!out)
            throw StructuralError("EmpiricalSpectrum::dump: write failed for " + path);
    }

    // Blank lines and lines starting with '#' are skipped
    static EmpiricalSpectrum load(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw StructuralError("EmpiricalSpectrum::load: cannot open " + path);
        std::vector<double> values;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            const auto last = line.find_last_not_of(" \t\r");
            double v = 0.0;
            const char *b = line.data() + first, *e = line.data() + last + 1;
            const auto res = std::from_chars(b, e, v);
            if (res.ec != std::errc{} || res.ptr != e)
                throw StructuralError(path + ":" + std::to_string(lineno) + ": not a number");
            values.push_back(v);
        }
        return EmpiricalSpectrum(std::move(values));
    }

private:
    std::vector<double> samples_;
};

} // namespace wpt

#endif
