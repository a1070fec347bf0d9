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

#ifndef WPT_ERRORS_HPP
#define WPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wpt
{

// Shape or precondition violations (dimension mismatch, empty input, non-Hermitian matrix, bad config)
class StructuralError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative numerics that did not converge; carries the last residual
class NumericError : public std::runtime_error
{
public:
    NumericError(const std::string &what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// A power target that no threshold policy can reach; deficit is in watts
class InfeasibleError : public std::runtime_error
{
public:
    InfeasibleError(const std::string &what, double deficit)
        : std::runtime_error(what + " (deficit " + std::to_string(deficit) + " W)"), deficit_(deficit) {}

    double deficit() const noexcept { return deficit_; }

private:
    double deficit_;
};

} // namespace wpt

#endif
