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
//
// Umbrella header: the whole library.

#ifndef WPT_WPT_HPP
#define WPT_WPT_HPP

#include "wpt/errors.hpp"
#include "wpt/linalg.hpp"
#include "wpt/philox.hpp"
#include "wpt/spectrum.hpp"
#include "wpt/channel.hpp"
#include "wpt/threshold.hpp"
#include "wpt/policy.hpp"
#include "wpt/harness.hpp"
#include "wpt/config.hpp"
#include "wpt/results.hpp"

#endif
