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
// Experiment configuration files. INI syntax:
//
//   preset = fig4            ; optional, keys below override the preset
//
//   [scenario]
//   n_tx = 8
//   n_rx = 4
//   ap = 0 0
//   receivers = 0.3 0.3; 0 0.7071067811865476
//   distance_ratio = 1.5     ; optional, re-places receiver 2
//   rician_k = 3
//   pathloss_exponent = 2.5
//   reference_gain = auto    ; or a number
//   efficiency = 1
//   los = ula                ; or boresight
//   slots = 100000
//   seed = 1
//   warmup = 20000
//
//   [policy]
//   kind = mdpp-power
//   v = auto                 ; or a number
//   p_peak = 5
//   p_avg = 5
//   p_targets = 0.015 0.015
//   p_min = 0
//
//   [sweep]                  ; optional
//   parameter = n_tx         ; n_tx | v | d_r | p_target
//   values = 4 6 8 10
//   repetitions = 3
//   policies = mdpp-energy   ; defaults to [policy] kind
//
// Unknown sections and keys are rejected.

#ifndef WPT_CONFIG_HPP
#define WPT_CONFIG_HPP

#include "wpt/channel.hpp"
#include "wpt/errors.hpp"
#include "wpt/harness.hpp"
#include "wpt/policy.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace wpt
{

// Everything one experiment needs: scenario, policy, and optionally a sweep
struct ExperimentConfig
{
    std::string preset; // empty when not derived from a preset
    ScenarioConfig scenario;
    PolicyParams params;
    PolicyKind policy = PolicyKind::mdpp_power;
    std::optional<SweepSpec> sweep;
    std::vector<PolicyKind> sweep_policies; // empty means {policy}

    std::vector<PolicyKind> policies_for_sweep() const
    {
        return sweep_policies.empty() ? std::vector<PolicyKind>{policy} : sweep_policies;
    }

    // Checks every invariant that does not depend on a sweep point
    void validate() const
    {
        scenario.validate();
        params.validate(policy, scenario.receiver_count());
        if (sweep)
            sweep->validate();
    }

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

namespace detail
{
inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, std::string_view seps)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size())
    {
        const auto b = s.find_first_not_of(seps, i);
        if (b == std::string_view::npos)
            break;
        auto e = s.find_first_of(seps, b);
        if (e == std::string_view::npos)
            e = s.size();
        out.emplace_back(s.substr(b, e - b));
        i = e;
    }
    return out;
}

inline double parse_real(const std::string &key, std::string_view text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw StructuralError(key + ": '" + t + "' is not a number");
    return v;
}

inline std::uint64_t parse_count(const std::string &key, std::string_view text)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw StructuralError(key + ": '" + t + "' is not a nonnegative integer");
    return v;
}

inline std::vector<double> parse_reals(const std::string &key, std::string_view text)
{
    std::vector<double> out;
    for (const auto &tok : split(text, " \t,"))
        out.push_back(parse_real(key, tok));
    return out;
}

inline Point parse_point(const std::string &key, std::string_view text)
{
    const auto xy = parse_reals(key, text);
    if (xy.size() != 2)
        throw StructuralError(key + ": expected 'x y', got '" + trim(text) + "'");
    return {xy[0], xy[1]};
}

inline std::string format_real(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_reals(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + format_real(v[i]);
    return s;
}

inline std::string_view to_string(LosModel m) { return m == LosModel::ula ? "ula" : "boresight"; }

inline LosModel parse_los(const std::string &key, std::string_view s)
{
    if (s == "ula")
        return LosModel::ula;
    if (s == "boresight")
        return LosModel::boresight;
    throw StructuralError(key + ": '" + std::string(s) + "' (expected ula or boresight)");
}

inline const std::map<std::string, std::set<std::string>> &allowed_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"scenario",
         {"n_tx", "n_rx", "ap", "receivers", "distance_ratio", "rician_k", "pathloss_exponent", "reference_gain",
          "efficiency", "los", "slots", "seed", "warmup"}},
        {"policy", {"kind", "v", "p_peak", "p_avg", "p_targets", "p_min"}},
        {"sweep", {"parameter", "values", "repetitions", "policies"}},
    };
    return keys;
}
} // namespace detail

// ---------------------------------------------------------------- presets

inline std::vector<std::string> preset_names()
{
    return {"fig7-baseline", "fig4", "fig5", "fig6", "fig8a", "fig8b"};
}

// Fully specified experiment for each bundled preset. All share the two-receiver topology:
// access point at the origin, receiver 1 at (0.3, 0.3), receiver 2 at (0, 0.5 sqrt 2), 1e5 slots.
// Sweeps over n_tx use three receive antennas so that every point keeps N > M.
inline ExperimentConfig preset(std::string_view name)
{
    ExperimentConfig e;
    e.preset = std::string(name);
    e.params.p_targets = {0.015, 0.015};
    const std::vector<double> antennas{4, 6, 8, 10};

    if (name == "fig7-baseline")
    {
        e.policy = PolicyKind::mdpp_power;
        e.params.p_peak = 10.0;
        e.params.p_avg = 5.0;
    }
    else if (name == "fig4")
    {
        // transmit power needed for 10 mW at both receivers versus the number of antennas
        e.scenario.n_rx = 3;
        e.policy = PolicyKind::mdpp_energy;
        e.params.p_peak = 5.0;
        e.params.p_targets = {0.01, 0.01};
        e.sweep = SweepSpec{SweepParameter::n_tx, antennas, 3};
        e.sweep_policies = {PolicyKind::mdpp_energy};
    }
    else if (name == "fig5")
    {
        // single receiver, 15 mW target: drift-plus-penalty against the threshold optimum
        e.scenario.n_rx = 3;
        e.scenario.receivers = {{0.3, 0.3}};
        e.policy = PolicyKind::mdpp_energy;
        e.params.p_peak = 5.0;
        e.params.p_targets = {0.015};
        e.sweep = SweepSpec{SweepParameter::n_tx, antennas, 3};
        e.sweep_policies = {PolicyKind::optimal_energy, PolicyKind::mdpp_energy};
    }
    else if (name == "fig6")
    {
        // total received power under a 10 W peak / 5 W average budget versus the number of antennas
        e.scenario.n_rx = 3;
        e.policy = PolicyKind::mdpp_power;
        e.params.p_peak = 10.0;
        e.params.p_avg = 5.0;
        e.sweep = SweepSpec{SweepParameter::n_tx, antennas, 3};
        e.sweep_policies = {PolicyKind::optimal_power, PolicyKind::mdpp_power};
    }
    else if (name == "fig8a" || name == "fig8b")
    {
        // per-receiver (a) and total (b) received power versus the distance ratio
        e.policy = PolicyKind::mmf;
        e.params.p_peak = 10.0;
        e.params.p_avg = 5.0;
        e.params.p_min = 0.005;
        e.scenario.distance_ratio = 1.0;
        e.scenario.apply_distance_ratio();
        const std::vector<double> ratios =
            name == "fig8a" ? std::vector<double>{1.0, 1.25, 1.5, 2.0} : std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0};
        e.sweep = SweepSpec{SweepParameter::d_r, ratios, 3};
        e.sweep_policies = {PolicyKind::mmf, PolicyKind::qpf, PolicyKind::mdpp_power};
    }
    else
    {
        std::string known;
        for (const auto &n : preset_names())
            known += (known.empty() ? "" : ", ") + n;
        throw StructuralError("preset: unknown '" + std::string(name) + "' (known: " + known + ")");
    }
    return e;
}

// ---------------------------------------------------------------- parsing

// Parses an INI stream; `origin` prefixes error messages (normally the file path)
inline ExperimentConfig parse_config_stream(std::istream &in, const std::string &origin)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try
    {
        pt::ini_parser::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error &e)
    {
        throw StructuralError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig e;
    const auto &allowed = detail::allowed_keys();
    for (const auto &[name, node] : tree)
    {
        if (node.empty() && !allowed.count(name))
        {
            if (name != "preset")
                throw StructuralError(origin + ": unknown top-level key '" + name + "'");
            continue;
        }
        const auto it = allowed.find(name);
        if (it == allowed.end())
            throw StructuralError(origin + ": unknown section [" + name + "]");
        for (const auto &[key, _] : node)
            if (!it->second.count(key))
                throw StructuralError(origin + ": unknown key '" + name + "." + key + "'");
    }

    try
    {
        if (const auto p = tree.get_optional<std::string>("preset"))
            e = preset(detail::trim(*p));

        auto get = [&](const char *path) -> std::optional<std::string> {
            if (const auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.')))
                return detail::trim(*v);
            return std::nullopt;
        };

        ScenarioConfig &s = e.scenario;
        if (auto v = get("scenario.n_tx"))
            s.n_tx = detail::parse_count("scenario.n_tx", *v);
        if (auto v = get("scenario.n_rx"))
            s.n_rx = detail::parse_count("scenario.n_rx", *v);
        if (auto v = get("scenario.ap"))
            s.ap = detail::parse_point("scenario.ap", *v);
        if (auto v = get("scenario.receivers"))
        {
            s.receivers.clear();
            for (const auto &pt : detail::split(*v, ";"))
                s.receivers.push_back(detail::parse_point("scenario.receivers", pt));
        }
        if (auto v = get("scenario.distance_ratio"))
        {
            if (*v == "none")
                s.distance_ratio.reset();
            else
                s.distance_ratio = detail::parse_real("scenario.distance_ratio", *v);
        }
        if (auto v = get("scenario.rician_k"))
            s.rician_k = detail::parse_real("scenario.rician_k", *v);
        if (auto v = get("scenario.pathloss_exponent"))
            s.pathloss_exponent = detail::parse_real("scenario.pathloss_exponent", *v);
        if (auto v = get("scenario.reference_gain"))
            s.reference_gain = *v == "auto" ? default_reference_gain()
                                            : detail::parse_real("scenario.reference_gain", *v);
        if (auto v = get("scenario.efficiency"))
            s.efficiency = detail::parse_real("scenario.efficiency", *v);
        if (auto v = get("scenario.los"))
            s.los = detail::parse_los("scenario.los", *v);
        if (auto v = get("scenario.slots"))
            s.slots = detail::parse_count("scenario.slots", *v);
        if (auto v = get("scenario.seed"))
            s.seed = detail::parse_count("scenario.seed", *v);
        if (auto v = get("scenario.warmup"))
            s.warmup = detail::parse_count("scenario.warmup", *v);
        if (s.distance_ratio)
        {
            if (!(*s.distance_ratio > 0.0))
                throw StructuralError("scenario.distance_ratio: must be > 0");
            s.apply_distance_ratio();
        }

        PolicyParams &p = e.params;
        if (auto v = get("policy.kind"))
            e.policy = parse_policy_kind(*v);
        if (auto v = get("policy.v"))
        {
            if (*v == "auto")
                p.v.reset();
            else
                p.v = detail::parse_real("policy.v", *v);
        }
        if (auto v = get("policy.p_peak"))
            p.p_peak = detail::parse_real("policy.p_peak", *v);
        if (auto v = get("policy.p_avg"))
            p.p_avg = detail::parse_real("policy.p_avg", *v);
        if (auto v = get("policy.p_targets"))
            p.p_targets = detail::parse_reals("policy.p_targets", *v);
        if (auto v = get("policy.p_min"))
            p.p_min = detail::parse_real("policy.p_min", *v);

        if (tree.get_child_optional("sweep"))
        {
            SweepSpec sw = e.sweep.value_or(SweepSpec{});
            if (auto v = get("sweep.parameter"))
                sw.parameter = parse_sweep_parameter(*v);
            else if (!e.sweep)
                throw StructuralError("sweep.parameter: required when a [sweep] section is present");
            if (auto v = get("sweep.values"))
                sw.values = detail::parse_reals("sweep.values", *v);
            if (auto v = get("sweep.repetitions"))
                sw.repetitions = detail::parse_count("sweep.repetitions", *v);
            if (auto v = get("sweep.policies"))
            {
                e.sweep_policies.clear();
                for (const auto &tok : detail::split(*v, " \t,"))
                    e.sweep_policies.push_back(parse_policy_kind(tok));
            }
            e.sweep = sw;
        }
        if (e.sweep && e.sweep_policies.empty())
            e.sweep_policies = {e.policy};
        e.validate();
    }
    catch (const StructuralError &err)
    {
        throw StructuralError(origin + ": " + err.what());
    }
    return e;
}

inline ExperimentConfig parse_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw StructuralError(path + ": cannot open config file");
    return parse_config_stream(in, path);
}

inline ExperimentConfig parse_config_text(const std::string &text, const std::string &origin = "<config>")
{
    std::istringstream in(text);
    return parse_config_stream(in, origin);
}

// ---------------------------------------------------------------- serialization

// Complete INI text of the effective configuration, every key spelled out; parses back to an equal config
inline std::string serialize_config(const ExperimentConfig &e)
{
    using detail::format_real;
    std::ostringstream o;
    if (!e.preset.empty())
        o << "preset = " << e.preset << "\n\n";
    const ScenarioConfig &s = e.scenario;
    o << "[scenario]\n";
    o << "n_tx = " << s.n_tx << "\n";
    o << "n_rx = " << s.n_rx << "\n";
    o << "ap = " << format_real(s.ap.x) << " " << format_real(s.ap.y) << "\n";
    o << "receivers = ";
    for (std::size_t i = 0; i < s.receivers.size(); ++i)
        o << (i ? "; " : "") << format_real(s.receivers[i].x) << " " << format_real(s.receivers[i].y);
    o << "\n";
    o << "distance_ratio = " << (s.distance_ratio ? format_real(*s.distance_ratio) : std::string("none")) << "\n";
    o << "rician_k = " << format_real(s.rician_k) << "\n";
    o << "pathloss_exponent = " << format_real(s.pathloss_exponent) << "\n";
    o << "reference_gain = " << format_real(s.reference_gain) << "\n";
    o << "efficiency = " << format_real(s.efficiency) << "\n";
    o << "los = " << detail::to_string(s.los) << "\n";
    o << "slots = " << s.slots << "\n";
    o << "seed = " << s.seed << "\n";
    o << "warmup = " << s.warmup << "\n";

    const PolicyParams &p = e.params;
    o << "\n[policy]\n";
    o << "kind = " << to_string(e.policy) << "\n";
    o << "v = " << (p.v ? format_real(*p.v) : std::string("auto")) << "\n";
    o << "p_peak = " << format_real(p.p_peak) << "\n";
    o << "p_avg = " << format_real(p.p_avg) << "\n";
    o << "p_targets = " << detail::format_reals(p.p_targets) << "\n";
    o << "p_min = " << format_real(p.p_min) << "\n";

    if (e.sweep)
    {
        o << "\n[sweep]\n";
        o << "parameter = " << to_string(e.sweep->parameter) << "\n";
        o << "values = " << detail::format_reals(e.sweep->values) << "\n";
        o << "repetitions = " << e.sweep->repetitions << "\n";
        o << "policies =";
        for (const auto k : e.policies_for_sweep())
            o << " " << to_string(k);
        o << "\n";
    }
    return o.str();
}

} // namespace wpt

#endif
