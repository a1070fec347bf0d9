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
// Results tables: rectangular rows, a '#'-prefixed metadata block, CSV or JSON-lines output.

#ifndef WPT_RESULTS_HPP
#define WPT_RESULTS_HPP

#include "wpt/config.hpp"
#include "wpt/errors.hpp"
#include "wpt/harness.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace wpt
{

inline constexpr std::string_view version = "0.1.0";

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct ResultsTable
{
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> metadata; // written as '# ' lines

    void add_row(std::vector<Cell> row)
    {
        if (row.size() != header.size())
            throw StructuralError("ResultsTable: row has " + std::to_string(row.size()) + " cells, header has " +
                                  std::to_string(header.size()));
        rows.push_back(std::move(row));
    }

    std::size_t column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw StructuralError("ResultsTable: no column '" + std::string(name) + "'");
    }
};

enum class OutputFormat
{
    csv,
    jsonlines
};

inline OutputFormat parse_output_format(std::string_view s)
{
    if (s == "csv")
        return OutputFormat::csv;
    if (s == "jsonlines")
        return OutputFormat::jsonlines;
    throw StructuralError("--format: '" + std::string(s) + "' (expected csv or jsonlines)");
}

inline std::string_view extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".jsonl"; }

namespace detail
{
inline std::string csv_field(const Cell &c)
{
    struct
    {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string &s) const
        {
            if (s.find_first_of(",\"\r\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (const char ch : s)
                q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
    } visit;
    return std::visit(visit, c);
}

inline nlohmann::json json_value(const Cell &c)
{
    struct
    {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        // JSON has no inf/nan; spell them as strings
        nlohmann::json operator()(double v) const
        {
            if (std::isfinite(v))
                return v;
            return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
        }
        nlohmann::json operator()(std::int64_t v) const { return v; }
        nlohmann::json operator()(const std::string &s) const { return s; }
    } visit;
    return std::visit(visit, c);
}

inline void write_metadata(std::ostream &out, const ResultsTable &t)
{
    for (const auto &m : t.metadata)
        out << "# " << m << "\n";
}
} // namespace detail

inline void write_csv(std::ostream &out, const ResultsTable &t)
{
    detail::write_metadata(out, t);
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out << (i ? "," : "") << detail::csv_field(t.header[i]);
    out << "\n";
    for (const auto &row : t.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << detail::csv_field(row[i]);
        out << "\n";
    }
}

inline void write_jsonlines(std::ostream &out, const ResultsTable &t)
{
    detail::write_metadata(out, t);
    for (const auto &row : t.rows)
    {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            obj[t.header[i]] = detail::json_value(row[i]);
        out << obj.dump() << "\n";
    }
}

inline void write_table(std::ostream &out, const ResultsTable &t, OutputFormat f)
{
    if (f == OutputFormat::csv)
        write_csv(out, t);
    else
        write_jsonlines(out, t);
}

inline void write_table(const std::string &path, const ResultsTable &t, OutputFormat f)
{
    std::ofstream out(path);
    if (!out)
        throw StructuralError("cannot write output file " + path);
    write_table(out, t, f);
    out.flush();
    if (!out)
        throw StructuralError("write failed for output file " + path);
}

inline constexpr std::string_view config_begin = "--- effective config ---";
inline constexpr std::string_view config_end = "--- end config ---";

// Metadata block: tool version, command, and the complete effective config between markers
inline std::vector<std::string> make_metadata(const std::string &command, const ExperimentConfig &e)
{
    std::vector<std::string> m;
    m.push_back("wpt-lab " + std::string(version));
    m.push_back("command: " + command);
    m.push_back("seed: " + std::to_string(e.scenario.seed));
    m.push_back("channel defaults: rician_k=" + detail::format_real(e.scenario.rician_k) +
                " pathloss_exponent=" + detail::format_real(e.scenario.pathloss_exponent) +
                " reference_gain=" + detail::format_real(e.scenario.reference_gain) +
                " los=" + std::string(detail::to_string(e.scenario.los)));
    m.emplace_back(config_begin);
    std::istringstream in(serialize_config(e));
    for (std::string line; std::getline(in, line);)
        m.push_back(line);
    m.emplace_back(config_end);
    return m;
}

// Recovers the config embedded in an output file's metadata block
inline ExperimentConfig config_from_output(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw StructuralError(path + ": cannot open");
    std::string text, line;
    bool inside = false;
    while (std::getline(in, line))
    {
        if (line.rfind("# ", 0) != 0 && line != "#")
            break;
        const std::string body = line.size() > 2 ? line.substr(2) : std::string();
        if (body == config_begin)
            inside = true;
        else if (body == config_end)
            inside = false;
        else if (inside)
            text += body + "\n";
    }
    if (text.empty())
        throw StructuralError(path + ": no embedded config block");
    return parse_config_text(text, path);
}

// Long format: one row per (run, receiver); failed runs give one row carrying the error
inline ResultsTable summary_table(const std::vector<SweepRow> &runs, std::string_view swept = "")
{
    ResultsTable t;
    t.header = {"point", "sweep_parameter", "sweep_value", "repetition", "seed", "policy", "v", "slots",
                "receiver", "avg_received_power", "avg_transmit_power", "total_received_power",
                "min_received_power", "sum_log_received", "duty_cycle", "target_queue_rate", "fairness_queue_rate",
                "budget_queue_rate", "threshold", "stable", "drift_violations", "error"};
    const Cell param = swept.empty() ? Cell{} : Cell{std::string(swept)};
    const Cell value_none{};
    for (const auto &r : runs)
    {
        const auto i64 = [](std::size_t v) { return static_cast<std::int64_t>(v); };
        const Cell value = swept.empty() ? value_none : Cell{r.value};
        if (!r.summary)
        {
            t.add_row({i64(r.point), param, value, i64(r.repetition), i64(r.seed), std::string(to_string(r.policy)),
                       {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, r.error});
            continue;
        }
        const RunSummary &s = *r.summary;
        const std::size_t k = s.avg_received_power.size();
        // queue layout per policy: see QueueState::initial
        Cell budget{};
        std::vector<Cell> target(k), fairness(k);
        switch (s.policy)
        {
        case PolicyKind::mdpp_energy:
            for (std::size_t i = 0; i < k; ++i)
                target[i] = s.z_rates[i];
            break;
        case PolicyKind::mdpp_power:
            budget = s.z_rates[0];
            break;
        case PolicyKind::mmf:
            budget = s.z_rates[0];
            for (std::size_t i = 0; i < k; ++i)
                fairness[i] = s.g_rates[i];
            break;
        case PolicyKind::qpf:
            budget = s.z_rates[k];
            for (std::size_t i = 0; i < k; ++i)
            {
                target[i] = s.z_rates[i];
                fairness[i] = s.g_rates[i];
            }
            break;
        default:
            break;
        }
        const Cell v = is_optimal(s.policy) ? Cell{} : Cell{*s.params.v};
        const Cell threshold = s.threshold ? Cell{s.threshold->lambda_th} : Cell{};
        for (std::size_t i = 0; i < k; ++i)
            t.add_row({i64(r.point), param, value, i64(r.repetition), i64(r.seed), std::string(to_string(s.policy)),
                       v, i64(s.slots), i64(i + 1), s.avg_received_power[i], s.avg_transmit_power,
                       s.total_received(), s.min_received, s.sum_log_received, s.duty_cycle, target[i], fairness[i],
                       budget, threshold, std::int64_t{s.stable ? 1 : 0}, i64(s.drift_violations), std::string()});
    }
    return t;
}

// One row per (point, repetition) plus one "mean" row per point
inline ResultsTable compare_table(const std::vector<CompareRow> &rows, PolicyKind kind, std::string_view swept = "")
{
    ResultsTable t;
    t.header = {"point", "sweep_parameter", "sweep_value", "repetition", "seed", "metric", "optimal", "mdpp",
                "gap", "relative_gap", "standard_error", "v", "b_over_v", "error"};
    const std::string metric = is_energy_limited(kind) ? "avg_transmit_power" : "total_received_power";
    const Cell param = swept.empty() ? Cell{} : Cell{std::string(swept)};
    const auto i64 = [](std::size_t v) { return static_cast<std::int64_t>(v); };
    const auto agg = aggregate(rows);
    std::size_t a = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const CompareRow &r = rows[i];
        const Cell value = swept.empty() ? Cell{} : Cell{r.value};
        if (!r.error.empty())
            t.add_row({i64(r.point), param, value, i64(r.repetition), i64(r.seed), metric, {}, {}, {}, {}, {}, {}, {},
                       r.error});
        else
            t.add_row({i64(r.point), param, value, i64(r.repetition), i64(r.seed), metric, r.optimal, r.mdpp, r.gap(),
                       r.relative_gap(), {}, r.v, r.b_over_v, std::string()});
        const bool last_of_point = i + 1 == rows.size() || rows[i + 1].point != r.point;
        if (last_of_point && a < agg.size() && agg[a].point == r.point)
        {
            const auto &m = agg[a++];
            t.add_row({i64(m.point), param, value, std::string("mean"), {}, metric, m.optimal, m.mdpp, m.gap(),
                       m.relative_gap(), m.standard_error, {}, m.b_over_v, std::string()});
        }
    }
    return t;
}

} // namespace wpt

#endif
