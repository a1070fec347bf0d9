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
// wpt: command-line front end.
//
//   wpt run     (--config FILE | --preset NAME) [--seed S] [--slots L] [--out PATH] [--format csv|jsonlines]
//   wpt sweep   ... [--reps R] [--threads T]
//   wpt compare ... [--reps R] [--threads T]
//   wpt presets                 list bundled presets
//   wpt show    (--config FILE | --preset NAME)   print the fully expanded config
//
// Output goes to --out, or to $WPT_OUT_DIR (default ".") as <command>-<name><ext>; "--out -" writes stdout.
// Exit status: 0 success, 1 usage or config error, 2 some sweep rows failed (file still written).

#include "wpt/wpt.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace
{

struct Options
{
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> slots;
    std::optional<std::size_t> reps;
    std::string out;
    std::string format = "csv";
    unsigned threads = wpt::default_threads();
};

void add_common(CLI::App *cmd, Options &o, bool with_reps)
{
    auto *cfg = cmd->add_option("--config", o.config, "experiment config file (INI)")->check(CLI::ExistingFile);
    auto *pre = cmd->add_option("--preset", o.preset, "bundled experiment preset");
    cfg->excludes(pre);
    cmd->add_option("--seed", o.seed, "override scenario.seed");
    cmd->add_option("--slots", o.slots, "override scenario.slots")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output file ('-' for stdout)");
    cmd->add_option("--format", o.format, "csv or jsonlines")->check(CLI::IsMember({"csv", "jsonlines"}));
    if (with_reps)
    {
        cmd->add_option("--reps", o.reps, "repetitions (independent seeds) per point")->check(CLI::PositiveNumber);
        cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    }
}

wpt::ExperimentConfig load(const Options &o)
{
    if (o.config.empty() && o.preset.empty())
        throw wpt::StructuralError("one of --config or --preset is required");
    wpt::ExperimentConfig e = o.config.empty() ? wpt::preset(o.preset) : wpt::parse_config(o.config);
    if (o.seed)
        e.scenario.seed = *o.seed;
    if (o.slots)
        e.scenario.slots = *o.slots;
    if (o.reps && e.sweep)
        e.sweep->repetitions = *o.reps;
    e.validate();
    return e;
}

std::string experiment_name(const Options &o)
{
    if (!o.preset.empty())
        return o.preset;
    return std::filesystem::path(o.config).stem().string();
}

std::string output_path(const Options &o, const std::string &command, wpt::OutputFormat f)
{
    if (!o.out.empty())
        return o.out;
    const char *dir = std::getenv("WPT_OUT_DIR");
    const std::filesystem::path base = dir && *dir ? dir : ".";
    return (base / (command + "-" + experiment_name(o) + std::string(wpt::extension(f)))).string();
}

void emit(const Options &o, const std::string &command, const wpt::ResultsTable &t)
{
    const auto f = wpt::parse_output_format(o.format);
    const std::string path = output_path(o, command, f);
    if (path == "-")
    {
        wpt::write_table(std::cout, t, f);
        return;
    }
    wpt::write_table(path, t, f);
    std::cerr << "wrote " << t.rows.size() << " rows to " << path << "\n";
}

std::string pct(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.2f%%", 100.0 * x);
    return buf;
}

int cmd_run(const Options &o)
{
    const auto e = load(o);
    const wpt::SweepRow row{0, 0.0, 0, e.scenario.seed, e.policy, wpt::run(e.scenario, e.params, e.policy), {}};
    auto t = wpt::summary_table({row});
    t.metadata = wpt::make_metadata("run", e);
    emit(o, "run", t);
    const auto &s = *row.summary;
    std::cerr << wpt::to_string(e.policy) << ": avg transmit " << s.avg_transmit_power << " W, total received "
              << s.total_received() << " W, duty " << s.duty_cycle << (s.stable ? "" : " [queues not stable]")
              << "\n";
    return 0;
}

int cmd_sweep(const Options &o)
{
    const auto e = load(o);
    if (!e.sweep)
        throw wpt::StructuralError("sweep: the config has no [sweep] section");
    const auto rows = wpt::sweep(e.scenario, e.params, *e.sweep, e.policies_for_sweep(), o.threads);
    auto t = wpt::summary_table(rows, wpt::to_string(e.sweep->parameter));
    t.metadata = wpt::make_metadata("sweep", e);
    emit(o, "sweep", t);
    std::size_t failed = 0;
    for (const auto &r : rows)
        if (!r.error.empty())
        {
            ++failed;
            std::cerr << "point " << r.point << " (" << r.value << ") rep " << r.repetition << " "
                      << wpt::to_string(r.policy) << ": " << r.error << "\n";
        }
    return failed ? 2 : 0;
}

int cmd_compare(const Options &o)
{
    auto e = load(o);
    wpt::SweepSpec spec;
    std::string swept;
    if (e.sweep)
    {
        spec = *e.sweep;
        swept = wpt::to_string(spec.parameter);
    }
    else
    {
        // single point: re-apply the configured antenna count
        spec = wpt::SweepSpec{wpt::SweepParameter::n_tx, {static_cast<double>(e.scenario.n_tx)}, 3};
    }
    if (o.reps)
        spec.repetitions = *o.reps;
    const auto [opt, mdpp] = wpt::comparison_pair(e.policy);
    e.sweep = spec;
    e.sweep_policies = {opt, mdpp};

    const auto rows = wpt::compare(e.scenario, e.params, e.policy, spec, o.threads);
    auto t = wpt::compare_table(rows, e.policy, swept);
    t.metadata = wpt::make_metadata("compare", e);
    emit(o, "compare", t);

    std::size_t failed = 0;
    for (const auto &r : rows)
        if (!r.error.empty())
        {
            ++failed;
            std::cerr << "point " << r.point << " rep " << r.repetition << ": " << r.error << "\n";
        }
    for (const auto &a : wpt::aggregate(rows))
        std::cerr << (swept.empty() ? std::string("point") : swept) << " " << a.value << ": "
                  << wpt::to_string(opt) << " " << a.optimal << ", " << wpt::to_string(mdpp) << " " << a.mdpp
                  << ", gap " << pct(a.relative_gap()) << " (B/V " << a.b_over_v << ")\n";
    return failed ? 2 : 0;
}

int cmd_show(const Options &o)
{
    std::cout << wpt::serialize_config(load(o));
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"wpt-lab: beamforming policies for multi-antenna RF wireless power transfer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wpt::version));

    Options run_o, sweep_o, compare_o, show_o;
    auto *run = app.add_subcommand("run", "simulate one policy and write its summary");
    add_common(run, run_o, false);
    auto *sweep = app.add_subcommand("sweep", "run the config's [sweep] for every listed policy");
    add_common(sweep, sweep_o, true);
    auto *compare = app.add_subcommand("compare", "optimal against drift-plus-penalty on shared seeds");
    add_common(compare, compare_o, true);
    auto *presets = app.add_subcommand("presets", "list bundled presets");
    auto *show = app.add_subcommand("show", "print the fully expanded config");
    show->add_option("--config", show_o.config, "experiment config file (INI)")
        ->check(CLI::ExistingFile)
        ->excludes(show->add_option("--preset", show_o.preset, "bundled experiment preset"));

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
            return cmd_run(run_o);
        if (*sweep)
            return cmd_sweep(sweep_o);
        if (*compare)
            return cmd_compare(compare_o);
        if (*show)
            return cmd_show(show_o);
        if (*presets)
        {
            for (const auto &n : wpt::preset_names())
                std::cout << n << "\n";
            return 0;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
