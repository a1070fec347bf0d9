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

#include "wpt/config.hpp"
#include "wpt/results.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace wpt;
using Catch::Matchers::ContainsSubstring;

namespace
{
const std::string config_dir = WPT_CONFIG_DIR;

std::string temp_path(const std::string &name)
{
    return (std::filesystem::temp_directory_path() / ("wpt_test_" + name)).string();
}

std::vector<std::string> lines_of(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

SweepRow sample_row(PolicyKind kind, std::size_t slots = 500)
{
    ScenarioConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 2;
    cfg.slots = slots;
    cfg.warmup = 500;
    PolicyParams p;
    p.p_peak = 10.0;
    p.p_avg = 5.0;
    p.p_targets = {0.01, 0.01};
    p.p_min = 0.001;
    return SweepRow{0, 0.0, 0, cfg.seed, kind, run(cfg, p, kind), {}};
}
} // namespace

TEST_CASE("every preset validates and round-trips through its serialized form", "[config]")
{
    for (const auto &name : preset_names())
    {
        CAPTURE(name);
        const ExperimentConfig e = preset(name);
        CHECK_NOTHROW(e.validate());
        CHECK(parse_config_text(serialize_config(e)) == e);
    }
    CHECK_THROWS_WITH(preset("fig9"), ContainsSubstring("known: fig7-baseline"));
}

TEST_CASE("a file naming only a preset equals the preset", "[config]")
{
    CHECK(parse_config_text("preset = fig4\n") == preset("fig4"));
    CHECK(parse_config_text("preset = fig8a\n[policy]\n") == preset("fig8a"));
}

TEST_CASE("keys override the preset", "[config]")
{
    const ExperimentConfig e = parse_config(config_dir + "/fig4_override.ini");
    ExperimentConfig expected = preset("fig4");
    expected.params.p_targets = {0.005, 0.005};
    expected.sweep->repetitions = 5;
    CHECK(e == expected);

    const ExperimentConfig f = parse_config_text("preset = fig7-baseline\n[scenario]\nslots = 10\n[policy]\nv = 3\n");
    CHECK(f.scenario.slots == 10);
    CHECK(f.params.v == 3.0);
    CHECK_THROWS_WITH(parse_config_text("[policy]\nv = 3\nv = auto\n"), ContainsSubstring("duplicate key"));
}

TEST_CASE("bundled config files load", "[config]")
{
    const ExperimentConfig base = parse_config(config_dir + "/baseline.ini");
    CHECK(base.policy == PolicyKind::mdpp_power);
    CHECK(base.scenario == ScenarioConfig{});
    CHECK(base.params.p_peak == 10.0);
    CHECK(base.params.p_avg == 5.0);
    CHECK_FALSE(base.sweep);

    const ExperimentConfig fair = parse_config(config_dir + "/fairness.ini");
    CHECK(fair.policy == PolicyKind::qpf);
    REQUIRE(fair.sweep);
    CHECK(fair.sweep->parameter == SweepParameter::d_r);
    CHECK(fair.policies_for_sweep() == std::vector<PolicyKind>{PolicyKind::mmf, PolicyKind::qpf, PolicyKind::mdpp_power});
    CHECK(fair.scenario.receivers.size() == 2);
    CHECK(fair.scenario.distance(1) == fair.scenario.distance(0));

    CHECK_THROWS_WITH(parse_config(config_dir + "/invalid_antennas.ini"), ContainsSubstring("N > M"));
}

TEST_CASE("config errors name the file, key and line", "[config]")
{
    CHECK_THROWS_WITH(parse_config_text("[scenario]\nn_txx = 4\n", "a.ini"),
                      ContainsSubstring("a.ini") && ContainsSubstring("n_txx"));
    CHECK_THROWS_WITH(parse_config_text("[channel]\nk = 1\n", "b.ini"), ContainsSubstring("channel"));
    CHECK_THROWS_WITH(parse_config_text("[scenario]\nn_tx = 4\nthis line is broken\n", "c.ini"),
                      ContainsSubstring("c.ini:3"));
    CHECK_THROWS_WITH(parse_config_text("[scenario]\nn_tx = four\n"), ContainsSubstring("scenario.n_tx"));
    CHECK_THROWS_WITH(parse_config_text("[scenario]\nn_tx = 3\n"), ContainsSubstring("N > M"));
    CHECK_THROWS_WITH(parse_config_text("[policy]\nkind = greedy\n"), ContainsSubstring("unknown policy"));
    CHECK_THROWS_WITH(parse_config_text("[scenario]\nlos = cone\n"), ContainsSubstring("boresight"));
    CHECK_THROWS_WITH(parse_config_text("[scenario]\ndistance_ratio = 0\n"), ContainsSubstring("distance_ratio"));
    CHECK_THROWS_WITH(parse_config_text("[sweep]\nvalues = 1 2\n"), ContainsSubstring("sweep.parameter"));
    CHECK_THROWS_WITH(parse_config_text("preset = nope\n"), ContainsSubstring("unknown 'nope'"));
    CHECK_THROWS_WITH(parse_config(temp_path("does_not_exist.ini")), ContainsSubstring("cannot open"));
}

TEST_CASE("auto values and explicit numbers", "[config]")
{
    const ExperimentConfig e =
        parse_config_text("[scenario]\nreference_gain = 0.002\ndistance_ratio = none\n[policy]\nv = auto\n");
    CHECK(e.scenario.reference_gain == 0.002);
    CHECK_FALSE(e.scenario.distance_ratio);
    CHECK_FALSE(e.params.v);
    CHECK(parse_config_text("[scenario]\nreference_gain = auto\n").scenario.reference_gain == default_reference_gain());
}

TEST_CASE("CSV output quotes fields and keeps metadata as comments", "[results]")
{
    ResultsTable t;
    t.header = {"a", "b", "c", "d"};
    t.metadata = {"hello"};
    t.add_row({std::int64_t{3}, 0.5, std::string("x,\"y\""), Cell{}});
    CHECK_THROWS_AS(t.add_row({std::int64_t{1}}), StructuralError);
    std::ostringstream o;
    write_csv(o, t);
    CHECK(o.str() == "# hello\na,b,c,d\n3,0.5,\"x,\"\"y\"\"\",\n");
    CHECK(t.column("c") == 2);
    CHECK_THROWS_AS(t.column("e"), StructuralError);
}

TEST_CASE("JSON-lines output parses back", "[results]")
{
    ResultsTable t;
    t.header = {"n", "x", "s", "none"};
    t.add_row({std::int64_t{7}, std::numeric_limits<double>::infinity(), std::string("q\"r"), Cell{}});
    t.add_row({std::int64_t{8}, 0.25, std::string(), Cell{}});
    std::ostringstream o;
    write_jsonlines(o, t);
    const auto lines = lines_of(o.str());
    REQUIRE(lines.size() == 2);
    const auto j0 = nlohmann::json::parse(lines[0]);
    CHECK(j0["n"] == 7);
    CHECK(j0["x"] == "inf");
    CHECK(j0["s"] == "q\"r");
    CHECK(j0["none"].is_null());
    CHECK(nlohmann::json::parse(lines[1])["x"] == 0.25);
    CHECK(parse_output_format("jsonlines") == OutputFormat::jsonlines);
    CHECK(extension(OutputFormat::csv) == ".csv");
    CHECK_THROWS_AS(parse_output_format("xml"), StructuralError);
}

TEST_CASE("the output metadata embeds a config that reproduces the run", "[results]")
{
    ExperimentConfig e = preset("fig6");
    e.scenario.seed = 42;
    e.params.v = 12.5;
    ResultsTable t;
    t.header = {"a"};
    t.add_row({1.0});
    t.metadata = make_metadata("sweep", e);
    CHECK(t.metadata.front() == "wpt-lab " + std::string(version));
    for (const auto f : {OutputFormat::csv, OutputFormat::jsonlines})
    {
        const std::string path = temp_path(std::string("meta") + std::string(extension(f)));
        write_table(path, t, f);
        CHECK(config_from_output(path) == e);
        std::filesystem::remove(path);
    }
    const std::string bare = temp_path("bare.csv");
    std::ofstream(bare) << "a\n1\n";
    CHECK_THROWS_WITH(config_from_output(bare), ContainsSubstring("no embedded config"));
    std::filesystem::remove(bare);
}

TEST_CASE("summary table has one row per run and receiver", "[results]")
{
    std::vector<SweepRow> runs{sample_row(PolicyKind::qpf), sample_row(PolicyKind::optimal_power)};
    SweepRow failed;
    failed.point = 1;
    failed.policy = PolicyKind::mmf;
    failed.error = "boom";
    runs.push_back(failed);

    const ResultsTable t = summary_table(runs, "d_r");
    REQUIRE(t.rows.size() == 5);
    const auto col = [&](const char *name) { return t.column(name); };
    CHECK(t.rows[0][col("policy")] == Cell{std::string("qpf")});
    CHECK(t.rows[1][col("receiver")] == Cell{std::int64_t{2}});
    CHECK(t.rows[0][col("sweep_parameter")] == Cell{std::string("d_r")});
    CHECK(std::holds_alternative<double>(t.rows[0][col("target_queue_rate")]));
    CHECK(std::holds_alternative<double>(t.rows[0][col("fairness_queue_rate")]));
    CHECK(std::holds_alternative<double>(t.rows[0][col("budget_queue_rate")]));
    CHECK(std::holds_alternative<std::monostate>(t.rows[2][col("v")]));
    CHECK(std::holds_alternative<double>(t.rows[2][col("threshold")]));
    CHECK(t.rows[4][col("error")] == Cell{std::string("boom")});
    CHECK(std::holds_alternative<std::monostate>(t.rows[4][col("avg_received_power")]));
    const auto &s = *runs[0].summary;
    CHECK(t.rows[1][col("avg_received_power")] == Cell{s.avg_received_power[1]});
    CHECK(t.rows[1][col("total_received_power")] == Cell{s.total_received()});
}

TEST_CASE("compare table adds a mean row per point", "[results]")
{
    std::vector<CompareRow> rows(3);
    rows[0] = {0, 4.0, 0, 1, 1.0, 1.1, 10.0, 0.5, ""};
    rows[1] = {0, 4.0, 1, 2, 1.0, 1.3, 10.0, 0.5, ""};
    rows[2] = {1, 6.0, 0, 3, 0.0, 0.0, 0.0, 0.0, "infeasible"};
    const ResultsTable t = compare_table(rows, PolicyKind::mdpp_energy, "n_tx");
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[2][t.column("repetition")] == Cell{std::string("mean")});
    CHECK(t.rows[2][t.column("metric")] == Cell{std::string("avg_transmit_power")});
    CHECK(std::get<double>(t.rows[2][t.column("mdpp")]) == Catch::Approx(1.2));
    CHECK(t.rows[3][t.column("error")] == Cell{std::string("infeasible")});
}
