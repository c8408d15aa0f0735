/*
 * Copyright 2026 The cfp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cfp/errors.hpp"
#include "cfp/io.hpp"

using namespace cfp;
using nlohmann::json;

namespace
{
const std::filesystem::path kData = CFP_DATA_DIR;

json two_halfspaces()
{
    return json::parse(R"({
        "name": "two",
        "dimension": 2,
        "operators": [
            {"kind": "halfspace", "normal": [1.0, 0.0], "offset": 0.0},
            {"kind": "halfspace", "normal": [0.0, 1.0], "offset": 0.0}
        ],
        "reference_points": [[-1.0, -1.0]]
    })");
}

std::string load_error(const json& j)
{
    try
    {
        (void)problem_from_json(j);
    }
    catch (const LoadError& e)
    {
        return e.what();
    }
    return "";
}
}  // namespace

TEST_CASE("minimal problem")
{
    const ProblemSpec p = problem_from_json(two_halfspaces());
    CHECK(p.name == "two");
    CHECK(p.dimension == 2);
    CHECK(p.operators.size() == 2);
    CHECK(p.reference_points.size() == 1);
    CHECK_FALSE(p.seed);
}

TEST_CASE("problem validation")
{
    json j = two_halfspaces();
    j["reference_points"] = {{1.0, -1.0}};
    const std::string bad_ref = load_error(j);
    CHECK(bad_ref.find("operator 0") != std::string::npos);
    CHECK(bad_ref.find("halfspace") != std::string::npos);

    j = two_halfspaces();
    j["operators"][1]["normal"] = {0.0, 0.0};
    CHECK(load_error(j).find("operator 1") != std::string::npos);

    j = two_halfspaces();
    j["operators"][0]["normal"] = {1.0, 0.0, 0.0};
    CHECK(load_error(j).find("dimension") != std::string::npos);

    j = two_halfspaces();
    j["operators"][0]["kind"] = "ellipsoid";
    CHECK(load_error(j).find("ellipsoid") != std::string::npos);

    j = two_halfspaces();
    j.erase("dimension");
    CHECK(load_error(j).find("dimension") != std::string::npos);

    j = two_halfspaces();
    j["operators"][0]["offset"] = "zero";
    CHECK_FALSE(load_error(j).empty());

    j = two_halfspaces();
    j["operators"] = json::array();
    CHECK_FALSE(load_error(j).empty());

    CHECK_THROWS_AS(load_problem(kData / "does-not-exist.json"), LoadError);
}

TEST_CASE("shipped problems round-trip")
{
    for (const char* name : {"two_hyperplanes.json", "mixed.json"})
    {
        std::ifstream in(kData / name);
        REQUIRE(in);
        const json original = json::parse(in);
        const ProblemSpec p = problem_from_json(original);
        const json emitted = problem_to_json(p);
        const ProblemSpec again = problem_from_json(emitted);
        CHECK(problem_to_json(again) == emitted);
        CHECK(again.operators.size() == p.operators.size());
        CHECK(again.reference_points == p.reference_points);
        for (std::size_t i = 0; i < p.operators.size(); ++i)
            CHECK(cutter_to_json(*again.operators[i]) == original["operators"][i]);
    }
}

TEST_CASE("config parsing")
{
    const RunConfig c = config_from_json(json::parse(R"({
        "tau1": 0.5, "tau2": 0.75,
        "lambda_policy": {"kind": "fraction", "gamma": 0.25},
        "schedule": {"kind": "example45", "s": 4, "seed": 7},
        "max_iterations": 10, "residual_tolerance": 1e-6,
        "initial_point": [1.0, 2.0],
        "output": {"trace": "t.csv", "full_trace_limit": 5}
    })"));
    CHECK(c.tau1 == 0.5);
    CHECK(c.tau2 == 0.75);
    CHECK(c.policy == LambdaPolicy::fraction(0.25));
    CHECK(c.schedule.kind == ScheduleKind::example45);
    CHECK(c.schedule.window == 4);
    CHECK(c.schedule.seed == 7u);
    CHECK(c.output.trace_path == "t.csv");
    CHECK(c.output.full_trace_limit == 5);
    CHECK(config_from_json(config_to_json(c)).policy == c.policy);

    const ProblemSpec p = problem_from_json(two_halfspaces());
    const SolverConfig s = c.solver_config(p);
    CHECK(s.schedule.size() == 2);
    CHECK(s.reference_points == p.reference_points);
    CHECK(c.start(p) == Vector{1.0, 2.0});

    const RunConfig d = config_from_json(json::object());
    CHECK(d.start(p) == Vector{0.0, 0.0});
    CHECK(d.policy == LambdaPolicy::max_extrapolation());
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS((config_from_json(json::parse(R"({"schedule": {"kind": "example45", "s": 4}})"))), LoadError);
    CHECK_THROWS_AS((config_from_json(json::parse(R"({"schedule": {"kind": "example45", "s": 3, "seed": 1}})"))),
                    LoadError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"schedule": {"kind": "weekly"}})")), LoadError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"tau1": 0.0})")), LoadError);
    CHECK_THROWS_AS((config_from_json(json::parse(R"({"lambda_policy": {"kind": "fixed", "lambda": 1.5}})"))),
                    LoadError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"max_iterations": "many"})")), LoadError);

    const RunConfig table = config_from_json(json::parse(R"({"schedule": {"kind": "user-table",
        "table": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]}})"));
    const ProblemSpec p = problem_from_json(two_halfspaces());
    CHECK_THROWS_AS((void)table.solver_config(p), ConfigError);
}

TEST_CASE("trace CSV")
{
    const ProblemSpec p = problem_from_json(two_halfspaces());
    RunConfig c = config_from_json(json::parse(R"({"lambda_policy": {"kind": "fixed", "lambda": 1.0},
        "initial_point": [0.3, 1.1], "residual_check_stride": 3})"));
    const SolveResult r = run(p.operators, c.start(p), c.solver_config(p));
    REQUIRE(r.status == SolveStatus::converged);

    std::ostringstream os;
    write_trace_csv(os, r.trace, 1);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "k,lambda,L,residual,step_norm,dist_to_ref_0");
    std::size_t rows = 0;
    std::size_t empty_residuals = 0;
    while (std::getline(is, line))
    {
        ++rows;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (line.back() == ',')
            cells.push_back("");
        REQUIRE(cells.size() == 6);
        empty_residuals += cells[3].empty();
    }
    CHECK(rows == r.trace.size());
    CHECK(empty_residuals > 0);
}

TEST_CASE("floats keep 17 significant digits")
{
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("full trace round-trips through JSON")
{
    const ProblemSpec p = problem_from_json(two_halfspaces());
    RunConfig c = config_from_json(json::parse(R"({"initial_point": [2.5, 0.7]})"));
    const SolveResult r = run(p.operators, c.start(p), c.solver_config(p));
    const json j = json::parse(trace_to_json(r.trace, 1.0, 1.0, p.reference_points).dump());
    const StoredTrace t = trace_from_json(j);
    REQUIRE(t.records.size() == r.trace.size());
    for (std::size_t i = 0; i < t.records.size(); ++i)
    {
        CHECK(t.records[i].x == r.trace[i].x);
        CHECK(t.records[i].lambda == r.trace[i].lambda);
        CHECK(t.records[i].direction == r.trace[i].direction);
    }
    CHECK(fejer_audit(t.records, t.references, t.tau1, t.tau2).passed());
}

TEST_CASE("summary")
{
    SolveResult r;
    r.status = SolveStatus::converged;
    r.iterations = 4;
    r.final_residual = 1e-9;
    r.final_point = Vector{1.0};
    const json s = summary_to_json(r, 1e-8);
    CHECK(s["status"] == "converged");
    CHECK(s["iterations"] == 4);
    CHECK(s["final_residual"].get<double>() <= s["residual_tolerance"].get<double>());
}
