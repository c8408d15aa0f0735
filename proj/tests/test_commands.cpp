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

#include "cfp/commands.hpp"
#include "cfp/instances.hpp"
#include "cfp/io.hpp"
#include "cfp/verify.hpp"

using namespace cfp;

namespace
{
const std::filesystem::path kData = CFP_DATA_DIR;

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "cfp_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}
}  // namespace

TEST_CASE("solve writes the trace and the summary")
{
    const auto out = scratch("two.csv");
    std::ostringstream o, e;
    SolveCommand cmd{(kData / "two_hyperplanes.json").string(), (kData / "extrapolated.json").string(), out.string(),
                     "", scratch("two.full.json").string()};
    CHECK(run_solve(cmd, o, e) == 0);
    CHECK(std::filesystem::exists(out));
    std::ifstream in(out.string() + ".summary.json");
    const nlohmann::json s = nlohmann::json::parse(in);
    CHECK(s["status"] == "converged");
    CHECK(s["final_residual"].get<double>() <= 1e-12);

    VerifyCommand v;
    v.trace = scratch("two.full.json").string();
    std::ostringstream vo;
    CHECK(run_verify(v, vo, e) == 0);
    CHECK(vo.str().find("PASS fejer-audit") != std::string::npos);
}

TEST_CASE("solve fails on a missing file")
{
    std::ostringstream o, e;
    SolveCommand cmd{(kData / "nope.json").string(), (kData / "extrapolated.json").string(),
                     scratch("x.csv").string(), "", ""};
    CHECK(run_solve(cmd, o, e) != 0);
    CHECK_FALSE(e.str().empty());
}

TEST_CASE("verify on the two-hyperplane instance passes")
{
    VerifyCommand v;
    v.problem = (kData / "two_hyperplanes.json").string();
    v.config = (kData / "extrapolated.json").string();
    std::ostringstream o, e;
    CHECK(run_verify(v, o, e) == 0);
    CHECK(o.str().find("FAIL") == std::string::npos);
}

TEST_CASE("verify reports the missing window floor of the remark44 schedule")
{
    VerifyCommand v;
    v.problem = (kData / "two_hyperplanes.json").string();
    v.config = (kData / "remark44.json").string();
    v.options.window = 4;
    v.options.floor = 0.05;
    std::ostringstream o, e;
    CHECK(run_verify(v, o, e) != 0);
    const std::string text = o.str();
    CHECK(text.find("FAIL intermittent-floor") != std::string::npos);
    CHECK(text.find("witness (k=") != std::string::npos);
    CHECK(text.find("PASS fejer-audit") != std::string::npos);
}

TEST_CASE("lambda-hat oracle agreement over 100 seeds")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        InstanceOptions o;
        o.dimension = 2 + seed % 9;
        o.operators = 1 + seed % 10;
        o.geometry = seed % 2 ? Geometry::mixed : Geometry::halfspaces;
        o.seed = seed;
        const Instance inst = generate_instance(o);
        const CheckResult r = check_lambda_routes(inst.ops, 20, seed);
        INFO(r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("verify battery on a sampled problem")
{
    InstanceOptions o;
    o.dimension = 6;
    o.operators = 7;
    o.interior_radius = 0.3;
    o.seed = 12;
    const Instance inst = generate_instance(o);
    ProblemSpec p;
    p.dimension = 6;
    p.operators = inst.ops;
    p.reference_points = inst.references;
    RunConfig c;
    c.schedule.kind = ScheduleKind::example45;
    c.schedule.window = 6;
    c.schedule.seed = 3;
    c.initial_point = inst.start;
    VerifyOptions opts;
    const VerifyReport r = verify_problem(p, c, opts);
    for (const auto& check : r.checks)
    {
        INFO(check.name, ": ", check.detail);
        CHECK(check.passed);
    }
    CHECK(r.find("intermittent-floor") != nullptr);
}

TEST_CASE("bench writes its tables")
{
    BenchCommand b;
    b.seed = 1;
    b.seeds = 3;
    b.dimension = 4;
    b.operators = 4;
    b.out = scratch("bench").string();
    std::ostringstream o, e;
    CHECK(run_bench(b, o, e) == 0);
    CHECK(std::filesystem::exists(b.out + ".csv"));
    CHECK(std::filesystem::exists(b.out + ".md"));
    CHECK(std::filesystem::exists(b.out + "_curves.csv"));
    // Every schedule reaches the tolerance on these feasible instances.
    std::ifstream in(b.out + ".csv");
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line))
    {
        ++rows;
        CHECK(line.find(",converged,") != std::string::npos);
    }
    CHECK(rows == 3 * 2 * 3);

    b.operators = 1;
    b.out = scratch("bench1").string();
    CHECK(run_bench(b, o, e) == 0);
}
