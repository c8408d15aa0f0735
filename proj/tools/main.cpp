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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cfp/commands.hpp"
#include "cfp/errors.hpp"

namespace
{
// "fixed", "fixed:<lambda>", "max-extrapolation", "fraction:<gamma>".
cfp::LambdaPolicy parse_policy(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const bool has_value = colon != std::string::npos;
    const double value = has_value ? std::stod(text.substr(colon + 1)) : 1.0;
    if (name == "fixed")
        return cfp::LambdaPolicy::fixed(value);
    if (name == "max-extrapolation" && !has_value)
        return cfp::LambdaPolicy::max_extrapolation();
    if (name == "fraction" && has_value)
        return cfp::LambdaPolicy::fraction(value);
    throw cfp::ConfigError("unknown lambda policy '" + text + "'");
}

cfp::ScheduleKind parse_schedule(const std::string& text)
{
    using cfp::ScheduleKind;
    for (auto k : {ScheduleKind::constant_uniform, ScheduleKind::cyclic_singleton, ScheduleKind::example45,
                   ScheduleKind::example46, ScheduleKind::remark44_counterexample})
        if (cfp::to_string(k) == text)
            return k;
    throw cfp::ConfigError("unknown schedule '" + text + "'");
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Extrapolated block-iterative common fixed point solver"};
    app.require_subcommand(1);

    cfp::SolveCommand solve;
    auto* solve_cmd = app.add_subcommand("solve", "Run the solver and write a trace");
    solve_cmd->add_option("--problem", solve.problem, "Problem JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--config", solve.config, "Run config JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--out", solve.out, "Trace CSV (defaults to output.trace in the config)");
    solve_cmd->add_option("--summary", solve.summary, "Summary JSON (defaults to <out>.summary.json)");
    solve_cmd->add_option("--full-trace", solve.full_trace, "Complete JSON trace for verify --trace");

    cfp::VerifyCommand verify;
    std::optional<std::size_t> window;
    std::optional<double> alpha;
    auto* verify_cmd = app.add_subcommand("verify", "Run the property battery");
    verify_cmd->add_option("--problem", verify.problem, "Problem JSON");
    verify_cmd->add_option("--config", verify.config, "Run config JSON");
    verify_cmd->add_option("--trace", verify.trace, "Full JSON trace written by solve --full-trace");
    verify_cmd->add_option("--seed", verify.options.seed, "Sampling seed");
    verify_cmd->add_option("--samples", verify.options.samples, "Random samples per check");
    verify_cmd->add_option("--horizon", verify.options.horizon, "Horizon for the weight-condition checks");
    verify_cmd->add_option("--window", window, "Intermittent window s*");
    verify_cmd->add_option("--alpha", alpha, "Intermittent floor");

    cfp::BenchCommand bench;
    std::string geometry = "halfspaces";
    std::vector<std::string> policies{"fixed:1", "max-extrapolation"};
    std::vector<std::string> schedules{"constant-uniform", "cyclic-singleton", "example46"};
    auto* bench_cmd = app.add_subcommand("bench", "Compare policies and schedules on generated instances");
    bench_cmd->add_option("--seed", bench.seed, "First instance seed")->required();
    bench_cmd->add_option("--seeds", bench.seeds, "Number of instances");
    bench_cmd->add_option("--dimension", bench.dimension, "Space dimension");
    bench_cmd->add_option("--operators", bench.operators, "Operators per instance");
    bench_cmd->add_option("--geometry", geometry, "halfspaces or mixed");
    bench_cmd->add_option("--interior-radius", bench.interior_radius, "Radius of a ball inside every set");
    bench_cmd->add_option("--tau1", bench.tau1);
    bench_cmd->add_option("--tau2", bench.tau2);
    bench_cmd->add_option("--max-iterations", bench.max_iterations);
    bench_cmd->add_option("--tolerance", bench.residual_tolerance);
    bench_cmd->add_option("--policies", policies, "fixed[:lambda], max-extrapolation, fraction:gamma");
    bench_cmd->add_option("--schedules", schedules, "Schedule kinds");
    bench_cmd->add_option("--window", bench.example45_window, "example45 window s");
    bench_cmd->add_option("--out", bench.out, "Output prefix");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (*solve_cmd)
            return cfp::run_solve(solve, std::cout, std::cerr);
        if (*verify_cmd)
        {
            verify.options.window = window;
            verify.options.floor = alpha;
            return cfp::run_verify(verify, std::cout, std::cerr);
        }
        bench.geometry = cfp::geometry_from_string(geometry);
        bench.policies.clear();
        for (const auto& p : policies)
            bench.policies.push_back(parse_policy(p));
        bench.schedules.clear();
        for (const auto& s : schedules)
            bench.schedules.push_back(parse_schedule(s));
        return cfp::run_bench(bench, std::cout, std::cerr);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
