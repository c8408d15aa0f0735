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

#include "cfp/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "cfp/errors.hpp"
#include "cfp/io.hpp"

namespace cfp
{
namespace
{
std::ofstream open_output(const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw LoadError(fmt::format("cannot write '{}'", path));
    return os;
}

WeightSchedule bench_schedule(ScheduleKind kind, std::size_t m, std::size_t window, std::uint64_t seed)
{
    switch (kind)
    {
    case ScheduleKind::constant_uniform: return WeightSchedule::constant_uniform(m);
    case ScheduleKind::cyclic_singleton: return WeightSchedule::cyclic_singleton(m);
    case ScheduleKind::example45: return WeightSchedule::example45(m, window, seed);
    case ScheduleKind::example46: return WeightSchedule::example46(m);
    case ScheduleKind::remark44_counterexample: return WeightSchedule::remark44_counterexample(m);
    case ScheduleKind::user_table: break;
    }
    throw ConfigError("bench does not support user-table schedules");
}

struct BenchRow
{
    std::uint64_t seed;
    std::string policy;
    std::string schedule;
    SolveStatus status;
    std::size_t iterations;
    double final_residual;
};
}  // namespace

std::string policy_label(const LambdaPolicy& policy)
{
    switch (policy.kind)
    {
    case LambdaPolicy::Kind::fixed: return fmt::format("fixed({})", policy.value);
    case LambdaPolicy::Kind::max_extrapolation: return "max-extrapolation";
    case LambdaPolicy::Kind::fraction: return fmt::format("fraction({})", policy.value);
    }
    return "unknown";
}

int run_solve(const SolveCommand& cmd, std::ostream& out, std::ostream& err)
{
    try
    {
        const ProblemSpec problem = load_problem(cmd.problem);
        const RunConfig config = load_config(cmd.config);
        const std::string trace_path = cmd.out.empty() ? config.output.trace_path : cmd.out;
        if (trace_path.empty())
            throw ConfigError("no trace path: pass --out or set output.trace in the config");

        const SolverConfig solver = config.solver_config(problem);
        const SolveResult result = run(problem.operators, config.start(problem), solver);

        {
            std::ofstream csv = open_output(trace_path);
            write_trace_csv(csv, result.trace, problem.reference_points.size());
        }
        {
            std::ofstream summary = open_output(cmd.summary.empty() ? trace_path + ".summary.json" : cmd.summary);
            summary << summary_to_json(result, solver.residual_tolerance).dump(2) << '\n';
        }
        if (!cmd.full_trace.empty())
        {
            std::ofstream full = open_output(cmd.full_trace);
            full << trace_to_json(result.trace, solver.tau1, solver.tau2, problem.reference_points).dump() << '\n';
        }

        out << fmt::format("{}: {} after {} iterations, residual {:.3e}\n",
                           problem.name.empty() ? cmd.problem : problem.name, to_string(result.status),
                           result.iterations, result.final_residual);
        switch (result.status)
        {
        case SolveStatus::converged: return 0;
        case SolveStatus::max_iterations: return 2;
        case SolveStatus::error: err << "error: " << result.message << '\n'; return 1;
        }
        return 1;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_verify(const VerifyCommand& cmd, std::ostream& out, std::ostream& err)
{
    try
    {
        VerifyReport report;
        if (!cmd.trace.empty())
        {
            std::ifstream in(cmd.trace);
            if (!in)
                throw LoadError(fmt::format("cannot open trace file '{}'", cmd.trace));
            nlohmann::json j;
            try
            {
                j = nlohmann::json::parse(in);
            }
            catch (const nlohmann::json::exception& e)
            {
                throw LoadError(fmt::format("trace file '{}' is not valid JSON: {}", cmd.trace, e.what()));
            }
            report = verify_trace(trace_from_json(j));
        }
        else
        {
            if (cmd.problem.empty() || cmd.config.empty())
                throw ConfigError("verify needs --problem and --config, or --trace");
            report = verify_problem(load_problem(cmd.problem), load_config(cmd.config), cmd.options);
        }
        print_report(out, report);
        return report.passed() ? 0 : 1;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_bench(const BenchCommand& cmd, std::ostream& out, std::ostream& err)
{
    try
    {
        if (cmd.seeds == 0)
            throw ConfigError("bench needs at least one seed");
        std::vector<BenchRow> rows;
        std::ofstream curves = open_output(cmd.out + "_curves.csv");
        curves << "seed,policy,schedule,k,residual\n";

        for (std::size_t s = 0; s < cmd.seeds; ++s)
        {
            InstanceOptions io;
            io.dimension = cmd.dimension;
            io.operators = cmd.operators;
            io.geometry = cmd.geometry;
            io.interior_radius = cmd.interior_radius;
            io.seed = cmd.seed + s;
            const Instance inst = generate_instance(io);
            const std::size_t m = inst.ops.size();

            for (const auto& policy : cmd.policies)
                for (ScheduleKind kind : cmd.schedules)
                {
                    const bool needs_many = kind == ScheduleKind::example45 || kind == ScheduleKind::example46 ||
                                            kind == ScheduleKind::remark44_counterexample;
                    if (needs_many && m < 2)
                        continue;
                    SolverConfig config;
                    config.tau1 = cmd.tau1;
                    config.tau2 = cmd.tau2;
                    config.policy = policy;
                    config.schedule = bench_schedule(kind, m, cmd.example45_window, io.seed);
                    config.max_iterations = cmd.max_iterations;
                    config.residual_tolerance = cmd.residual_tolerance;
                    config.full_trace_limit = 64;
                    config.validate(m);
                    const SolveResult result = run(inst.ops, inst.start, config);

                    const std::string label = policy_label(policy);
                    const std::string sched(to_string(kind));
                    rows.push_back(BenchRow{io.seed, label, sched, result.status, result.iterations,
                                            result.final_residual});
                    for (const auto& rec : result.trace)
                        if (rec.residual)
                            curves << fmt::format("{},{},{},{},{}\n", io.seed, label, sched, rec.k,
                                                  format_real(*rec.residual));
                }
        }

        {
            std::ofstream csv = open_output(cmd.out + ".csv");
            csv << "seed,policy,schedule,status,iterations,final_residual\n";
            for (const auto& r : rows)
                csv << fmt::format("{},{},{},{},{},{}\n", r.seed, r.policy, r.schedule, to_string(r.status),
                                   r.iterations, format_real(r.final_residual));
        }

        // Aggregate per (policy, schedule) in first-seen order.
        std::vector<std::pair<std::string, std::string>> keys;
        std::map<std::pair<std::string, std::string>, std::vector<const BenchRow*>> groups;
        for (const auto& r : rows)
        {
            auto key = std::make_pair(r.policy, r.schedule);
            if (!groups.count(key))
                keys.push_back(key);
            groups[key].push_back(&r);
        }

        std::string table = fmt::format(
            "# Bench\n\n{} seeds from {}, n={}, m={}, geometry {}, tau1={}, tau2={}, tolerance {:.1e}\n\n"
            "| policy | schedule | runs | converged | mean iterations | median iterations | max final residual |\n"
            "|---|---|---|---|---|---|---|\n",
            cmd.seeds, cmd.seed, cmd.dimension, cmd.operators, to_string(cmd.geometry), cmd.tau1, cmd.tau2,
            cmd.residual_tolerance);
        for (const auto& key : keys)
        {
            const auto& g = groups[key];
            std::vector<std::size_t> its;
            std::size_t converged = 0;
            double worst = 0.0;
            for (const BenchRow* r : g)
            {
                its.push_back(r->iterations);
                converged += r->status == SolveStatus::converged;
                worst = std::max(worst, r->final_residual);
            }
            std::sort(its.begin(), its.end());
            double mean = 0.0;
            for (auto v : its)
                mean += static_cast<double>(v);
            mean /= static_cast<double>(its.size());
            const double median = its.size() % 2 ? static_cast<double>(its[its.size() / 2])
                                                 : 0.5 * static_cast<double>(its[its.size() / 2 - 1] + its[its.size() / 2]);
            table += fmt::format("| {} | {} | {} | {} | {:.1f} | {:.1f} | {:.3e} |\n", key.first, key.second,
                                 g.size(), converged, mean, median, worst);
        }
        {
            std::ofstream md = open_output(cmd.out + ".md");
            md << table;
        }
        out << table;
        return 0;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}
}  // namespace cfp
