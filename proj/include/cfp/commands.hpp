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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cfp/instances.hpp"
#include "cfp/solver.hpp"
#include "cfp/verify.hpp"

namespace cfp
{
struct SolveCommand
{
    std::string problem;
    std::string config;
    std::string out;           ///< trace CSV; the config's output.trace when empty
    std::string summary;       ///< defaults to out + ".summary.json"
    std::string full_trace;    ///< optional JSON trace readable by verify --trace
};

struct VerifyCommand
{
    std::string problem;
    std::string config;
    std::string trace;  ///< stored full trace; replaces problem/config when set
    VerifyOptions options;
};

struct BenchCommand
{
    std::uint64_t seed = 0;
    std::size_t seeds = 20;
    std::size_t dimension = 10;
    std::size_t operators = 8;
    Geometry geometry = Geometry::halfspaces;
    double interior_radius = 0.0;
    double tau1 = 1.0;
    double tau2 = 1.0;
    std::size_t max_iterations = 100000;
    double residual_tolerance = 1e-8;
    std::vector<LambdaPolicy> policies{LambdaPolicy::fixed(1.0), LambdaPolicy::max_extrapolation()};
    std::vector<ScheduleKind> schedules{ScheduleKind::constant_uniform, ScheduleKind::cyclic_singleton,
                                        ScheduleKind::example46};
    std::size_t example45_window = 4;
    std::string out = "bench";  ///< prefix for .csv, _curves.csv and .md
};

/// Each returns the process exit status; diagnostics go to err.
int run_solve(const SolveCommand& cmd, std::ostream& out, std::ostream& err);
int run_verify(const VerifyCommand& cmd, std::ostream& out, std::ostream& err);
int run_bench(const BenchCommand& cmd, std::ostream& out, std::ostream& err);

std::string policy_label(const LambdaPolicy& policy);
}  // namespace cfp
