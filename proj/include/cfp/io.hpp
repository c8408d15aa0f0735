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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cfp/operators.hpp"
#include "cfp/solver.hpp"
#include "cfp/weights.hpp"

namespace cfp
{
/// A problem file: operators, optional known common fixed points, metadata.
struct ProblemSpec
{
    std::string name;
    std::optional<std::uint64_t> seed;
    std::size_t dimension = 0;
    CutterFamily operators;
    std::vector<Vector> reference_points;
};

/// Schedule description as written in a run config; m comes from the problem.
struct ScheduleSpec
{
    ScheduleKind kind = ScheduleKind::constant_uniform;
    std::size_t window = 0;  ///< example45 s
    std::optional<std::uint64_t> seed;
    std::vector<std::vector<double>> table;

    [[nodiscard]] WeightSchedule build(std::size_t m) const;
};

struct OutputOptions
{
    std::string trace_path;
    std::size_t full_trace_limit = 100000;
};

struct RunConfig
{
    double tau1 = 1.0;
    double tau2 = 1.0;
    LambdaPolicy policy = LambdaPolicy::max_extrapolation();
    ScheduleSpec schedule;
    std::size_t max_iterations = 100000;
    double residual_tolerance = 1e-8;
    std::size_t residual_check_stride = 0;
    double lambda_cap = kDefaultLambdaCap;
    std::optional<Vector> initial_point;  ///< origin when absent
    OutputOptions output;

    /// Solver settings for the problem, with its reference points attached.
    [[nodiscard]] SolverConfig solver_config(const ProblemSpec& problem) const;
    [[nodiscard]] Vector start(const ProblemSpec& problem) const;
};

/// Tolerance on ||T_i(q) - q|| for reference points accepted on load.
inline constexpr double kReferenceTolerance = 1e-10;

/// Parses and validates; throws LoadError with a descriptive message.
ProblemSpec problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemSpec& spec);
ProblemSpec load_problem(const std::filesystem::path& path);
void save_problem(const std::filesystem::path& path, const ProblemSpec& spec);

CutterPtr cutter_from_json(const nlohmann::json& j, std::size_t dimension);
nlohmann::json cutter_to_json(const Cutter& op);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

/// Header: k,lambda,L,residual,step_norm,dist_to_ref_0,...; floats with 17
/// significant digits; residual is empty where it was not evaluated.
void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace, std::size_t references);

/// Complete records, sufficient to re-run fejer_audit offline.
nlohmann::json trace_to_json(const std::vector<IterationRecord>& trace, double tau1, double tau2,
                             const std::vector<Vector>& references);
struct StoredTrace
{
    double tau1 = 1.0;
    double tau2 = 1.0;
    std::vector<Vector> references;
    std::vector<IterationRecord> records;
};
StoredTrace trace_from_json(const nlohmann::json& j);

nlohmann::json summary_to_json(const SolveResult& result, double tolerance);

/// "%.17g"
std::string format_real(double v);
}  // namespace cfp
