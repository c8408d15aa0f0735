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

#include "cfp/io.hpp"

namespace cfp
{
struct CheckResult
{
    std::string name;
    bool passed = true;
    std::string detail;
};

struct VerifyReport
{
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] const CheckResult* find(std::string_view name) const noexcept;
};

struct VerifyOptions
{
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    /// Horizon for the weight-condition checks.
    std::size_t horizon = 1000;
    /// Intermittent window and floor; default to the schedule's own
    /// guarantee, or (m, 1/(2m)) when it has none.
    std::optional<std::size_t> window;
    std::optional<double> floor;
};

/// Property battery on a problem and run config: cutter inequality, the two
/// lambda-hat routes, the diagonal point b_w, half-space nesting and the
/// inclusion chain, a solver run with a Fejer audit, and the weight
/// conditions of the configured schedule.
VerifyReport verify_problem(const ProblemSpec& problem, const RunConfig& config, const VerifyOptions& options);

/// Fejer audit of a stored full trace.
VerifyReport verify_trace(const StoredTrace& trace);

/// Individual checks, exposed for tests.
CheckResult check_cutter_axiom(const CutterFamily& ops, const std::vector<Vector>& refs, std::size_t samples,
                               std::uint64_t seed, double tolerance = 1e-12);
CheckResult check_lambda_routes(const CutterFamily& ops, std::size_t samples, std::uint64_t seed,
                                double tolerance = 1e-10);
CheckResult check_diagonal_point(const CutterFamily& ops, std::size_t samples, std::uint64_t seed);
CheckResult check_nesting(const CutterFamily& ops, const std::vector<Vector>& refs, std::size_t samples,
                          std::uint64_t seed, double slack = 1e-10);
CheckResult check_intermittent(const WeightSchedule& schedule, std::size_t horizon, std::size_t window,
                               double floor);
CheckResult check_divergent_sums(const WeightSchedule& schedule, std::size_t horizon);
CheckResult check_fejer(const FejerAudit& audit);

/// "PASS name: detail" / "FAIL name: detail", one line per check.
void print_report(std::ostream& os, const VerifyReport& report);
}  // namespace cfp
