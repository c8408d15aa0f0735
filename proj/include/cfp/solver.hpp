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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfp/combine.hpp"
#include "cfp/linalg.hpp"
#include "cfp/operators.hpp"
#include "cfp/weights.hpp"

namespace cfp
{
/// How lambda_k is chosen inside [tau1, (2 - tau2) L_k].
struct LambdaPolicy
{
    enum class Kind
    {
        fixed,              ///< constant in [tau1, 2 - tau2]
        max_extrapolation,  ///< (2 - tau2) L_k
        fraction,           ///< max(tau1, gamma (2 - tau2) L_k), gamma in (0, 1]
    };

    Kind kind = Kind::max_extrapolation;
    double value = 1.0;  ///< lambda for fixed, gamma for fraction

    static LambdaPolicy fixed(double lambda) { return {Kind::fixed, lambda}; }
    static LambdaPolicy max_extrapolation() { return {Kind::max_extrapolation, 1.0}; }
    static LambdaPolicy fraction(double gamma) { return {Kind::fraction, gamma}; }

    friend bool operator==(const LambdaPolicy&, const LambdaPolicy&) = default;
};

std::string_view to_string(LambdaPolicy::Kind kind) noexcept;

struct SolverConfig
{
    double tau1 = 1.0;
    double tau2 = 1.0;
    LambdaPolicy policy = LambdaPolicy::max_extrapolation();
    WeightSchedule schedule = WeightSchedule::constant_uniform(1);
    std::size_t max_iterations = 100000;
    double residual_tolerance = 1e-8;
    /// Full-family residual is evaluated every this many iterations
    /// (0 means max(1, m)), and additionally whenever the block residual
    /// already meets the tolerance.
    std::size_t residual_check_stride = 0;
    double lambda_cap = kDefaultLambdaCap;
    std::vector<Vector> reference_points;
    /// Records kept verbatim before geometric thinning starts.
    std::size_t full_trace_limit = 100000;
    bool record_trace = true;

    /// Throws ConfigError on tau, lambda, tolerance or schedule violations.
    void validate(std::size_t m) const;
};

/// One iteration k -> k+1. The record is self-contained: x_{k+1} is
/// x_k + lambda * direction, so an audit can check the step even after
/// thinning has dropped its neighbours.
struct IterationRecord
{
    std::size_t k = 0;
    Vector x;
    WeightVector weights;
    std::vector<std::size_t> block;
    double gain = 1.0;
    double lambda = 1.0;
    Vector direction;                    ///< sum_{i in block} w(i) (T_i(x) - x); zero on a degenerate step
    double weighted_displacement = 0.0;  ///< sum_i w(i) ||T_i(x) - x||^2
    std::optional<double> residual;      ///< max_i ||T_i(x) - x|| when evaluated at this k
    double step_norm = 0.0;
    double cumulative_step_sq = 0.0;     ///< sum_{j <= k} ||x_{j+1} - x_j||^2
    std::vector<double> distances_to_refs;
};

enum class SolveStatus
{
    converged,
    max_iterations,
    error,
};

std::string_view to_string(SolveStatus status) noexcept;

struct SolveResult
{
    SolveStatus status = SolveStatus::max_iterations;
    Vector final_point;
    std::size_t iterations = 0;  ///< number of steps taken
    double final_residual = 0.0;
    std::vector<IterationRecord> trace;
    std::string message;
};

/// lambda for the policy; always inside [tau1, (2 - tau2) L].
double choose_lambda(const LambdaPolicy& policy, double tau1, double tau2, double gain);

/// True when tau1 <= lambda <= (2 - tau2) gain, up to relative rounding.
bool lambda_admissible(double lambda, double tau1, double tau2, double gain) noexcept;

/// x + lambda (T_w(x) - x). Throws ConfigError if lambda is not admissible.
Vector step(const CutterFamily& ops, const Vector& x, const WeightVector& w, double lambda, double tau1,
            double tau2, double lambda_cap = kDefaultLambdaCap);

/// Iterates until the full-family residual meets the tolerance or
/// max_iterations steps have been taken. Evaluation failures end the run
/// with status error and the partial trace.
SolveResult run(const CutterFamily& ops, const Vector& x0, const SolverConfig& config);

/// Whether the record for iteration k is retained under geometric thinning.
bool retain_record(std::size_t k, std::size_t full_trace_limit) noexcept;

enum class FejerCheck
{
    monotone,             ///< ||x_{k+1} - q|| <= ||x_k - q|| + 1e-10
    weighted_decrease,    ///< ||x_{k+1} - q||^2 <= ||x_k - q||^2 - tau1 tau2 sum w ||T_i x - x||^2 + 1e-10
    step_decrease,        ///< ||x_{k+1} - q||^2 <= ||x_k - q||^2 - tau2 ||x_{k+1} - x_k||^2 + 1e-10
    step_summability,     ///< sum_{j<=k} ||x_{j+1} - x_j||^2 <= ||x_0 - q||^2 / tau2 + 1e-8
    lambda_interval,      ///< tau1 <= lambda_k <= (2 - tau2) L_k
    continuity,           ///< consecutive records agree with x_k + lambda_k d_k
};

std::string_view to_string(FejerCheck check) noexcept;

struct FejerViolation
{
    std::size_t k = 0;
    std::size_t ref_index = 0;
    FejerCheck check = FejerCheck::monotone;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct FejerAudit
{
    std::size_t steps_checked = 0;
    std::size_t references = 0;
    std::vector<FejerViolation> violations;

    [[nodiscard]] bool passed() const noexcept { return violations.empty(); }
    [[nodiscard]] const FejerViolation* first() const noexcept
    {
        return violations.empty() ? nullptr : &violations.front();
    }
};

/// Checks each recorded step against every reference point (assumed to lie
/// in the common fixed point set).
FejerAudit fejer_audit(const std::vector<IterationRecord>& trace, const std::vector<Vector>& refs,
                       double tau1, double tau2);
}  // namespace cfp
