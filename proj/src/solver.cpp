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

#include "cfp/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "cfp/errors.hpp"

namespace cfp
{
std::string_view to_string(LambdaPolicy::Kind kind) noexcept
{
    switch (kind)
    {
    case LambdaPolicy::Kind::fixed: return "fixed";
    case LambdaPolicy::Kind::max_extrapolation: return "max-extrapolation";
    case LambdaPolicy::Kind::fraction: return "fraction";
    }
    return "unknown";
}

std::string_view to_string(SolveStatus status) noexcept
{
    switch (status)
    {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::error: return "error";
    }
    return "unknown";
}

std::string_view to_string(FejerCheck check) noexcept
{
    switch (check)
    {
    case FejerCheck::monotone: return "fejer-monotone";
    case FejerCheck::weighted_decrease: return "weighted-decrease";
    case FejerCheck::step_decrease: return "step-decrease";
    case FejerCheck::step_summability: return "step-summability";
    case FejerCheck::lambda_interval: return "lambda-interval";
    case FejerCheck::continuity: return "continuity";
    }
    return "unknown";
}

void SolverConfig::validate(std::size_t m) const
{
    auto in_unit = [](double t) { return std::isfinite(t) && t > 0.0 && t <= 1.0; };
    if (!in_unit(tau1) || !in_unit(tau2))
        throw ConfigError(fmt::format("tau1 = {} and tau2 = {} must lie in (0, 1]", tau1, tau2));
    switch (policy.kind)
    {
    case LambdaPolicy::Kind::fixed:
        if (!(policy.value >= tau1 && policy.value <= 2.0 - tau2))
            throw ConfigError(fmt::format("fixed lambda {} outside [{}, {}]", policy.value, tau1, 2.0 - tau2));
        break;
    case LambdaPolicy::Kind::fraction:
        if (!in_unit(policy.value))
            throw ConfigError(fmt::format("fraction gamma = {} must lie in (0, 1]", policy.value));
        break;
    case LambdaPolicy::Kind::max_extrapolation: break;
    }
    if (!(residual_tolerance > 0.0) || !std::isfinite(residual_tolerance))
        throw ConfigError("residual tolerance must be positive");
    if (!(lambda_cap >= 1.0))
        throw ConfigError("lambda cap must be at least 1");
    if (schedule.size() != m)
        throw ConfigError(fmt::format("schedule is for {} operators, problem has {}", schedule.size(), m));
}

double choose_lambda(const LambdaPolicy& policy, double tau1, double tau2, double gain)
{
    switch (policy.kind)
    {
    case LambdaPolicy::Kind::fixed: return policy.value;
    case LambdaPolicy::Kind::max_extrapolation: return (2.0 - tau2) * gain;
    case LambdaPolicy::Kind::fraction: return std::max(tau1, policy.value * (2.0 - tau2) * gain);
    }
    return policy.value;
}

bool lambda_admissible(double lambda, double tau1, double tau2, double gain) noexcept
{
    constexpr double rel = 1e-12;
    return std::isfinite(lambda) && lambda >= tau1 * (1.0 - rel) &&
           lambda <= (2.0 - tau2) * gain * (1.0 + rel);
}

Vector step(const CutterFamily& ops, const Vector& x, const WeightVector& w, double lambda, double tau1,
            double tau2, double lambda_cap)
{
    const CombinationReport report = combine(ops, w, x, lambda_cap);
    if (!lambda_admissible(lambda, tau1, tau2, report.gain))
        throw ConfigError(fmt::format("lambda = {} outside the admissible interval [{}, {}]", lambda, tau1,
                                      (2.0 - tau2) * report.gain));
    Vector next = x;
    if (!report.at_fixed_point)
        axpy(lambda, report.direction, next);
    return next;
}

bool retain_record(std::size_t k, std::size_t full_trace_limit) noexcept
{
    if (full_trace_limit == 0 || k < full_trace_limit)
        return true;
    // Octave p covers [2^p L, 2^{p+1} L) and keeps every 2^{p+1}-th record.
    const std::size_t octave = std::bit_width(k / full_trace_limit) - 1;
    const std::size_t stride = std::size_t{2} << octave;
    return k % stride == 0;
}

namespace
{
/// Full-family residual reusing the block evaluations already in report.
double family_residual(const CutterFamily& ops, const CombinationReport& report, const Vector& x)
{
    double r = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i)
    {
        const double d = report.per_op_displacements[i];
        r = std::max(r, std::isnan(d) ? fixed_point_residual(*ops[i], x) : std::sqrt(d));
    }
    return r;
}
}  // namespace

SolveResult run(const CutterFamily& ops, const Vector& x0, const SolverConfig& config)
{
    const std::size_t n = family_dimension(ops);
    const std::size_t m = ops.size();
    config.validate(m);
    if (x0.size() != n)
        throw DimensionError(fmt::format("initial point has dimension {}, operators {}", x0.size(), n));
    for (const auto& q : config.reference_points)
        require_same_dimension(q, x0);

    const std::size_t stride = config.residual_check_stride == 0 ? std::max<std::size_t>(1, m)
                                                                 : config.residual_check_stride;

    SolveResult result;
    Vector x = x0;
    double cumulative = 0.0;

    auto distances = [&](const Vector& p) {
        std::vector<double> d;
        d.reserve(config.reference_points.size());
        for (const auto& q : config.reference_points)
            d.push_back(distance(p, q));
        return d;
    };

    try
    {
        for (std::size_t k = 0;; ++k)
        {
            if (k == config.max_iterations)
            {
                result.status = SolveStatus::max_iterations;
                result.iterations = k;
                result.final_residual = max_residual(ops, x);
                if (result.final_residual <= config.residual_tolerance)
                    result.status = SolveStatus::converged;
                break;
            }

            const WeightVector w = config.schedule.at(k);
            const CombinationReport report = combine(ops, w, x, config.lambda_cap);

            std::optional<double> residual;
            if (k % stride == 0 || report.block_residual() <= config.residual_tolerance)
            {
                residual = family_residual(ops, report, x);
                if (*residual <= config.residual_tolerance)
                {
                    result.status = SolveStatus::converged;
                    result.iterations = k;
                    result.final_residual = *residual;
                    break;
                }
            }

            const double lambda = choose_lambda(config.policy, config.tau1, config.tau2, report.gain);
            if (!lambda_admissible(lambda, config.tau1, config.tau2, report.gain))
                throw ConfigError(fmt::format("k = {}: lambda = {} outside [{}, {}]", k, lambda, config.tau1,
                                              (2.0 - config.tau2) * report.gain));

            // A solved block leaves the iterate in place; the schedule moves on.
            Vector direction = report.at_fixed_point ? Vector(n, 0.0) : report.direction;
            Vector next = x;
            axpy(lambda, direction, next);
            if (!all_finite(next))
                throw EvaluationError(fmt::format("k = {}: iterate became non-finite", k));
            const double step_norm = distance(next, x);
            cumulative += step_norm * step_norm;

            if (config.record_trace)
            {
                IterationRecord rec;
                rec.k = k;
                rec.x = x;
                rec.weights = w;
                rec.block = w.support();
                rec.gain = report.gain;
                rec.lambda = lambda;
                rec.direction = std::move(direction);
                rec.weighted_displacement = report.weighted_displacement;
                rec.residual = residual;
                rec.step_norm = step_norm;
                rec.cumulative_step_sq = cumulative;
                rec.distances_to_refs = distances(x);
                // A tail record that thinning would drop is provisional: it
                // only keeps the latest step visible.
                if (!result.trace.empty() && !retain_record(result.trace.back().k, config.full_trace_limit))
                    result.trace.back() = std::move(rec);
                else
                    result.trace.push_back(std::move(rec));
            }
            x = std::move(next);
        }
    }
    catch (const Error& e)
    {
        result.status = SolveStatus::error;
        result.message = e.what();
        result.iterations = result.trace.empty() ? 0 : result.trace.back().k + 1;
    }
    result.final_point = x;
    return result;
}

FejerAudit fejer_audit(const std::vector<IterationRecord>& trace, const std::vector<Vector>& refs,
                       double tau1, double tau2)
{
    constexpr double kSlack = 1e-10;
    constexpr double kSumSlack = 1e-8;

    FejerAudit audit;
    audit.references = refs.size();
    const bool has_origin = !trace.empty() && trace.front().k == 0;

    for (std::size_t j = 0; j < trace.size(); ++j)
    {
        const IterationRecord& rec = trace[j];
        Vector next = rec.x;
        axpy(rec.lambda, rec.direction, next);
        const double step_sq = squared_distance(next, rec.x);
        ++audit.steps_checked;

        auto flag = [&](std::size_t ref, FejerCheck check, double lhs, double rhs) {
            audit.violations.push_back(FejerViolation{rec.k, ref, check, lhs, rhs});
        };

        if (!lambda_admissible(rec.lambda, tau1, tau2, rec.gain))
            flag(0, FejerCheck::lambda_interval, rec.lambda, (2.0 - tau2) * rec.gain);

        if (j + 1 < trace.size() && trace[j + 1].k == rec.k + 1)
        {
            const double gap = distance(next, trace[j + 1].x);
            if (gap > 1e-12 * (1.0 + norm(next)))
                flag(0, FejerCheck::continuity, gap, 0.0);
        }

        for (std::size_t r = 0; r < refs.size(); ++r)
        {
            const Vector& q = refs[r];
            const double before_sq = squared_distance(rec.x, q);
            const double after_sq = squared_distance(next, q);

            if (std::sqrt(after_sq) > std::sqrt(before_sq) + kSlack)
                flag(r, FejerCheck::monotone, std::sqrt(after_sq), std::sqrt(before_sq));

            const double weighted_rhs = before_sq - tau1 * tau2 * rec.weighted_displacement;
            if (after_sq > weighted_rhs + kSlack)
                flag(r, FejerCheck::weighted_decrease, after_sq, weighted_rhs);

            const double step_rhs = before_sq - tau2 * step_sq;
            if (after_sq > step_rhs + kSlack)
                flag(r, FejerCheck::step_decrease, after_sq, step_rhs);

            if (has_origin)
            {
                const double bound = squared_distance(trace.front().x, q) / tau2;
                if (rec.cumulative_step_sq > bound + kSumSlack)
                    flag(r, FejerCheck::step_summability, rec.cumulative_step_sq, bound);
            }
        }
    }
    return audit;
}
}  // namespace cfp
