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

#include "cfp/combine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cfp/errors.hpp"

namespace cfp
{
namespace
{
void require_shapes(const CutterFamily& ops, const WeightVector& w, const Vector& x)
{
    if (ops.size() != w.size())
        throw DimensionError(fmt::format("{} operators but {} weights", ops.size(), w.size()));
    if (family_dimension(ops) != x.size())
        throw DimensionError(
            fmt::format("point of dimension {} for operators of dimension {}", x.size(), ops.front()->dimension()));
}
}  // namespace

double fixed_point_threshold(const Vector& x) noexcept { return 1e-14 * (1.0 + norm(x)); }

double CombinationReport::block_residual() const
{
    double r = 0.0;
    for (double d : per_op_displacements)
        if (!std::isnan(d))
            r = std::max(r, d);
    return std::sqrt(r);
}

CombinationReport combine(const CutterFamily& ops, const WeightVector& w, const Vector& x, double lambda_cap)
{
    require_shapes(ops, w, x);
    const std::size_t n = x.size();

    CombinationReport report;
    report.t_w = Vector(n, 0.0);
    report.direction = Vector(n, 0.0);
    report.per_op_displacements.assign(ops.size(), std::numeric_limits<double>::quiet_NaN());

    // Index order keeps the accumulation bit-stable.
    for (std::size_t i = 0; i < ops.size(); ++i)
    {
        if (!(w[i] > 0.0))
            continue;
        const Vector ti = ops[i]->evaluate(x);
        const Vector di = ti - x;
        const double dd = squared_norm(di);
        report.per_op_displacements[i] = dd;
        report.weighted_displacement += w[i] * dd;
        axpy(w[i], ti, report.t_w);
        axpy(w[i], di, report.direction);
    }
    report.combined_displacement = squared_norm(report.direction);

    const double eps = fixed_point_threshold(x);
    if (std::sqrt(report.combined_displacement) <= eps)
    {
        report.at_fixed_point = true;
        report.gain = 1.0;
        report.lambda_hat = 1.0;
        return report;
    }
    double ratio = report.weighted_displacement / report.combined_displacement;
    if (ratio > lambda_cap)
    {
        ratio = lambda_cap;
        report.capped = true;
    }
    report.gain = ratio;
    report.lambda_hat = ratio;
    return report;
}

Vector apply_tw(const CutterFamily& ops, const WeightVector& w, const Vector& x)
{
    require_shapes(ops, w, x);
    Vector y(x.size(), 0.0);
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (w[i] > 0.0)
            axpy(w[i], ops[i]->evaluate(x), y);
    return y;
}

double gain(const CutterFamily& ops, const WeightVector& w, const Vector& x, double lambda_cap)
{
    return combine(ops, w, x, lambda_cap).gain;
}

Vector apply_relaxed(const CutterFamily& ops, const WeightVector& w, double lambda, const Vector& x)
{
    if (!std::isfinite(lambda))
        throw ConfigError("relaxation parameter must be finite");
    if (lambda == 0.0)
    {
        require_shapes(ops, w, x);
        return x;
    }
    const CombinationReport report = combine(ops, w, x);
    Vector y = x;
    axpy(lambda, report.direction, y);
    return y;
}

double lambda_hat(const CutterFamily& ops, const WeightVector& w, const Vector& x, double lambda_cap)
{
    const CombinationReport report = combine(ops, w, x, lambda_cap);
    const double eps = fixed_point_threshold(x);
    if (report.combined_displacement < eps * eps)
        throw AtFixedPointError();
    return report.lambda_hat;
}
}  // namespace cfp
