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

#include <vector>

#include "cfp/linalg.hpp"
#include "cfp/operators.hpp"
#include "cfp/weight_vector.hpp"

namespace cfp
{
/// Default ceiling applied to the extrapolation gain and to lambda-hat.
inline constexpr double kDefaultLambdaCap = 1e8;

/// Threshold deciding "x = T_w(x)": 1e-14 * (1 + ||x||).
double fixed_point_threshold(const Vector& x) noexcept;

/// Everything one evaluation of the supported operators at x yields.
struct CombinationReport
{
    Vector t_w;        ///< sum_i w(i) T_i(x)
    Vector direction;  ///< sum_{i in support} w(i) (T_i(x) - x)
    /// ||T_i(x) - x||^2 for each i; NaN for indices outside the support,
    /// which are never evaluated.
    std::vector<double> per_op_displacements;
    double weighted_displacement = 0.0;  ///< sum_i w(i) ||T_i(x) - x||^2
    double combined_displacement = 0.0;  ///< ||direction||^2
    double gain = 1.0;                   ///< L(x, w), capped
    double lambda_hat = 1.0;             ///< lambda-hat over the support, capped; 1 when at_fixed_point
    bool at_fixed_point = false;         ///< ||direction|| <= fixed_point_threshold(x)
    bool capped = false;

    /// max over the support of ||T_i(x) - x||.
    [[nodiscard]] double block_residual() const;
};

/// Evaluates the operators in support(w) once at x and derives every
/// combination quantity from those evaluations.
CombinationReport combine(const CutterFamily& ops, const WeightVector& w, const Vector& x,
                          double lambda_cap = kDefaultLambdaCap);

/// T_w(x) = sum_i w(i) T_i(x). Operators with zero weight are not evaluated.
Vector apply_tw(const CutterFamily& ops, const WeightVector& w, const Vector& x);

/// L(x, w); exactly 1 when ||T_w(x) - x|| <= fixed_point_threshold(x).
double gain(const CutterFamily& ops, const WeightVector& w, const Vector& x,
            double lambda_cap = kDefaultLambdaCap);

/// T_{w,lambda}(x) = x + lambda (T_w(x) - x).
Vector apply_relaxed(const CutterFamily& ops, const WeightVector& w, double lambda, const Vector& x);

/// sum w(i) ||T_i(x) - x||^2 / ||sum w(i) (T_i(x) - x)||^2 over the support.
/// Throws AtFixedPointError when the denominator falls below
/// fixed_point_threshold(x)^2.
double lambda_hat(const CutterFamily& ops, const WeightVector& w, const Vector& x,
                  double lambda_cap = kDefaultLambdaCap);
}  // namespace cfp
