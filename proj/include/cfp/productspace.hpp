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
#include <vector>

#include "cfp/linalg.hpp"
#include "cfp/operators.hpp"
#include "cfp/weight_vector.hpp"

// Product-space formulation X^m with the w-weighted inner product. This path
// is written independently of combine.hpp and exists to cross-check it; the
// solver never calls into it.

namespace cfp::product
{
/// Element of the diagonal set D, stored by its base point.
struct DiagonalPoint
{
    Vector base;
    std::size_t copies = 0;

    [[nodiscard]] ProductPoint expand() const;
};

/// J(u) = (u, ..., u) with m copies.
ProductPoint embed(const Vector& u, std::size_t m);

/// T(x) = (T_1(x^1), ..., T_m(x^m)).
ProductPoint apply_componentwise(const CutterFamily& ops, const ProductPoint& x);

/// P_Q(x) = (P_{Q_1}(x^1), ..., P_{Q_m}(x^m)). Every operator must be an
/// orthogonal projection.
ProductPoint project_product(const CutterFamily& ops, const ProductPoint& x);

/// P_D(x) = J(sum_i w(i) x^i). Zero-weight components are ignored.
DiagonalPoint project_diagonal(const ProductPoint& x, const WeightVector& w);

/// Operators and weights restricted to the positive support of w.
struct SupportRestriction
{
    std::vector<std::size_t> indices;
    CutterFamily ops;
    WeightVector weights;
};

SupportRestriction restrict_to_support(const CutterFamily& ops, const WeightVector& w);

/// |||T(J(x)) - J(x)|||^2 / |||P_D(T(J(x))) - J(x)|||^2 over the support of w.
/// Throws AtFixedPointError when x is fixed by every supported operator.
double lambda_hat(const CutterFamily& ops, const WeightVector& w, const Vector& x);

/// b_w(J(x)) = J(x) + lambda-hat (P_D(T(J(x))) - J(x)), over the support of w.
/// The returned point has one copy per supported index.
DiagonalPoint b_w(const CutterFamily& ops, const WeightVector& w, const Vector& x);

/// <<b_w(J(x)) - T(J(x)), T(J(x)) - J(x)>>_w over the support; zero when
/// b_w lies on the separating hyperplane.
double hyperplane_offset(const CutterFamily& ops, const WeightVector& w, const Vector& x);

/// <<J(x) - b, J(q) - b>>_w with b = b_w(J(x)); nonpositive exactly
/// when J(q) lies in H(J(x), b_w(J(x))).
double diagonal_margin(const CutterFamily& ops, const WeightVector& w, const Vector& x, const Vector& q);
}  // namespace cfp::product
