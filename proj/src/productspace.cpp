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

#include "cfp/productspace.hpp"

#include <cmath>

#include <fmt/format.h>

#include "cfp/errors.hpp"

namespace cfp::product
{
ProductPoint DiagonalPoint::expand() const { return embed(base, copies); }

ProductPoint embed(const Vector& u, std::size_t m)
{
    if (m == 0)
        throw DimensionError("embedding needs at least one copy");
    return ProductPoint(std::vector<Vector>(m, u));
}

ProductPoint apply_componentwise(const CutterFamily& ops, const ProductPoint& x)
{
    if (ops.size() != x.size())
        throw DimensionError(fmt::format("{} operators for {} product components", ops.size(), x.size()));
    std::vector<Vector> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out.push_back(ops[i]->evaluate(x[i]));
    return ProductPoint(std::move(out));
}

ProductPoint project_product(const CutterFamily& ops, const ProductPoint& x)
{
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (!ops[i]->is_projection())
            throw ConfigError(fmt::format("operator {} ({}) is not an orthogonal projection", i,
                                          to_string(ops[i]->kind())));
    return apply_componentwise(ops, x);
}

DiagonalPoint project_diagonal(const ProductPoint& x, const WeightVector& w)
{
    if (x.size() != w.size())
        throw DimensionError(fmt::format("{} product components but {} weights", x.size(), w.size()));
    Vector base(x.dimension(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (w[i] > 0.0)
            axpy(w[i], x[i], base);
    return DiagonalPoint{std::move(base), x.size()};
}

SupportRestriction restrict_to_support(const CutterFamily& ops, const WeightVector& w)
{
    if (ops.size() != w.size())
        throw DimensionError(fmt::format("{} operators but {} weights", ops.size(), w.size()));
    SupportRestriction r;
    r.indices = w.support();
    std::vector<double> hat;
    for (std::size_t i : r.indices)
    {
        r.ops.push_back(ops[i]);
        hat.push_back(w[i]);
    }
    r.weights = WeightVector(std::move(hat));
    return r;
}

namespace
{
struct Geometry
{
    SupportRestriction support;
    ProductPoint jx;      // J(x)
    ProductPoint tx;      // T(J(x))
    DiagonalPoint pd_tx;  // P_D(T(J(x)))
    double numerator = 0.0;
    double denominator = 0.0;
};

Geometry evaluate_geometry(const CutterFamily& ops, const WeightVector& w, const Vector& x)
{
    Geometry g{restrict_to_support(ops, w), {}, {}, {}, 0.0, 0.0};
    const std::size_t m = g.support.ops.size();
    g.jx = embed(x, m);
    g.tx = apply_componentwise(g.support.ops, g.jx);
    g.pd_tx = project_diagonal(g.tx, g.support.weights);

    g.numerator = product_squared_norm(g.tx - g.jx, g.support.weights);
    g.denominator = product_squared_norm(g.pd_tx.expand() - g.jx, g.support.weights);

    const double eps = 1e-14 * (1.0 + norm(x));
    if (std::sqrt(g.numerator) <= eps || g.denominator < eps * eps)
        throw AtFixedPointError();
    return g;
}
}  // namespace

double lambda_hat(const CutterFamily& ops, const WeightVector& w, const Vector& x)
{
    const Geometry g = evaluate_geometry(ops, w, x);
    return g.numerator / g.denominator;
}

DiagonalPoint b_w(const CutterFamily& ops, const WeightVector& w, const Vector& x)
{
    const Geometry g = evaluate_geometry(ops, w, x);
    const double ratio = g.numerator / g.denominator;
    Vector base = x;
    axpy(ratio, g.pd_tx.base - x, base);
    return DiagonalPoint{std::move(base), g.support.ops.size()};
}

double hyperplane_offset(const CutterFamily& ops, const WeightVector& w, const Vector& x)
{
    const Geometry g = evaluate_geometry(ops, w, x);
    const double ratio = g.numerator / g.denominator;
    Vector base = x;
    axpy(ratio, g.pd_tx.base - x, base);
    const ProductPoint b = embed(base, g.support.ops.size());
    return product_inner(b - g.tx, g.tx - g.jx, g.support.weights);
}

double diagonal_margin(const CutterFamily& ops, const WeightVector& w, const Vector& x, const Vector& q)
{
    const DiagonalPoint b = b_w(ops, w, x);
    const SupportRestriction s = restrict_to_support(ops, w);
    const ProductPoint bb = b.expand();
    const ProductPoint jx = embed(x, b.copies);
    const ProductPoint jq = embed(q, b.copies);
    return product_inner(jx - bb, jq - bb, s.weights);
}
}  // namespace cfp::product
