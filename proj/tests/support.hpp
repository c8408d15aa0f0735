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

// Hand-rolled random generators shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "cfp/linalg.hpp"
#include "cfp/operators.hpp"
#include "cfp/weight_vector.hpp"

namespace cfp::testing
{
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline Vector gaussian(Rng& rng, std::size_t n, double sigma = 1.0)
{
    std::normal_distribution<double> d(0.0, sigma);
    Vector v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = d(rng);
    return v;
}

inline Vector unit_vector(Rng& rng, std::size_t n)
{
    for (;;)
    {
        Vector v = gaussian(rng, n);
        const double len = norm(v);
        if (len > 1e-8)
            return (1.0 / len) * v;
    }
}

inline Vector in_cube(Rng& rng, std::size_t n, double half)
{
    Vector v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = uniform(rng, -half, half);
    return v;
}

/// Weights with a random nonempty support and exponential masses on it.
inline WeightVector random_weights(Rng& rng, std::size_t m, double keep = 0.7)
{
    std::vector<double> w(m, 0.0);
    std::exponential_distribution<double> mass(1.0);
    bool any = false;
    for (std::size_t i = 0; i < m; ++i)
        if (uniform(rng) < keep)
        {
            w[i] = mass(rng) + 1e-3;
            any = true;
        }
    if (!any)
        w[index(rng, m)] = 1.0;
    double total = 0.0;
    for (double v : w)
        total += v;
    double sum = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (w[i] > 0.0)
        {
            w[i] /= total;
            sum += w[i];
            last = i;
        }
    w[last] += 1.0 - sum;
    return WeightVector(std::move(w));
}

/// Fixed up to rounding: boundary witnesses are reproduced only to a few ulps.
inline bool is_fixed(const Cutter& t, const Vector& x)
{
    return distance(t.evaluate(x), x) <= 1e-13 * (1.0 + norm(x));
}

/// A point of Fix(t). Projections map a random point into their set (onto
/// the boundary or, when it is already inside, to itself). For other kinds,
/// a random point of the segment from an interior point base towards z that
/// the operator fixes exactly, found by bisection.
inline Vector fixed_point_sample(const Cutter& t, const Vector& base, Rng& rng, double scale)
{
    const Vector z = base + gaussian(rng, t.dimension(), scale);
    if (t.is_projection())
        return t.evaluate(z);
    auto exactly_fixed = [&](const Vector& u) { return t.evaluate(u) == u; };
    if (!exactly_fixed(base))
        return base;
    double lo = 0.0;
    double hi = 1.0;
    if (exactly_fixed(z))
        lo = 1.0;
    else
        for (int it = 0; it < 60; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (exactly_fixed(base + mid * (z - base)))
                lo = mid;
            else
                hi = mid;
        }
    // Points short of the bisection bound stay exactly fixed by convexity,
    // up to the rounding of the segment itself; re-check to be safe.
    for (;;)
    {
        const Vector q = base + (lo * uniform(rng)) * (z - base);
        if (exactly_fixed(q))
            return q;
    }
}

/// A random operator with a known point of its fixed point set.
struct SampledCutter
{
    CutterPtr op;
    Vector inside;
};

inline CutterPtr random_cutter(CutterKind kind, std::size_t n, Rng& rng, Vector* inside = nullptr);

inline SampledCutter sample_cutter(CutterKind kind, std::size_t n, Rng& rng)
{
    SampledCutter s;
    s.op = random_cutter(kind, n, rng, &s.inside);
    if (s.inside.size() == 0)
        s.inside = *s.op->witness();
    return s;
}

/// One random operator of the given kind in dimension n with Fix nonempty.
/// Sets *inside for kinds that carry no witness.
inline CutterPtr random_cutter(CutterKind kind, std::size_t n, Rng& rng, Vector* inside)
{
    switch (kind)
    {
    case CutterKind::halfspace: return std::make_shared<Halfspace>(gaussian(rng, n), uniform(rng, -2.0, 2.0));
    case CutterKind::hyperplane: return std::make_shared<Hyperplane>(gaussian(rng, n), uniform(rng, -2.0, 2.0));
    case CutterKind::ball: return std::make_shared<Ball>(in_cube(rng, n, 3.0), uniform(rng, 0.1, 3.0));
    case CutterKind::box:
    {
        Vector lo = in_cube(rng, n, 2.0);
        Vector hi = lo;
        for (std::size_t i = 0; i < n; ++i)
            hi[i] += uniform(rng, 0.0, 2.0);
        return std::make_shared<Box>(lo, hi);
    }
    case CutterKind::affine_subspace:
    {
        const std::size_t rows = 1 + index(rng, std::max<std::size_t>(1, n / 2));
        std::vector<Vector> a;
        for (std::size_t r = 0; r < rows; ++r)
            a.push_back(gaussian(rng, n));
        const Vector p = in_cube(rng, n, 2.0);
        Vector b(rows, 0.0);
        for (std::size_t r = 0; r < rows; ++r)
            b[r] = inner(a[r], p);
        return std::make_shared<AffineSubspace>(a, b);
    }
    case CutterKind::subgradient_projection:
    {
        LevelFunction f;
        switch (index(rng, 3))
        {
        case 0:
            f.form = LevelFunction::Form::squared_distance;
            f.center = in_cube(rng, n, 2.0);
            f.radius = uniform(rng, 0.2, 2.0);
            break;
        case 1:
            f.form = LevelFunction::Form::l1_distance;
            f.center = in_cube(rng, n, 2.0);
            f.radius = uniform(rng, 0.2, 2.0);
            break;
        default:
        {
            f.form = LevelFunction::Form::max_affine;
            const Vector p = in_cube(rng, n, 1.0);
            const std::size_t pieces = 2 + index(rng, 3);
            for (std::size_t j = 0; j < pieces; ++j)
            {
                f.normals.push_back(gaussian(rng, n));
                f.offsets.push_back(inner(f.normals.back(), p) + uniform(rng, 0.0, 1.0));
            }
            if (inside)
                *inside = p;
            break;
        }
        }
        return std::make_shared<SubgradientProjection>(f);
    }
    case CutterKind::block_average:
    {
        // Members share the point p.
        const Vector p = in_cube(rng, n, 2.0);
        CutterFamily members;
        const Vector a = gaussian(rng, n);
        members.push_back(std::make_shared<Halfspace>(a, inner(a, p) + uniform(rng, 0.0, 1.0)));
        const Vector c = p + gaussian(rng, n, 0.3);
        members.push_back(std::make_shared<Ball>(c, distance(c, p) + uniform(rng, 0.1, 1.0)));
        LevelFunction f;
        f.form = LevelFunction::Form::l1_distance;
        f.center = p;
        f.radius = uniform(rng, 0.1, 1.0);
        members.push_back(std::make_shared<SubgradientProjection>(f));
        const double u = uniform(rng, 0.1, 0.5);
        const double v = uniform(rng, 0.1, 0.4);
        return std::make_shared<BlockAverage>(members, WeightVector({u, v, 1.0 - u - v}), p);
    }
    }
    return nullptr;
}

inline constexpr CutterKind kAllKinds[] = {
    CutterKind::halfspace,       CutterKind::hyperplane,
    CutterKind::ball,            CutterKind::box,
    CutterKind::affine_subspace, CutterKind::subgradient_projection,
    CutterKind::block_average,
};
}  // namespace cfp::testing
