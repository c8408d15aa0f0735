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

#include "cfp/instances.hpp"

#include <cmath>
#include <memory>
#include <random>

#include <fmt/format.h>

#include "cfp/errors.hpp"

namespace cfp
{
std::string_view to_string(Geometry g) noexcept
{
    return g == Geometry::halfspaces ? "halfspaces" : "mixed";
}

Geometry geometry_from_string(std::string_view name)
{
    if (name == "halfspaces" || name == "halfspace")
        return Geometry::halfspaces;
    if (name == "mixed")
        return Geometry::mixed;
    throw ConfigError(fmt::format("unknown geometry '{}'", name));
}

namespace
{
Vector gaussian_vector(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (double& c : v)
        c = normal(rng);
    return v;
}

Vector unit_vector(std::mt19937_64& rng, std::size_t n)
{
    Vector v = gaussian_vector(rng, n);
    while (norm(v) < 1e-8)
        v = gaussian_vector(rng, n);
    v *= 1.0 / norm(v);
    return v;
}
}  // namespace

Instance generate_instance(const InstanceOptions& options)
{
    if (options.dimension == 0 || options.operators == 0)
        throw ConfigError("instance needs dimension >= 1 and at least one operator");
    if (!(options.interior_radius >= 0.0))
        throw ConfigError("interior radius must be nonnegative");

    const std::size_t n = options.dimension;
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Instance inst;
    inst.options = options;
    inst.anchor = Vector(n);
    for (double& c : inst.anchor)
        c = 2.0 * unit(rng) - 1.0;
    const double rho = options.interior_radius;

    for (std::size_t i = 0; i < options.operators; ++i)
    {
        const bool ball = options.geometry == Geometry::mixed && i % 3 == 2;
        if (ball)
        {
            // Center within distance d of the anchor, radius covering B[anchor, rho].
            const double d = 2.0 * unit(rng);
            Vector c = inst.anchor + d * unit_vector(rng, n);
            const double r = d + rho + 0.5 * unit(rng) + 1e-3;
            inst.ops.push_back(std::make_shared<Ball>(std::move(c), r));
        }
        else
        {
            Vector a = unit_vector(rng, n);
            // Every third half-space is active at the anchor when rho = 0.
            const double slack = (rho == 0.0 && i % 3 == 0) ? 0.0 : rho + 0.5 * unit(rng);
            const double beta = inner(a, inst.anchor) + slack;
            inst.ops.push_back(std::make_shared<Halfspace>(std::move(a), beta));
        }
    }

    inst.references.push_back(inst.anchor);
    if (rho > 0.0)
        for (int j = 0; j < 2; ++j)
            inst.references.push_back(inst.anchor + (0.9 * rho * unit(rng)) * unit_vector(rng, n));

    inst.start = inst.anchor + (options.start_scale * (0.5 + unit(rng))) * unit_vector(rng, n);
    return inst;
}
}  // namespace cfp
