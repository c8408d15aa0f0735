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
#include <string_view>
#include <vector>

#include "cfp/linalg.hpp"
#include "cfp/operators.hpp"

namespace cfp
{
enum class Geometry
{
    halfspaces,  ///< half-spaces only
    mixed,       ///< half-spaces and balls
};

std::string_view to_string(Geometry g) noexcept;
Geometry geometry_from_string(std::string_view name);

struct InstanceOptions
{
    std::size_t dimension = 5;
    std::size_t operators = 5;
    Geometry geometry = Geometry::mixed;
    /// Radius of a ball around the anchor point contained in every set;
    /// zero lets some half-spaces pass through the anchor.
    double interior_radius = 0.0;
    /// Distance scale of the starting point from the anchor.
    double start_scale = 10.0;
    std::uint64_t seed = 0;
};

/// Feasible instance with a common point known by construction.
struct Instance
{
    CutterFamily ops;
    Vector anchor;                     ///< lies in every fixed point set
    std::vector<Vector> references;    ///< anchor plus extra points of F when an interior ball exists
    Vector start;
    InstanceOptions options;
};

Instance generate_instance(const InstanceOptions& options);
}  // namespace cfp
