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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfp/linalg.hpp"
#include "cfp/weight_vector.hpp"

namespace cfp
{
enum class CutterKind
{
    halfspace,
    hyperplane,
    ball,
    box,
    affine_subspace,
    subgradient_projection,
    block_average,
};

std::string_view to_string(CutterKind kind) noexcept;

/// An operator T on R^n with nonempty fixed point set satisfying
/// <x - T(x), q - T(x)> <= 0 for every x and every q in Fix(T).
///
/// Implementations must be deterministic and continuous; every kind shipped
/// here is. Instances are immutable after construction, so evaluate() may be
/// called concurrently.
class Cutter
{
public:
    virtual ~Cutter() = default;

    [[nodiscard]] virtual CutterKind kind() const noexcept = 0;
    [[nodiscard]] virtual std::size_t dimension() const noexcept = 0;

    /// Orthogonal projections onto closed convex sets report true.
    [[nodiscard]] virtual bool is_projection() const noexcept { return true; }

    /// A known point of Fix(T), if the operator can name one.
    [[nodiscard]] virtual std::optional<Vector> witness() const { return std::nullopt; }

    /// Checks the dimension of x and the finiteness of the result.
    [[nodiscard]] Vector evaluate(const Vector& x) const;

protected:
    [[nodiscard]] virtual Vector apply(const Vector& x) const = 0;
};

using CutterPtr = std::shared_ptr<const Cutter>;
using CutterFamily = std::vector<CutterPtr>;

/// Projection onto {u : <a,u> <= offset}.
class Halfspace final : public Cutter
{
public:
    Halfspace(Vector normal, double offset);

    CutterKind kind() const noexcept override { return CutterKind::halfspace; }
    std::size_t dimension() const noexcept override { return normal_.size(); }
    std::optional<Vector> witness() const override;

    const Vector& normal() const noexcept { return normal_; }
    double offset() const noexcept { return offset_; }

protected:
    Vector apply(const Vector& x) const override;

private:
    Vector normal_;
    double offset_;
    double normal_sq_;
};

/// Projection onto {u : <a,u> = offset}.
class Hyperplane final : public Cutter
{
public:
    Hyperplane(Vector normal, double offset);

    CutterKind kind() const noexcept override { return CutterKind::hyperplane; }
    std::size_t dimension() const noexcept override { return normal_.size(); }
    std::optional<Vector> witness() const override;

    const Vector& normal() const noexcept { return normal_; }
    double offset() const noexcept { return offset_; }

protected:
    Vector apply(const Vector& x) const override;

private:
    Vector normal_;
    double offset_;
    double normal_sq_;
};

/// Projection onto the closed ball B[center, radius].
class Ball final : public Cutter
{
public:
    Ball(Vector center, double radius);

    CutterKind kind() const noexcept override { return CutterKind::ball; }
    std::size_t dimension() const noexcept override { return center_.size(); }
    std::optional<Vector> witness() const override { return center_; }

    const Vector& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }

protected:
    Vector apply(const Vector& x) const override;

private:
    Vector center_;
    double radius_;
};

/// Projection onto {u : lower <= u <= upper} (componentwise clamp).
class Box final : public Cutter
{
public:
    Box(Vector lower, Vector upper);

    CutterKind kind() const noexcept override { return CutterKind::box; }
    std::size_t dimension() const noexcept override { return lower_.size(); }
    std::optional<Vector> witness() const override;

    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }

protected:
    Vector apply(const Vector& x) const override;

private:
    Vector lower_;
    Vector upper_;
};

/// Projection onto {u : A u = b}. Rows of A are orthonormalized once at
/// construction; linearly dependent rows are dropped after a consistency
/// check on b.
class AffineSubspace final : public Cutter
{
public:
    AffineSubspace(std::vector<Vector> rows, Vector rhs);

    CutterKind kind() const noexcept override { return CutterKind::affine_subspace; }
    std::size_t dimension() const noexcept override { return dimension_; }
    std::optional<Vector> witness() const override { return particular_; }

    const std::vector<Vector>& rows() const noexcept { return rows_; }
    const Vector& rhs() const noexcept { return rhs_; }
    std::size_t rank() const noexcept { return basis_.size(); }

protected:
    Vector apply(const Vector& x) const override;

private:
    std::vector<Vector> rows_;
    Vector rhs_;
    std::size_t dimension_;
    std::vector<Vector> basis_;  // orthonormal basis of the row space
    std::vector<double> basis_rhs_;
    Vector particular_;  // minimum-norm solution of A u = b
};

/// Descriptor for the convex functions the problem format can name.
struct LevelFunction
{
    enum class Form
    {
        /// f(u) = ||u - center||^2 - radius^2
        squared_distance,
        /// f(u) = ||u - center||_1 - radius
        l1_distance,
        /// f(u) = max_j (<a_j, u> - b_j)
        max_affine,
    };
    Form form = Form::squared_distance;
    Vector center;
    double radius = 0.0;
    std::vector<Vector> normals;
    std::vector<double> offsets;
};

/// Subgradient projection onto the zero-level set of a convex function:
/// x if f(x) <= 0, else x - f(x) / ||g(x)||^2 * g(x).
class SubgradientProjection final : public Cutter
{
public:
    using Function = std::function<double(const Vector&)>;
    using Subgradient = std::function<Vector(const Vector&)>;

    SubgradientProjection(std::size_t dimension, Function f, Subgradient g,
                          std::optional<Vector> witness = std::nullopt);
    explicit SubgradientProjection(LevelFunction description);

    CutterKind kind() const noexcept override { return CutterKind::subgradient_projection; }
    std::size_t dimension() const noexcept override { return dimension_; }
    bool is_projection() const noexcept override { return false; }
    std::optional<Vector> witness() const override { return witness_; }

    double value(const Vector& x) const { return f_(x); }
    Vector subgradient(const Vector& x) const { return g_(x); }
    const std::optional<LevelFunction>& description() const noexcept { return description_; }

protected:
    Vector apply(const Vector& x) const override;

private:
    std::size_t dimension_;
    Function f_;
    Subgradient g_;
    std::optional<Vector> witness_;
    std::optional<LevelFunction> description_;
};

/// Fixed convex combination of cutters, x -> sum_i w(i) T_i(x). A cutter
/// whenever the members share a fixed point; Fix is then the intersection
/// of the members' fixed point sets over the support of the weights.
class BlockAverage final : public Cutter
{
public:
    BlockAverage(CutterFamily members, WeightVector weights,
                 std::optional<Vector> witness = std::nullopt);

    CutterKind kind() const noexcept override { return CutterKind::block_average; }
    std::size_t dimension() const noexcept override { return dimension_; }
    bool is_projection() const noexcept override { return false; }
    std::optional<Vector> witness() const override { return witness_; }

    const CutterFamily& members() const noexcept { return members_; }
    const WeightVector& weights() const noexcept { return weights_; }

protected:
    Vector apply(const Vector& x) const override;

private:
    CutterFamily members_;
    WeightVector weights_;
    std::size_t dimension_;
    std::optional<Vector> witness_;
};

/// H(x, y) = {u : <x - y, u - y> <= 0}; the whole space when x = y.
struct HalfspaceSet
{
    Vector anchor;
    Vector image;

    /// Value <x - y, u - y>; membership means it is <= 0.
    [[nodiscard]] double margin(const Vector& u) const;
};

/// Default slack for halfspace_contains: 1e-12 * (1 + |x - y| |u - y|).
double containment_slack(const HalfspaceSet& h, const Vector& u);

bool halfspace_contains(const HalfspaceSet& h, const Vector& u);
bool halfspace_contains(const HalfspaceSet& h, const Vector& u, double slack);

/// <x - T(x), q - T(x)>; nonpositive for every q in Fix(T).
double check_cutter_inequality(const Cutter& t, const Vector& x, const Vector& q);

/// ||T(x) - x||
double fixed_point_residual(const Cutter& t, const Vector& x);

/// max_i ||T_i(x) - x|| over the whole family.
double max_residual(const CutterFamily& ops, const Vector& x);

/// Family dimension; throws DimensionError on an empty or inconsistent family.
std::size_t family_dimension(const CutterFamily& ops);
}  // namespace cfp
