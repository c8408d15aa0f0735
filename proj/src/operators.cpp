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

#include "cfp/operators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cfp/errors.hpp"

namespace cfp
{
namespace
{
void require_nonzero_normal(const Vector& a, std::string_view what)
{
    if (a.empty())
        throw ConfigError(fmt::format("{}: normal must have dimension >= 1", what));
    if (!all_finite(a))
        throw ConfigError(fmt::format("{}: normal has non-finite entries", what));
    if (squared_norm(a) == 0.0)
        throw ConfigError(fmt::format("{}: normal must be nonzero", what));
}

void require_finite(const Vector& v, std::string_view what)
{
    if (v.empty())
        throw ConfigError(fmt::format("{} must have dimension >= 1", what));
    if (!all_finite(v))
        throw ConfigError(fmt::format("{} has non-finite entries", what));
}
}  // namespace

std::string_view to_string(CutterKind kind) noexcept
{
    switch (kind)
    {
    case CutterKind::halfspace: return "halfspace";
    case CutterKind::hyperplane: return "hyperplane";
    case CutterKind::ball: return "ball";
    case CutterKind::box: return "box";
    case CutterKind::affine_subspace: return "affine";
    case CutterKind::subgradient_projection: return "subgradient";
    case CutterKind::block_average: return "average";
    }
    return "unknown";
}

Vector Cutter::evaluate(const Vector& x) const
{
    if (x.size() != dimension())
        throw DimensionError(fmt::format("{} operator of dimension {} applied to a point of dimension {}",
                                         to_string(kind()), dimension(), x.size()));
    Vector y = apply(x);
    if (!all_finite(y))
        throw EvaluationError(fmt::format("{} operator produced a non-finite value", to_string(kind())));
    return y;
}

// ---------------------------------------------------------------------------

Halfspace::Halfspace(Vector normal, double offset)
    : normal_(std::move(normal)), offset_(offset), normal_sq_(0.0)
{
    require_nonzero_normal(normal_, "halfspace");
    if (!std::isfinite(offset_))
        throw ConfigError("halfspace: offset must be finite");
    normal_sq_ = squared_norm(normal_);
}

Vector Halfspace::apply(const Vector& x) const
{
    const double violation = inner(normal_, x) - offset_;
    if (violation <= 0.0)
        return x;
    Vector y = x;
    axpy(-violation / normal_sq_, normal_, y);
    return y;
}

std::optional<Vector> Halfspace::witness() const
{
    return apply(Vector(normal_.size(), 0.0));
}

Hyperplane::Hyperplane(Vector normal, double offset)
    : normal_(std::move(normal)), offset_(offset), normal_sq_(0.0)
{
    require_nonzero_normal(normal_, "hyperplane");
    if (!std::isfinite(offset_))
        throw ConfigError("hyperplane: offset must be finite");
    normal_sq_ = squared_norm(normal_);
}

Vector Hyperplane::apply(const Vector& x) const
{
    const double violation = inner(normal_, x) - offset_;
    if (violation == 0.0)
        return x;
    Vector y = x;
    axpy(-violation / normal_sq_, normal_, y);
    return y;
}

std::optional<Vector> Hyperplane::witness() const
{
    return (offset_ / normal_sq_) * normal_;
}

Ball::Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius)
{
    require_finite(center_, "ball center");
    if (!(radius_ > 0.0) || !std::isfinite(radius_))
        throw ConfigError(fmt::format("ball radius must be positive, got {}", radius_));
}

Vector Ball::apply(const Vector& x) const
{
    const double d = distance(x, center_);
    if (d <= radius_)
        return x;
    Vector y = x - center_;
    y *= radius_ / d;
    y += center_;
    return y;
}

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    require_finite(lower_, "box lower bound");
    require_finite(upper_, "box upper bound");
    require_same_dimension(lower_, upper_);
    for (std::size_t j = 0; j < lower_.size(); ++j)
        if (lower_[j] > upper_[j])
            throw ConfigError(fmt::format("box: lower[{}] = {} exceeds upper[{}] = {}", j, lower_[j], j,
                                          upper_[j]));
}

Vector Box::apply(const Vector& x) const
{
    Vector y = x;
    for (std::size_t j = 0; j < y.size(); ++j)
        y[j] = std::clamp(y[j], lower_[j], upper_[j]);
    return y;
}

std::optional<Vector> Box::witness() const { return apply(Vector(lower_.size(), 0.0)); }

AffineSubspace::AffineSubspace(std::vector<Vector> rows, Vector rhs)
    : rows_(std::move(rows)), rhs_(std::move(rhs)), dimension_(0)
{
    if (rows_.empty())
        throw ConfigError("affine subspace needs at least one equation");
    if (rhs_.size() != rows_.size())
        throw ConfigError(fmt::format("affine subspace: {} rows but {} right-hand sides", rows_.size(),
                                      rhs_.size()));
    require_finite(rhs_, "affine right-hand side");
    dimension_ = rows_.front().size();
    for (const auto& row : rows_)
    {
        require_finite(row, "affine row");
        if (row.size() != dimension_)
            throw ConfigError("affine subspace rows have inconsistent dimensions");
    }

    // Modified Gram-Schmidt on the rows, carrying the right-hand side along.
    double scale = 0.0;
    for (const auto& row : rows_)
        scale = std::max(scale, norm(row));
    const double drop_tol = 1e-12 * (1.0 + scale);
    for (std::size_t r = 0; r < rows_.size(); ++r)
    {
        Vector q = rows_[r];
        double c = rhs_[r];
        for (std::size_t j = 0; j < basis_.size(); ++j)
        {
            const double proj = inner(basis_[j], q);
            axpy(-proj, basis_[j], q);
            c -= proj * basis_rhs_[j];
        }
        const double len = norm(q);
        if (len <= drop_tol)
        {
            if (std::abs(c) > 1e-9 * (1.0 + std::abs(rhs_[r])))
                throw ConfigError(fmt::format("affine subspace: equation {} is inconsistent (empty set)", r));
            continue;
        }
        q *= 1.0 / len;
        basis_.push_back(std::move(q));
        basis_rhs_.push_back(c / len);
    }
    if (basis_.empty())
        throw ConfigError("affine subspace: all rows are zero");

    particular_ = Vector(dimension_, 0.0);
    for (std::size_t j = 0; j < basis_.size(); ++j)
        axpy(basis_rhs_[j], basis_[j], particular_);
}

Vector AffineSubspace::apply(const Vector& x) const
{
    Vector y = x;
    for (std::size_t j = 0; j < basis_.size(); ++j)
        axpy(-(inner(basis_[j], x) - basis_rhs_[j]), basis_[j], y);
    return y;
}

// ---------------------------------------------------------------------------

SubgradientProjection::SubgradientProjection(std::size_t dimension, Function f, Subgradient g,
                                             std::optional<Vector> witness)
    : dimension_(dimension), f_(std::move(f)), g_(std::move(g)), witness_(std::move(witness))
{
    if (dimension_ == 0)
        throw ConfigError("subgradient projection: dimension must be >= 1");
    if (!f_ || !g_)
        throw ConfigError("subgradient projection needs both a function and a subgradient");
    if (witness_ && witness_->size() != dimension_)
        throw ConfigError("subgradient projection: witness has the wrong dimension");
}

namespace
{
SubgradientProjection::Function level_value(const LevelFunction& d)
{
    switch (d.form)
    {
    case LevelFunction::Form::squared_distance:
        return [c = d.center, r = d.radius](const Vector& u) { return squared_distance(u, c) - r * r; };
    case LevelFunction::Form::l1_distance:
        return [c = d.center, r = d.radius](const Vector& u) {
            require_same_dimension(u, c);
            double s = 0.0;
            for (std::size_t j = 0; j < u.size(); ++j)
                s += std::abs(u[j] - c[j]);
            return s - r;
        };
    case LevelFunction::Form::max_affine:
        return [a = d.normals, b = d.offsets](const Vector& u) {
            double best = -INFINITY;
            for (std::size_t j = 0; j < a.size(); ++j)
                best = std::max(best, inner(a[j], u) - b[j]);
            return best;
        };
    }
    return {};
}

SubgradientProjection::Subgradient level_subgradient(const LevelFunction& d)
{
    switch (d.form)
    {
    case LevelFunction::Form::squared_distance:
        return [c = d.center](const Vector& u) { return 2.0 * (u - c); };
    case LevelFunction::Form::l1_distance:
        return [c = d.center](const Vector& u) {
            Vector g(u.size(), 0.0);
            for (std::size_t j = 0; j < u.size(); ++j)
                g[j] = u[j] > c[j] ? 1.0 : (u[j] < c[j] ? -1.0 : 0.0);
            return g;
        };
    case LevelFunction::Form::max_affine:
        return [a = d.normals, b = d.offsets](const Vector& u) {
            std::size_t arg = 0;
            double best = -INFINITY;
            for (std::size_t j = 0; j < a.size(); ++j)
            {
                const double v = inner(a[j], u) - b[j];
                if (v > best)
                {
                    best = v;
                    arg = j;
                }
            }
            return a[arg];
        };
    }
    return {};
}

std::size_t level_dimension(const LevelFunction& d)
{
    if (d.form == LevelFunction::Form::max_affine)
    {
        if (d.normals.empty() || d.normals.size() != d.offsets.size())
            throw ConfigError("max-affine level function needs matching normals and offsets");
        for (const auto& a : d.normals)
        {
            require_nonzero_normal(a, "max-affine piece");
            if (a.size() != d.normals.front().size())
                throw ConfigError("max-affine pieces have inconsistent dimensions");
        }
        return d.normals.front().size();
    }
    require_finite(d.center, "level function center");
    if (!(d.radius > 0.0) || !std::isfinite(d.radius))
        throw ConfigError("level function radius must be positive");
    return d.center.size();
}
}  // namespace

SubgradientProjection::SubgradientProjection(LevelFunction description)
    : SubgradientProjection(level_dimension(description), level_value(description),
                            level_subgradient(description),
                            description.form == LevelFunction::Form::max_affine
                                ? std::nullopt
                                : std::optional<Vector>(description.center))
{
    description_ = std::move(description);
}

Vector SubgradientProjection::apply(const Vector& x) const
{
    const double fx = f_(x);
    if (std::isnan(fx))
        throw EvaluationError("subgradient projection: function value is NaN");
    if (fx <= 0.0)
        return x;
    Vector g = g_(x);
    if (g.size() != dimension_)
        throw DimensionError("subgradient projection: subgradient has the wrong dimension");
    const double gg = squared_norm(g);
    if (gg == 0.0)
        throw EvaluationError(
            "subgradient projection: zero subgradient where f > 0 (zero-level set is empty)");
    Vector y = x;
    axpy(-fx / gg, g, y);
    return y;
}

// ---------------------------------------------------------------------------

BlockAverage::BlockAverage(CutterFamily members, WeightVector weights, std::optional<Vector> witness)
    : members_(std::move(members)), weights_(std::move(weights)), dimension_(0),
      witness_(std::move(witness))
{
    if (members_.size() != weights_.size())
        throw ConfigError(fmt::format("average: {} members but {} weights", members_.size(),
                                      weights_.size()));
    dimension_ = family_dimension(members_);
    if (witness_ && witness_->size() != dimension_)
        throw ConfigError("average: witness has the wrong dimension");
}

Vector BlockAverage::apply(const Vector& x) const
{
    Vector y(x.size(), 0.0);
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (weights_[i] > 0.0)
            axpy(weights_[i], members_[i]->evaluate(x), y);
    return y;
}

// ---------------------------------------------------------------------------

double HalfspaceSet::margin(const Vector& u) const
{
    return inner(anchor - image, u - image);
}

double containment_slack(const HalfspaceSet& h, const Vector& u)
{
    return 1e-12 * (1.0 + distance(h.anchor, h.image) * distance(u, h.image));
}

bool halfspace_contains(const HalfspaceSet& h, const Vector& u, double slack)
{
    require_same_dimension(h.anchor, h.image);
    if (h.anchor == h.image)
    {
        require_same_dimension(h.anchor, u);
        return true;
    }
    return h.margin(u) <= slack;
}

bool halfspace_contains(const HalfspaceSet& h, const Vector& u)
{
    return halfspace_contains(h, u, containment_slack(h, u));
}

double check_cutter_inequality(const Cutter& t, const Vector& x, const Vector& q)
{
    const Vector tx = t.evaluate(x);
    return inner(x - tx, q - tx);
}

double fixed_point_residual(const Cutter& t, const Vector& x) { return distance(t.evaluate(x), x); }

double max_residual(const CutterFamily& ops, const Vector& x)
{
    double r = 0.0;
    for (const auto& op : ops)
        r = std::max(r, fixed_point_residual(*op, x));
    return r;
}

std::size_t family_dimension(const CutterFamily& ops)
{
    if (ops.empty())
        throw DimensionError("operator family is empty");
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (!ops[i])
            throw DimensionError(fmt::format("operator {} is null", i));
    const std::size_t n = ops.front()->dimension();
    for (std::size_t i = 0; i < ops.size(); ++i)
    {
        if (ops[i]->dimension() != n)
            throw DimensionError(
                fmt::format("operator {} has dimension {}, expected {}", i, ops[i]->dimension(), n));
    }
    return n;
}
}  // namespace cfp
