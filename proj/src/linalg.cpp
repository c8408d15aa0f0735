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

#include "cfp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cfp/errors.hpp"
#include "cfp/weight_vector.hpp"

namespace cfp
{
Vector& Vector::operator+=(const Vector& other)
{
    require_same_dimension(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other)
{
    require_same_dimension(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

Vector& Vector::operator*=(double factor) noexcept
{
    for (double& v : data_)
        v *= factor;
    return *this;
}

Vector operator+(Vector lhs, const Vector& rhs)
{
    lhs += rhs;
    return lhs;
}

Vector operator-(Vector lhs, const Vector& rhs)
{
    lhs -= rhs;
    return lhs;
}

Vector operator*(double factor, Vector v)
{
    v *= factor;
    return v;
}

Vector operator*(Vector v, double factor)
{
    v *= factor;
    return v;
}

void require_same_dimension(const Vector& x, const Vector& y)
{
    if (x.size() != y.size())
        throw DimensionError(
            fmt::format("dimension mismatch: {} vs {}", x.size(), y.size()));
}

double inner(const Vector& x, const Vector& y)
{
    require_same_dimension(x, y);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        sum += x[i] * y[i];
    return sum;
}

double squared_norm(const Vector& x) noexcept
{
    double sum = 0.0;
    for (double v : x)
        sum += v * v;
    return sum;
}

double norm(const Vector& x) noexcept { return std::sqrt(squared_norm(x)); }

double squared_distance(const Vector& x, const Vector& y)
{
    require_same_dimension(x, y);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return sum;
}

double distance(const Vector& x, const Vector& y) { return std::sqrt(squared_distance(x, y)); }

void axpy(double alpha, const Vector& x, Vector& y)
{
    require_same_dimension(x, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

bool all_finite(const Vector& x) noexcept
{
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

bool nearly_equal(double a, double b, double tol) noexcept
{
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

ProductPoint::ProductPoint(std::vector<Vector> components) : components_(std::move(components))
{
    for (const auto& c : components_)
        require_same_dimension(c, components_.front());
}

ProductPoint& ProductPoint::operator-=(const ProductPoint& other)
{
    if (size() != other.size())
        throw DimensionError(
            fmt::format("product shape mismatch: {} vs {} components", size(), other.size()));
    for (std::size_t i = 0; i < components_.size(); ++i)
        components_[i] -= other.components_[i];
    return *this;
}

ProductPoint operator-(ProductPoint lhs, const ProductPoint& rhs)
{
    lhs -= rhs;
    return lhs;
}

double product_inner(const ProductPoint& x, const ProductPoint& y, const WeightVector& w)
{
    if (x.size() != y.size() || x.size() != w.size())
        throw DimensionError(fmt::format(
            "product shape mismatch: {} / {} components, {} weights", x.size(), y.size(), w.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (w[i] == 0.0)
        {
            require_same_dimension(x[i], y[i]);
            continue;
        }
        sum += w[i] * inner(x[i], y[i]);
    }
    return sum;
}

double product_squared_norm(const ProductPoint& x, const WeightVector& w)
{
    return product_inner(x, x, w);
}

double product_norm(const ProductPoint& x, const WeightVector& w)
{
    return std::sqrt(std::max(0.0, product_squared_norm(x, w)));
}
}  // namespace cfp
