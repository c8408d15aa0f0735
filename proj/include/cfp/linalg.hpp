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
#include <initializer_list>
#include <span>
#include <vector>

namespace cfp
{
class WeightVector;

/// Dense point of R^n.
class Vector
{
public:
    Vector() = default;
    explicit Vector(std::size_t n, double value = 0.0) : data_(n, value) {}
    Vector(std::initializer_list<double> values) : data_(values) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
    [[nodiscard]] std::span<double> values() noexcept { return data_; }
    [[nodiscard]] const std::vector<double>& std_vector() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double factor) noexcept;

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> data_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator*(double factor, Vector v);
Vector operator*(Vector v, double factor);

/// Throws DimensionError when the sizes differ.
void require_same_dimension(const Vector& x, const Vector& y);

double inner(const Vector& x, const Vector& y);
double squared_norm(const Vector& x) noexcept;
double norm(const Vector& x) noexcept;
double distance(const Vector& x, const Vector& y);
double squared_distance(const Vector& x, const Vector& y);

/// y <- y + alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

bool all_finite(const Vector& x) noexcept;

/// |a - b| <= tol * (1 + max(|a|, |b|)), the library-wide comparison policy.
bool nearly_equal(double a, double b, double tol = 1e-12) noexcept;

/// Element of the product space X^m: one vector per operator index.
class ProductPoint
{
public:
    ProductPoint() = default;
    explicit ProductPoint(std::vector<Vector> components);

    [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
    [[nodiscard]] std::size_t dimension() const noexcept
    {
        return components_.empty() ? 0 : components_.front().size();
    }

    const Vector& operator[](std::size_t i) const noexcept { return components_[i]; }
    Vector& operator[](std::size_t i) noexcept { return components_[i]; }
    [[nodiscard]] const std::vector<Vector>& components() const noexcept { return components_; }

    ProductPoint& operator-=(const ProductPoint& other);

private:
    std::vector<Vector> components_;
};

ProductPoint operator-(ProductPoint lhs, const ProductPoint& rhs);

/// <<x, y>>_w = sum_i w(i) <x^i, y^i>.
double product_inner(const ProductPoint& x, const ProductPoint& y, const WeightVector& w);
double product_squared_norm(const ProductPoint& x, const WeightVector& w);
double product_norm(const ProductPoint& x, const WeightVector& w);
}  // namespace cfp
