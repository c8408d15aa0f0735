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

namespace cfp
{
/// Nonnegative weights over the operator index set, summing to one.
class WeightVector
{
public:
    /// Sum tolerance used at construction.
    static constexpr double kSumTolerance = 1e-12;

    WeightVector() = default;
    /// Throws ConfigError unless every entry lies in [0,1] and the entries
    /// sum to one within kSumTolerance.
    explicit WeightVector(std::vector<double> weights);

    static WeightVector uniform(std::size_t m);
    /// All mass on index j (zero-based).
    static WeightVector indicator(std::size_t m, std::size_t j);

    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const noexcept { return weights_[i]; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return weights_; }

    /// Indices with strictly positive weight, ascending. Never empty.
    [[nodiscard]] std::vector<std::size_t> support() const;
    [[nodiscard]] bool is_positive() const noexcept;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> weights_;
};

inline std::vector<std::size_t> support(const WeightVector& w) { return w.support(); }
}  // namespace cfp
