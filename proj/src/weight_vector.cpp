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

#include "cfp/weight_vector.hpp"

#include <cmath>

#include <fmt/format.h>

#include "cfp/errors.hpp"

namespace cfp
{
WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights))
{
    if (weights_.empty())
        throw ConfigError("weight vector must have at least one entry");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
    {
        const double v = weights_[i];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw ConfigError(fmt::format("weight {} = {} outside [0,1]", i, v));
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw ConfigError(fmt::format("weights sum to {:.17g}, expected 1", sum));
}

WeightVector WeightVector::uniform(std::size_t m)
{
    return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

WeightVector WeightVector::indicator(std::size_t m, std::size_t j)
{
    if (j >= m)
        throw ConfigError(fmt::format("indicator index {} out of range for m = {}", j, m));
    std::vector<double> w(m, 0.0);
    w[j] = 1.0;
    return WeightVector(std::move(w));
}

std::vector<std::size_t> WeightVector::support() const
{
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (weights_[i] > 0.0)
            indices.push_back(i);
    return indices;
}

bool WeightVector::is_positive() const noexcept
{
    for (double v : weights_)
        if (!(v > 0.0))
            return false;
    return true;
}
}  // namespace cfp
