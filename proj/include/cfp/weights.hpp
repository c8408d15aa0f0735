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
#include <optional>
#include <string_view>
#include <vector>

#include "cfp/weight_vector.hpp"

namespace cfp
{
enum class ScheduleKind
{
    constant_uniform,
    cyclic_singleton,
    example45,
    example46,
    remark44_counterexample,
    user_table,
};

std::string_view to_string(ScheduleKind kind) noexcept;

/// (s, alpha) such that every index gets weight >= alpha at least once in
/// every window of s consecutive iterations.
struct IntermittentGuarantee
{
    std::size_t window = 1;
    double floor = 0.0;
};

/// Deterministic map k -> w_k. Immutable; at() is pure and thread-safe.
///
/// Kinds:
///  - constant_uniform: w_k(i) = 1/m.
///  - cyclic_singleton: w_k is the indicator of index k mod m.
///  - example45: randomized windows of length s/2; in each window one
///    iteration h_t puts weight in [1/(2m), 1/m] on every i < m, the others
///    draw from [0, 1/m]; the last index takes the remainder.
///  - example46: uniform when k = 0 (mod m), otherwise 1/(2km) on i < m.
///  - remark44_counterexample: 1/((k+1)m) on i < m. Weights sum to
///    infinity per index but no uniform floor recurs.
///  - user_table: explicit finite list; running past its end is an error.
class WeightSchedule
{
public:
    static WeightSchedule constant_uniform(std::size_t m);
    static WeightSchedule cyclic_singleton(std::size_t m);
    static WeightSchedule example46(std::size_t m);
    static WeightSchedule remark44_counterexample(std::size_t m);
    static WeightSchedule user_table(std::vector<WeightVector> table);
    /// Requires m > 1 and an even window s >= 2.
    static WeightSchedule example45(std::size_t m, std::size_t s, std::uint64_t seed);

    [[nodiscard]] ScheduleKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return m_; }

    [[nodiscard]] WeightVector at(std::size_t k) const;

    /// (s, alpha) known to hold analytically, if the kind carries one.
    [[nodiscard]] std::optional<IntermittentGuarantee> intermittent_guarantee() const;
    /// Whether every index's weights are known to sum to infinity.
    [[nodiscard]] bool guarantees_divergent_sums() const noexcept;

    /// example45 window s (the full window, twice the block length).
    [[nodiscard]] std::size_t window() const noexcept { return window_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const std::vector<WeightVector>& table() const noexcept { return table_; }

    /// example45 only: the iteration h_{t,1} of block t, in [t s/2, (t+1) s/2).
    [[nodiscard]] std::size_t anchor_of_block(std::size_t t) const;

    /// example45 only: an iteration in [l, l + s - 1] where every weight is
    /// at least 1/(2m), namely h_{t,1} with t the strict ceiling of l/(s/2).
    [[nodiscard]] std::size_t floor_witness(std::size_t l) const;

private:
    WeightSchedule(ScheduleKind kind, std::size_t m) : kind_(kind), m_(m) {}

    ScheduleKind kind_;
    std::size_t m_;
    std::size_t window_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<WeightVector> table_;
};

inline WeightVector weights_at(const WeightSchedule& s, std::size_t k) { return s.at(k); }

inline WeightSchedule make_example45(std::size_t m, std::size_t s, std::uint64_t seed)
{
    return WeightSchedule::example45(m, s, seed);
}

/// Minimal integer strictly greater than r.
std::int64_t strict_ceiling(double r);

enum class WeightCondition
{
    sum_divergence,
    intermittent_floor,
};

struct ConditionReport
{
    WeightCondition condition = WeightCondition::intermittent_floor;
    std::size_t horizon = 0;
    std::size_t window = 0;  ///< intermittent only
    double floor = 0.0;      ///< intermittent floor alpha or partial-sum threshold
    bool holds = true;       ///< verdict on the horizon

    /// Counterexample when !holds. For the intermittent condition, k is the
    /// first iteration l of a window {l..l+s-1} where index i never reaches
    /// the floor; for partial sums it is the horizon.
    struct Violation
    {
        std::size_t k = 0;
        std::size_t index = 0;
        double observed = 0.0;  ///< max weight in that window, or the partial sum
    };
    std::optional<Violation> violation;

    /// Intermittent: per index, min over windows of the max weight in the
    /// window. Sum divergence: per-index partial sums.
    std::vector<double> witness;
};

/// Checks every l in {0, ..., horizon - window} and every index.
/// Throws ConfigError when horizon < window or window == 0.
ConditionReport verify_intermittent(const WeightSchedule& s, std::size_t horizon, std::size_t window,
                                    double floor);

/// sum_{k < horizon} w_k(i) per index. Evidence only; divergence of the
/// full series is not decidable from a prefix.
std::vector<double> partial_sums(const WeightSchedule& s, std::size_t horizon);

/// Reports whether every partial sum up to horizon reaches threshold.
ConditionReport check_partial_sums(const WeightSchedule& s, std::size_t horizon, double threshold);
}  // namespace cfp
