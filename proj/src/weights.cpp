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

#include "cfp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include <fmt/format.h>

#include "cfp/errors.hpp"

namespace cfp
{
std::string_view to_string(ScheduleKind kind) noexcept
{
    switch (kind)
    {
    case ScheduleKind::constant_uniform: return "constant-uniform";
    case ScheduleKind::cyclic_singleton: return "cyclic-singleton";
    case ScheduleKind::example45: return "example45";
    case ScheduleKind::example46: return "example46";
    case ScheduleKind::remark44_counterexample: return "remark44-counterexample";
    case ScheduleKind::user_table: return "user-table";
    }
    return "unknown";
}

namespace
{
void require_operators(std::size_t m)
{
    if (m == 0)
        throw ConfigError("schedule needs at least one operator");
}

/// Weight vector with the given leading entries and the remainder on the
/// last index.
WeightVector with_remainder(std::vector<double> leading)
{
    double sum = 0.0;
    for (double v : leading)
        sum += v;
    leading.push_back(1.0 - sum);
    return WeightVector(std::move(leading));
}

double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

WeightSchedule WeightSchedule::constant_uniform(std::size_t m)
{
    require_operators(m);
    return WeightSchedule(ScheduleKind::constant_uniform, m);
}

WeightSchedule WeightSchedule::cyclic_singleton(std::size_t m)
{
    require_operators(m);
    return WeightSchedule(ScheduleKind::cyclic_singleton, m);
}

WeightSchedule WeightSchedule::example46(std::size_t m)
{
    if (m < 2)
        throw ConfigError("example46 schedule requires m > 1");
    return WeightSchedule(ScheduleKind::example46, m);
}

WeightSchedule WeightSchedule::remark44_counterexample(std::size_t m)
{
    if (m < 2)
        throw ConfigError("remark44 counterexample requires m > 1");
    return WeightSchedule(ScheduleKind::remark44_counterexample, m);
}

WeightSchedule WeightSchedule::user_table(std::vector<WeightVector> table)
{
    if (table.empty())
        throw ConfigError("user weight table is empty");
    const std::size_t m = table.front().size();
    for (std::size_t k = 0; k < table.size(); ++k)
        if (table[k].size() != m)
            throw ConfigError(fmt::format("user weight table row {} has {} entries, expected {}", k,
                                          table[k].size(), m));
    WeightSchedule s(ScheduleKind::user_table, m);
    s.table_ = std::move(table);
    return s;
}

WeightSchedule WeightSchedule::example45(std::size_t m, std::size_t s, std::uint64_t seed)
{
    if (m < 2)
        throw ConfigError("example45 schedule requires m > 1");
    if (s == 0 || s % 2 != 0)
        throw ConfigError(fmt::format("example45 window must be a positive even number, got {}", s));
    WeightSchedule out(ScheduleKind::example45, m);
    out.window_ = s;
    out.seed_ = seed;
    return out;
}

std::size_t WeightSchedule::anchor_of_block(std::size_t t) const
{
    if (kind_ != ScheduleKind::example45)
        throw ConfigError("anchor_of_block is defined for example45 schedules only");
    const std::size_t half = window_ / 2;
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(std::uint64_t(t) >> 32)};
    std::mt19937_64 rng(seq);
    return t * half + static_cast<std::size_t>(rng() % half);
}

std::size_t WeightSchedule::floor_witness(std::size_t l) const
{
    if (kind_ != ScheduleKind::example45)
        throw ConfigError("floor_witness is defined for example45 schedules only");
    const std::size_t half = window_ / 2;
    const std::size_t t = l / half + 1;  // strict ceiling of l / half
    return anchor_of_block(t);
}

WeightVector WeightSchedule::at(std::size_t k) const
{
    const double m = static_cast<double>(m_);
    switch (kind_)
    {
    case ScheduleKind::constant_uniform: return WeightVector::uniform(m_);

    case ScheduleKind::cyclic_singleton: return WeightVector::indicator(m_, k % m_);

    case ScheduleKind::example46:
    {
        if (k % m_ == 0)
            return WeightVector::uniform(m_);
        const double kk = static_cast<double>(k);
        return with_remainder(std::vector<double>(m_ - 1, 1.0 / (2.0 * kk * m)));
    }

    case ScheduleKind::remark44_counterexample:
    {
        const double kk = static_cast<double>(k);
        return with_remainder(std::vector<double>(m_ - 1, 1.0 / ((kk + 1.0) * m)));
    }

    case ScheduleKind::user_table:
        if (k >= table_.size())
            throw ConfigError(fmt::format("user weight table exhausted at k = {} (length {})", k,
                                          table_.size()));
        return table_[k];

    case ScheduleKind::example45:
    {
        // Replays block t from its own seed so that at() stays pure.
        const std::size_t half = window_ / 2;
        const std::size_t t = k / half;
        std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                          static_cast<std::uint32_t>(t),
                          static_cast<std::uint32_t>(std::uint64_t(t) >> 32)};
        std::mt19937_64 rng(seq);
        const std::size_t anchor = t * half + static_cast<std::size_t>(rng() % half);
        std::vector<double> leading(m_ - 1, 0.0);
        for (std::size_t j = t * half; j <= k; ++j)
        {
            const bool at_anchor = j == anchor;
            const double lo = at_anchor ? 1.0 / (2.0 * m) : 0.0;
            const double hi = 1.0 / m;
            for (double& v : leading)
                v = lo + (hi - lo) * unit_draw(rng);
        }
        return with_remainder(std::move(leading));
    }
    }
    throw ConfigError("unknown schedule kind");
}

std::optional<IntermittentGuarantee> WeightSchedule::intermittent_guarantee() const
{
    const double m = static_cast<double>(m_);
    switch (kind_)
    {
    case ScheduleKind::constant_uniform: return IntermittentGuarantee{1, 1.0 / m};
    case ScheduleKind::cyclic_singleton: return IntermittentGuarantee{m_, 1.0};
    case ScheduleKind::example45: return IntermittentGuarantee{window_, 1.0 / (2.0 * m)};
    case ScheduleKind::example46: return IntermittentGuarantee{m_, 1.0 / m};
    case ScheduleKind::remark44_counterexample:
    case ScheduleKind::user_table: return std::nullopt;
    }
    return std::nullopt;
}

bool WeightSchedule::guarantees_divergent_sums() const noexcept
{
    // Intermittent floors imply divergence; the counterexample diverges like
    // the harmonic series.
    return kind_ != ScheduleKind::user_table;
}

std::int64_t strict_ceiling(double r)
{
    return static_cast<std::int64_t>(std::floor(r)) + 1;
}

ConditionReport verify_intermittent(const WeightSchedule& s, std::size_t horizon, std::size_t window,
                                    double floor)
{
    if (window == 0)
        throw ConfigError("intermittent window must be >= 1");
    if (horizon < window)
        throw ConfigError(fmt::format("horizon {} is shorter than the window {}", horizon, window));

    const std::size_t m = s.size();
    ConditionReport report;
    report.condition = WeightCondition::intermittent_floor;
    report.horizon = horizon;
    report.window = window;
    report.floor = floor;
    report.witness.assign(m, INFINITY);

    // Sliding-window maximum per index (monotone deque of iteration indices).
    std::vector<std::deque<std::size_t>> queues(m);
    std::vector<std::vector<double>> history(m);
    for (auto& h : history)
        h.reserve(horizon);

    for (std::size_t k = 0; k < horizon; ++k)
    {
        const WeightVector w = s.at(k);
        for (std::size_t i = 0; i < m; ++i)
        {
            history[i].push_back(w[i]);
            auto& q = queues[i];
            while (!q.empty() && history[i][q.back()] <= w[i])
                q.pop_back();
            q.push_back(k);
            if (k + 1 < window)
                continue;
            const std::size_t l = k + 1 - window;
            while (q.front() < l)
                q.pop_front();
            const double window_max = history[i][q.front()];
            report.witness[i] = std::min(report.witness[i], window_max);
            if (window_max < floor && !report.violation)
            {
                report.holds = false;
                report.violation = ConditionReport::Violation{l, i, window_max};
            }
        }
    }
    return report;
}

std::vector<double> partial_sums(const WeightSchedule& s, std::size_t horizon)
{
    std::vector<double> sums(s.size(), 0.0);
    for (std::size_t k = 0; k < horizon; ++k)
    {
        const WeightVector w = s.at(k);
        for (std::size_t i = 0; i < sums.size(); ++i)
            sums[i] += w[i];
    }
    return sums;
}

ConditionReport check_partial_sums(const WeightSchedule& s, std::size_t horizon, double threshold)
{
    ConditionReport report;
    report.condition = WeightCondition::sum_divergence;
    report.horizon = horizon;
    report.floor = threshold;
    report.witness = partial_sums(s, horizon);
    for (std::size_t i = 0; i < report.witness.size(); ++i)
    {
        if (report.witness[i] < threshold)
        {
            report.holds = false;
            report.violation = ConditionReport::Violation{horizon, i, report.witness[i]};
            break;
        }
    }
    return report;
}
}  // namespace cfp
