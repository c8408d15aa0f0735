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

#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "cfp/combine.hpp"
#include "cfp/errors.hpp"
#include "cfp/instances.hpp"
#include "cfp/solver.hpp"
#include "support.hpp"

using namespace cfp;

namespace
{
CutterFamily two_hyperplanes()
{
    return {std::make_shared<Hyperplane>(Vector{0.0, 1.0}, 0.0), std::make_shared<Hyperplane>(Vector{1.0, 0.0}, 0.0)};
}

SolverConfig uniform_config(std::size_t m, LambdaPolicy policy = LambdaPolicy::max_extrapolation())
{
    SolverConfig c;
    c.schedule = WeightSchedule::constant_uniform(m);
    c.policy = policy;
    return c;
}

bool has_check(const FejerAudit& a, FejerCheck check, std::size_t k)
{
    return std::any_of(a.violations.begin(), a.violations.end(),
                       [&](const FejerViolation& v) { return v.check == check && v.k == k; });
}
}  // namespace

TEST_CASE("lambda policies")
{
    CHECK(choose_lambda(LambdaPolicy::max_extrapolation(), 1.0, 1.0, 2.0) == 2.0);
    CHECK(choose_lambda(LambdaPolicy::max_extrapolation(), 1.0, 0.5, 2.0) == 3.0);
    CHECK(choose_lambda(LambdaPolicy::fixed(1.0), 1.0, 1.0, 7.0) == 1.0);
    CHECK(choose_lambda(LambdaPolicy::fraction(1.0), 1.0, 1.0, 1.0) == 1.0);
    CHECK(choose_lambda(LambdaPolicy::fraction(0.1), 0.5, 1.0, 2.0) == 0.5);

    CHECK(lambda_admissible(1.0, 1.0, 1.0, 1.0));
    CHECK(lambda_admissible(2.0, 1.0, 1.0, 2.0));
    CHECK_FALSE(lambda_admissible(2.1, 1.0, 1.0, 2.0));
    CHECK_FALSE(lambda_admissible(0.9, 1.0, 1.0, 2.0));

    testing::Rng rng(41);
    for (int trial = 0; trial < 500; ++trial)
    {
        const double tau1 = testing::uniform(rng, 0.01, 1.0);
        const double tau2 = testing::uniform(rng, 0.01, 1.0);
        const double gain = 1.0 + testing::uniform(rng, 0.0, 50.0);
        for (const auto& p : {LambdaPolicy::max_extrapolation(), LambdaPolicy::fraction(testing::uniform(rng, 0.01, 1.0))})
            CHECK(lambda_admissible(choose_lambda(p, tau1, tau2, gain), tau1, tau2, gain));
    }
}

TEST_CASE("config validation")
{
    SolverConfig c = uniform_config(2);
    CHECK_NOTHROW(c.validate(2));
    CHECK_THROWS_AS(c.validate(3), ConfigError);
    c.tau1 = 0.0;
    CHECK_THROWS_AS(c.validate(2), ConfigError);
    c = uniform_config(2, LambdaPolicy::fixed(1.5));
    CHECK_THROWS_AS(c.validate(2), ConfigError);
    c.tau2 = 0.5;
    CHECK_NOTHROW(c.validate(2));
    c = uniform_config(2, LambdaPolicy::fraction(1.5));
    CHECK_THROWS_AS(c.validate(2), ConfigError);
    c = uniform_config(2);
    c.residual_tolerance = 0.0;
    CHECK_THROWS_AS(c.validate(2), ConfigError);
}

TEST_CASE("one step on two coordinate hyperplanes")
{
    const auto ops = two_hyperplanes();
    const WeightVector w({0.5, 0.5});
    CHECK(step(ops, Vector{1.0, 1.0}, w, 2.0, 1.0, 1.0) == Vector{0.0, 0.0});
    CHECK(step(ops, Vector{1.0, 1.0}, w, 1.0, 1.0, 1.0) == Vector{0.5, 0.5});
    CHECK_THROWS_AS((step(ops, Vector{1.0, 1.0}, w, 2.5, 1.0, 1.0)), ConfigError);
    CHECK_THROWS_AS((step(ops, Vector{1.0, 1.0}, w, 0.5, 1.0, 1.0)), ConfigError);
    CHECK(step(ops, Vector{0.0, 0.0}, w, 1.0, 1.0, 1.0) == Vector{0.0, 0.0});
}

TEST_CASE("solver on two coordinate hyperplanes")
{
    const auto ops = two_hyperplanes();
    SolverConfig c = uniform_config(2);
    c.reference_points = {Vector{0.0, 0.0}};
    const SolveResult r = run(ops, Vector{1.0, 1.0}, c);
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations == 1);
    CHECK(r.final_point == Vector{0.0, 0.0});
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].lambda == 2.0);
    CHECK(r.trace[0].gain == 2.0);
    CHECK(r.trace[0].block == std::vector<std::size_t>{0, 1});
    CHECK(fejer_audit(r.trace, c.reference_points, 1.0, 1.0).passed());

    const SolveResult classical = run(ops, Vector{1.0, 1.0}, uniform_config(2, LambdaPolicy::fixed(1.0)));
    CHECK(classical.status == SolveStatus::converged);
    CHECK(classical.trace[1].x == Vector{0.5, 0.5});
}

TEST_CASE("start at a common fixed point")
{
    const SolveResult r = run(two_hyperplanes(), Vector{0.0, 0.0}, uniform_config(2));
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations == 0);
    CHECK(r.trace.empty());
}

TEST_CASE("random half-spaces with interior converge with plain projections")
{
    testing::Rng rng(42);
    for (int trial = 0; trial < 5; ++trial)
    {
        InstanceOptions o;
        o.dimension = 5;
        o.operators = 10;
        o.geometry = Geometry::halfspaces;
        o.interior_radius = 0.1;
        o.seed = rng();
        const Instance inst = generate_instance(o);
        SolverConfig c = uniform_config(10, LambdaPolicy::fixed(1.0));
        c.max_iterations = 10000;
        c.reference_points = inst.references;
        const SolveResult r = run(inst.ops, inst.start, c);
        CHECK(r.status == SolveStatus::converged);
        CHECK(max_residual(inst.ops, r.final_point) <= 1e-8);
        CHECK(fejer_audit(r.trace, inst.references, 1.0, 1.0).passed());
    }
}

TEST_CASE("run invariants on generated instances")
{
    testing::Rng rng(43);
    const LambdaPolicy policies[] = {LambdaPolicy::fixed(1.0), LambdaPolicy::max_extrapolation(),
                                     LambdaPolicy::fraction(0.5)};
    for (int trial = 0; trial < 12; ++trial)
    {
        InstanceOptions o;
        o.dimension = 3 + testing::index(rng, 8);
        o.operators = 2 + testing::index(rng, 6);
        o.geometry = Geometry::mixed;
        o.interior_radius = trial % 2 ? 0.2 : 0.0;
        o.seed = rng();
        const Instance inst = generate_instance(o);
        const std::size_t m = inst.ops.size();
        for (const auto& policy : policies)
        {
            SolverConfig c;
            c.policy = policy;
            c.schedule = trial % 3 == 0 ? WeightSchedule::cyclic_singleton(m) : WeightSchedule::example46(m);
            c.reference_points = inst.references;
            const SolveResult r = run(inst.ops, inst.start, c);
            REQUIRE(r.status == SolveStatus::converged);
            CHECK(r.final_residual <= c.residual_tolerance);
            CHECK(max_residual(inst.ops, r.final_point) <= c.residual_tolerance);
            CHECK(fejer_audit(r.trace, inst.references, c.tau1, c.tau2).passed());

            for (const auto& rec : r.trace)
            {
                CHECK(lambda_admissible(rec.lambda, c.tau1, c.tau2, rec.gain));
                CHECK(rec.block == c.schedule.at(rec.k).support());
            }

            // Step norms vanish.
            const std::size_t steps = r.trace.size();
            if (steps >= 20)
            {
                const std::size_t decile = steps / 10;
                double head = 0.0;
                double tail = 0.0;
                for (std::size_t j = 0; j < decile; ++j)
                {
                    head += r.trace[j].step_norm;
                    tail += r.trace[steps - 1 - j].step_norm;
                }
                CHECK(tail < head);
            }

            // Bounded gaps over the final quarter.
            const std::size_t start = steps - steps / 4;
            double max_step = 0.0;
            for (std::size_t j = start; j < steps; ++j)
                max_step = std::max(max_step, r.trace[j].step_norm);
            for (std::size_t b = 1; b <= 10; ++b)
                for (std::size_t j = start; j + b < steps; ++j)
                    CHECK(distance(r.trace[j + b].x, r.trace[j].x) <=
                          static_cast<double>(b) * max_step * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("a solved block leaves the iterate in place")
{
    // x lies on the first hyperplane only; the cyclic schedule visits it first.
    const auto ops = two_hyperplanes();
    SolverConfig c;
    c.schedule = WeightSchedule::cyclic_singleton(2);
    c.residual_check_stride = 100;
    const SolveResult r = run(ops, Vector{3.0, 0.0}, c);
    CHECK(r.status == SolveStatus::converged);
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[0].step_norm == 0.0);
    CHECK(r.trace[0].direction == Vector{0.0, 0.0});
    CHECK(r.trace[1].x == Vector{3.0, 0.0});
    CHECK(r.final_point == Vector{0.0, 0.0});
}

TEST_CASE("single operator: both policies coincide when tau2 is one")
{
    const CutterFamily ops{std::make_shared<Ball>(Vector{1.0, 2.0, 3.0}, 0.5)};
    const SolveResult a = run(ops, Vector{5.0, 5.0, 5.0}, uniform_config(1, LambdaPolicy::fixed(1.0)));
    const SolveResult b = run(ops, Vector{5.0, 5.0, 5.0}, uniform_config(1));
    CHECK(a.status == SolveStatus::converged);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t j = 0; j < a.trace.size(); ++j)
    {
        CHECK(a.trace[j].x == b.trace[j].x);
        CHECK(a.trace[j].lambda == b.trace[j].lambda);
    }
    CHECK(fejer_audit(a.trace, {Vector{1.0, 2.0, 3.0}}, 1.0, 1.0).passed());
}

TEST_CASE("fault injection: an inflated lambda is caught at the corrupted step")
{
    InstanceOptions o;
    o.dimension = 6;
    o.operators = 6;
    o.seed = 5;
    const Instance inst = generate_instance(o);
    SolverConfig c = uniform_config(6, LambdaPolicy::fixed(1.0));
    c.reference_points = inst.references;
    const SolveResult r = run(inst.ops, inst.start, c);
    REQUIRE(r.trace.size() > 4);
    REQUIRE(fejer_audit(r.trace, inst.references, 1.0, 1.0).passed());

    std::vector<IterationRecord> bad = r.trace;
    const std::size_t j = bad.size() / 2;
    // Large enough that |lambda d| >= 3 |x - q|, so every reference moves away.
    double reach = 0.0;
    for (const Vector& q : inst.references)
        reach = std::max(reach, distance(bad[j].x, q));
    bad[j].lambda = std::max(3.0 * bad[j].gain, 3.0 * reach / norm(bad[j].direction));
    const FejerAudit a = fejer_audit(bad, inst.references, 1.0, 1.0);
    CHECK_FALSE(a.passed());
    CHECK(has_check(a, FejerCheck::lambda_interval, bad[j].k));
    CHECK(has_check(a, FejerCheck::weighted_decrease, bad[j].k));
    CHECK(has_check(a, FejerCheck::continuity, bad[j].k));
}

TEST_CASE("step-decrease bound with tau2 below one")
{
    // One half-space, q its foot point. With d = P(x) - x the relaxed point is
    // x + lambda d and |x + lambda d - q|^2 = (1 - lambda)^2 |d|^2. The bound
    // |x - q|^2 - tau2 lambda^2 |d|^2 requires lambda (1 + tau2) <= 2, which
    // admissible lambda up to 2 - tau2 exceeds whenever tau2 < 1.
    const CutterFamily ops{std::make_shared<Halfspace>(Vector{1.0, 0.0}, 0.0)};
    const double tau2 = 0.5;
    SolverConfig c = uniform_config(1, LambdaPolicy::fixed(1.5));
    c.tau2 = tau2;
    c.max_iterations = 1;
    const Vector q{0.0, 0.0};
    const SolveResult r = run(ops, Vector{1.0, 0.0}, c);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.final_point[0] == doctest::Approx(-0.5));

    const FejerAudit a = fejer_audit(r.trace, {q}, 1.0, tau2);
    CHECK(has_check(a, FejerCheck::step_decrease, 0));
    CHECK_FALSE(has_check(a, FejerCheck::monotone, 0));
    CHECK_FALSE(has_check(a, FejerCheck::weighted_decrease, 0));

    // The sharp coefficient min(1, (2 - alpha) / alpha), alpha = lambda / L, holds.
    const double alpha = 1.5 / r.trace[0].gain;
    const double coeff = std::min(1.0, (2.0 - alpha) / alpha);
    CHECK(squared_distance(r.final_point, q) <=
          squared_distance(r.trace[0].x, q) - coeff * r.trace[0].step_norm * r.trace[0].step_norm + 1e-15);

    // Within lambda (1 + tau2) <= 2 the stated bound holds.
    c.policy = LambdaPolicy::fixed(2.0 / (1.0 + tau2));
    const SolveResult ok = run(ops, Vector{1.0, 0.0}, c);
    CHECK(fejer_audit(ok.trace, {q}, 1.0, tau2).passed());
}

TEST_CASE("trace thinning")
{
    CHECK(retain_record(0, 4));
    CHECK(retain_record(3, 4));
    CHECK(retain_record(4, 4));
    CHECK_FALSE(retain_record(5, 4));
    CHECK(retain_record(6, 4));
    CHECK_FALSE(retain_record(10, 4));
    CHECK(retain_record(12, 4));
    CHECK(retain_record(16, 4));
    CHECK_FALSE(retain_record(20, 4));

    // remark44 weights keep the run going long enough to thin.
    InstanceOptions o;
    o.dimension = 4;
    o.operators = 4;
    o.seed = 3;
    const Instance inst = generate_instance(o);
    SolverConfig c;
    c.policy = LambdaPolicy::fixed(1.0);
    c.schedule = WeightSchedule::remark44_counterexample(4);
    c.max_iterations = 3000;
    c.full_trace_limit = 50;
    c.reference_points = inst.references;
    const SolveResult r = run(inst.ops, inst.start, c);
    REQUIRE(r.trace.size() >= 2);
    for (std::size_t j = 0; j + 1 < r.trace.size(); ++j)
        CHECK(retain_record(r.trace[j].k, 50));
    CHECK(r.trace.back().k + 1 == r.iterations);
    CHECK(r.trace.size() < r.iterations);
    CHECK(fejer_audit(r.trace, inst.references, 1.0, 1.0).passed());
}

TEST_CASE("evaluation failures end the run with status error")
{
    const auto bad = std::make_shared<SubgradientProjection>(
        1, [](const Vector& x) { return x[0] > 2.0 ? std::nan("") : x[0] - 1.0; },
        [](const Vector&) { return Vector{1.0}; });
    const CutterFamily ops{bad, std::make_shared<Halfspace>(Vector{-1.0}, -10.0)};
    SolverConfig c;
    c.schedule = WeightSchedule::cyclic_singleton(2);
    const SolveResult r = run(ops, Vector{0.0}, c);
    CHECK(r.status == SolveStatus::error);
    CHECK_FALSE(r.message.empty());
}

TEST_CASE("dimension errors are reported before iterating")
{
    CHECK_THROWS_AS((run(two_hyperplanes(), Vector{1.0}, uniform_config(2))), DimensionError);
}
