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

#include "cfp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "cfp/combine.hpp"
#include "cfp/errors.hpp"
#include "cfp/productspace.hpp"

namespace cfp
{
namespace
{
using Rng = std::mt19937_64;

constexpr double kSampleScale = 10.0;

Vector sample_center(const CutterFamily& ops, const std::vector<Vector>& refs)
{
    if (!refs.empty())
        return refs.front();
    for (const auto& op : ops)
        if (auto w = op->witness())
            return *w;
    return Vector(family_dimension(ops), 0.0);
}

Vector random_point(Rng& rng, const Vector& center, double scale)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.0, scale);
    Vector z(center.size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = normal(rng);
    const double len = norm(z);
    if (len > 0.0)
        z *= radius(rng) / len;
    return center + z;
}

// Random support (each index kept with probability 0.7, never empty) and
// exponential weights on it.
WeightVector random_weights(Rng& rng, std::size_t m)
{
    std::bernoulli_distribution keep(0.7);
    std::exponential_distribution<double> mass(1.0);
    std::vector<double> w(m, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (keep(rng))
        {
            w[i] = mass(rng) + 1e-3;
            total += w[i];
        }
    if (total == 0.0)
    {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
        w[j] = 1.0;
        total = 1.0;
    }
    for (auto& v : w)
        v /= total;
    // Absorb rounding so the sum is one to machine precision.
    double sum = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (w[i] > 0.0)
        {
            sum += w[i];
            last = i;
        }
    w[last] = std::max(0.0, w[last] + (1.0 - sum));
    return WeightVector(std::move(w));
}

std::size_t default_window(const WeightSchedule& s, const VerifyOptions& o)
{
    if (o.window)
        return *o.window;
    if (auto g = s.intermittent_guarantee())
        return g->window;
    return s.size();
}

double default_floor(const WeightSchedule& s, const VerifyOptions& o)
{
    if (o.floor)
        return *o.floor;
    if (auto g = s.intermittent_guarantee())
        return g->floor;
    return 1.0 / (2.0 * static_cast<double>(s.size()));
}
}  // namespace

bool VerifyReport::passed() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerifyReport::find(std::string_view name) const noexcept
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

CheckResult check_cutter_axiom(const CutterFamily& ops, const std::vector<Vector>& refs, std::size_t samples,
                               std::uint64_t seed, double tolerance)
{
    Rng rng(seed);
    const Vector center = sample_center(ops, refs);
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t tested = 0;
    std::size_t worst_op = 0;
    for (std::size_t i = 0; i < ops.size(); ++i)
    {
        std::vector<Vector> qs = refs;
        if (auto w = ops[i]->witness())
            qs.push_back(*w);
        if (qs.empty())
            continue;
        for (std::size_t s = 0; s < samples; ++s)
        {
            const Vector x = random_point(rng, center, kSampleScale);
            for (const auto& q : qs)
            {
                const double v = check_cutter_inequality(*ops[i], x, q);
                ++tested;
                if (v > worst)
                {
                    worst = v;
                    worst_op = i;
                }
            }
        }
    }
    CheckResult r{"cutter-inequality", true, ""};
    if (tested == 0)
    {
        r.detail = "no fixed points known; nothing to test";
        return r;
    }
    r.passed = worst <= tolerance;
    r.detail = fmt::format("{} samples, max <x-T(x), q-T(x)> = {:.3e} (operator {})", tested, worst, worst_op);
    return r;
}

CheckResult check_lambda_routes(const CutterFamily& ops, std::size_t samples, std::uint64_t seed,
                                double tolerance)
{
    Rng rng(seed);
    const Vector center = sample_center(ops, {});
    double worst_rel = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    std::size_t compared = 0;
    std::size_t skipped = 0;
    for (std::size_t s = 0; s < samples; ++s)
    {
        const Vector x = random_point(rng, center, kSampleScale);
        const WeightVector w = random_weights(rng, ops.size());
        const CombinationReport rep = combine(ops, w, x);
        if (rep.at_fixed_point || rep.block_residual() < 1e-6)
        {
            ++skipped;
            continue;
        }
        double via_product = 0.0;
        try
        {
            via_product = product::lambda_hat(ops, w, x);
        }
        catch (const AtFixedPointError&)
        {
            ++skipped;
            continue;
        }
        const double via_components = rep.lambda_hat;
        const double rel = std::abs(via_product - via_components) / std::max(via_product, via_components);
        worst_rel = std::max(worst_rel, rel);
        smallest = std::min({smallest, via_product, via_components});
        ++compared;
    }
    CheckResult r{"lambda-hat-routes", true, ""};
    if (compared == 0)
    {
        r.detail = fmt::format("no sample away from the fixed point set ({} skipped)", skipped);
        return r;
    }
    r.passed = worst_rel <= tolerance && smallest >= 1.0 - 1e-12;
    r.detail = fmt::format("{} compared, {} skipped, max relative gap {:.3e}, min lambda-hat {:.15g}", compared,
                           skipped, worst_rel, smallest);
    return r;
}

CheckResult check_diagonal_point(const CutterFamily& ops, std::size_t samples, std::uint64_t seed)
{
    Rng rng(seed);
    const Vector center = sample_center(ops, {});
    double worst_gap = 0.0;
    double worst_offset = 0.0;
    std::size_t compared = 0;
    for (std::size_t s = 0; s < samples; ++s)
    {
        const Vector x = random_point(rng, center, kSampleScale);
        const WeightVector w = random_weights(rng, ops.size());
        const CombinationReport rep = combine(ops, w, x);
        if (rep.at_fixed_point || rep.block_residual() < 1e-6 || rep.capped)
            continue;
        try
        {
            const Vector b = product::b_w(ops, w, x).base;
            const Vector relaxed = apply_relaxed(ops, w, rep.lambda_hat, x);
            worst_gap = std::max(worst_gap, distance(b, relaxed) / (1.0 + norm(relaxed)));
            const double scale = rep.weighted_displacement * (1.0 + rep.lambda_hat);
            worst_offset = std::max(worst_offset, std::abs(product::hyperplane_offset(ops, w, x)) / scale);
            ++compared;
        }
        catch (const AtFixedPointError&)
        {
        }
    }
    CheckResult r{"diagonal-point", worst_gap <= 1e-10 && worst_offset <= 1e-10, ""};
    r.detail = fmt::format("{} compared, max |b_w - T_(w,lambda-hat)| {:.3e}, max hyperplane offset {:.3e}", compared,
                           worst_gap, worst_offset);
    return r;
}

CheckResult check_nesting(const CutterFamily& ops, const std::vector<Vector>& refs, std::size_t samples,
                          std::uint64_t seed, double slack)
{
    Rng rng(seed);
    const Vector center = sample_center(ops, refs);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t nesting_tests = 0;
    std::size_t chain_tests = 0;
    std::size_t violations = 0;
    std::string first;

    auto note = [&](std::string what) {
        ++violations;
        if (first.empty())
            first = std::move(what);
    };

    for (std::size_t s = 0; s < samples; ++s)
    {
        const Vector x = random_point(rng, center, kSampleScale);
        const WeightVector w = random_weights(rng, ops.size());
        const CombinationReport rep = combine(ops, w, x);
        if (rep.at_fixed_point)
            continue;
        const Vector& d = rep.direction;
        const double d_sq = rep.combined_displacement;

        const double top = 2.0 * rep.lambda_hat;
        const double lambda1 = top * (1e-3 + unit(rng)) / 1.001;
        const double lambda2 = lambda1 + (top - lambda1) * (1e-3 + unit(rng));
        const HalfspaceSet h1{x, x + lambda1 * d};
        const HalfspaceSet h2{x, x + lambda2 * d};

        // A point of H(x, x + lambda2 d): shift a random point along d until
        // <d, u - x> >= lambda2 |d|^2.
        Vector u = random_point(rng, x, kSampleScale * (1.0 + lambda2 * std::sqrt(d_sq)));
        const double shortfall = lambda2 * d_sq - inner(d, u - x);
        if (shortfall > 0.0)
            axpy(shortfall / d_sq * (1.0 + unit(rng)), d, u);
        ++nesting_tests;
        if (!halfspace_contains(h1, u, slack * (1.0 + norm(h1.anchor - h1.image) * norm(u - h1.image))))
            note(fmt::format("nesting at sample {}: lambda1 {:.6g} < lambda2 {:.6g}, margin {:.3e}", s, lambda1,
                             lambda2, h1.margin(u)));

        const HalfspaceSet deep{x, x + rep.lambda_hat * d};
        const HalfspaceSet shallow{x, rep.t_w};
        for (std::size_t r = 0; r < refs.size(); ++r)
        {
            ++chain_tests;
            const Vector& q = refs[r];
            const double deep_slack = slack * (1.0 + norm(deep.anchor - deep.image) * norm(q - deep.image));
            const double shallow_slack = slack * (1.0 + norm(shallow.anchor - shallow.image) * norm(q - shallow.image));
            if (!halfspace_contains(deep, q, deep_slack))
                note(fmt::format("reference {} outside H(x, T_(w,lambda-hat) x) at sample {}, margin {:.3e}", r, s,
                                 deep.margin(q)));
            else if (!halfspace_contains(shallow, q, shallow_slack))
                note(fmt::format("reference {} outside H(x, T_w x) at sample {}, margin {:.3e}", r, s,
                                 shallow.margin(q)));
        }
    }
    CheckResult r{"halfspace-nesting", violations == 0, ""};
    r.detail = fmt::format("{} nesting and {} inclusion tests, {} violations", nesting_tests, chain_tests, violations);
    if (!first.empty())
        r.detail += "; first: " + first;
    return r;
}

CheckResult check_intermittent(const WeightSchedule& schedule, std::size_t horizon, std::size_t window, double floor)
{
    const ConditionReport rep = verify_intermittent(schedule, horizon, window, floor);
    CheckResult r{"intermittent-floor", rep.holds, ""};
    if (rep.holds)
    {
        const double worst = *std::min_element(rep.witness.begin(), rep.witness.end());
        r.detail = fmt::format("{}: window {} floor {:.6g} holds on horizon {} (weakest window max {:.6g})",
                               to_string(schedule.kind()), window, floor, horizon, worst);
    }
    else
    {
        const auto& v = *rep.violation;
        r.detail = fmt::format("{}: window {} floor {:.6g} fails on horizon {}; witness (k={}, i={}): max weight "
                               "{:.6g} in iterations {}..{}",
                               to_string(schedule.kind()), window, floor, horizon, v.k, v.index, v.observed, v.k,
                               v.k + window - 1);
    }
    return r;
}

CheckResult check_divergent_sums(const WeightSchedule& schedule, std::size_t horizon)
{
    CheckResult r{"partial-sums", true, ""};
    if (auto g = schedule.intermittent_guarantee())
    {
        // A window floor forces growth of at least alpha per window.
        const double threshold = g->floor * static_cast<double>(horizon / g->window);
        const ConditionReport rep = check_partial_sums(schedule, horizon, threshold * (1.0 - 1e-12));
        const double least = *std::min_element(rep.witness.begin(), rep.witness.end());
        r.passed = rep.holds;
        r.detail = fmt::format("min partial sum {:.6g} over {} iterations, required {:.6g}", least, horizon,
                               threshold);
        return r;
    }
    const std::vector<double> sums = partial_sums(schedule, horizon);
    const double least = *std::min_element(sums.begin(), sums.end());
    r.detail = fmt::format("min partial sum {:.6g} over {} iterations ({})", least, horizon,
                           schedule.guarantees_divergent_sums() ? "divergence known analytically"
                                                                : "divergence not claimed");
    return r;
}

CheckResult check_fejer(const FejerAudit& audit)
{
    CheckResult r{"fejer-audit", audit.passed(), ""};
    r.detail = fmt::format("{} steps, {} reference points, {} violations", audit.steps_checked, audit.references,
                           audit.violations.size());
    if (const FejerViolation* v = audit.first())
        r.detail += fmt::format("; first: {} at k={} ref {} ({:.17g} > {:.17g})", to_string(v->check), v->k,
                                v->ref_index, v->lhs, v->rhs);
    return r;
}

VerifyReport verify_problem(const ProblemSpec& problem, const RunConfig& config, const VerifyOptions& options)
{
    VerifyReport report;
    const CutterFamily& ops = problem.operators;
    const auto& refs = problem.reference_points;

    auto guarded = [&](const char* name, auto&& body) {
        try
        {
            report.checks.push_back(body());
        }
        catch (const Error& e)
        {
            report.checks.push_back(CheckResult{name, false, e.what()});
        }
    };

    guarded("cutter-inequality", [&] {
        return check_cutter_axiom(ops, refs, options.samples, options.seed,
                                  1e-12 * (1.0 + kSampleScale * kSampleScale));
    });
    guarded("lambda-hat-routes", [&] { return check_lambda_routes(ops, options.samples, options.seed + 1); });
    guarded("diagonal-point", [&] { return check_diagonal_point(ops, options.samples, options.seed + 2); });
    guarded("halfspace-nesting", [&] { return check_nesting(ops, refs, options.samples, options.seed + 3); });

    SolverConfig solver;
    try
    {
        solver = config.solver_config(problem);
    }
    catch (const Error& e)
    {
        report.checks.push_back(CheckResult{"config", false, e.what()});
        return report;
    }

    guarded("solve", [&] {
        const SolveResult result = run(ops, config.start(problem), solver);
        report.checks.push_back(check_fejer(fejer_audit(result.trace, refs, solver.tau1, solver.tau2)));
        CheckResult r{"solve", result.status != SolveStatus::error, ""};
        r.detail = fmt::format("status {}, {} iterations, residual {:.3e}", to_string(result.status),
                               result.iterations, result.final_residual);
        if (!result.message.empty())
            r.detail += ": " + result.message;
        return r;
    });

    const WeightSchedule& schedule = solver.schedule;
    std::size_t horizon = options.horizon;
    if (schedule.kind() == ScheduleKind::user_table)
        horizon = std::min(horizon, schedule.table().size());
    const std::size_t window = default_window(schedule, options);
    guarded("intermittent-floor", [&] {
        return check_intermittent(schedule, std::max(horizon, window), window, default_floor(schedule, options));
    });
    guarded("partial-sums", [&] { return check_divergent_sums(schedule, horizon); });
    return report;
}

VerifyReport verify_trace(const StoredTrace& trace)
{
    VerifyReport report;
    report.checks.push_back(check_fejer(fejer_audit(trace.records, trace.references, trace.tau1, trace.tau2)));
    return report;
}

void print_report(std::ostream& os, const VerifyReport& report)
{
    for (const auto& c : report.checks)
        os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}
}  // namespace cfp
