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

#include "cfp/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "cfp/errors.hpp"

using nlohmann::json;

namespace cfp
{
namespace
{
const json& require(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw LoadError(fmt::format("{}: missing field '{}'", where, key));
    return j.at(key);
}

double real_field(const json& j, const char* key, const std::string& where)
{
    const json& v = require(j, key, where);
    if (!v.is_number())
        throw LoadError(fmt::format("{}: field '{}' must be a number", where, key));
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw LoadError(fmt::format("{}: field '{}' must be finite", where, key));
    return d;
}

Vector vector_value(const json& v, const std::string& where)
{
    if (!v.is_array())
        throw LoadError(fmt::format("{}: expected an array of numbers", where));
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v)
    {
        if (!e.is_number())
            throw LoadError(fmt::format("{}: expected an array of numbers", where));
        out.push_back(e.get<double>());
    }
    Vector x(std::move(out));
    if (!all_finite(x))
        throw LoadError(fmt::format("{}: entries must be finite", where));
    return x;
}

Vector vector_field(const json& j, const char* key, const std::string& where, std::size_t dimension)
{
    Vector v = vector_value(require(j, key, where), fmt::format("{}.{}", where, key));
    if (dimension != 0 && v.size() != dimension)
        throw LoadError(fmt::format("{}: field '{}' has dimension {}, expected {}", where, key, v.size(),
                                    dimension));
    return v;
}

json vector_json(const Vector& v) { return json(v.std_vector()); }

std::uint64_t seed_value(const json& v, const std::string& where)
{
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw LoadError(fmt::format("{}: seed must be a nonnegative integer", where));
    return v.get<std::uint64_t>();
}

std::string_view level_form_name(LevelFunction::Form f)
{
    switch (f)
    {
    case LevelFunction::Form::squared_distance: return "squared-distance";
    case LevelFunction::Form::l1_distance: return "l1-distance";
    case LevelFunction::Form::max_affine: return "max-affine";
    }
    return "unknown";
}

ScheduleKind schedule_kind_from(const std::string& name)
{
    for (auto k : {ScheduleKind::constant_uniform, ScheduleKind::cyclic_singleton, ScheduleKind::example45,
                   ScheduleKind::example46, ScheduleKind::remark44_counterexample, ScheduleKind::user_table})
        if (to_string(k) == name)
            return k;
    throw LoadError(fmt::format("unknown schedule kind '{}'", name));
}
}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

// ---------------------------------------------------------------------------
// Operators

CutterPtr cutter_from_json(const json& j, std::size_t dimension)
{
    const std::string where = "operator";
    const json& kind_json = require(j, "kind", where);
    if (!kind_json.is_string())
        throw LoadError("operator: 'kind' must be a string");
    const std::string kind = kind_json.get<std::string>();
    const std::string at = fmt::format("operator '{}'", kind);

    try
    {
        if (kind == "halfspace")
            return std::make_shared<Halfspace>(vector_field(j, "normal", at, dimension),
                                               real_field(j, "offset", at));
        if (kind == "hyperplane")
            return std::make_shared<Hyperplane>(vector_field(j, "normal", at, dimension),
                                                real_field(j, "offset", at));
        if (kind == "ball")
            return std::make_shared<Ball>(vector_field(j, "center", at, dimension), real_field(j, "radius", at));
        if (kind == "box")
            return std::make_shared<Box>(vector_field(j, "lower", at, dimension),
                                         vector_field(j, "upper", at, dimension));
        if (kind == "affine")
        {
            const json& rows = require(j, "rows", at);
            if (!rows.is_array())
                throw LoadError(at + ": 'rows' must be an array of arrays");
            std::vector<Vector> a;
            for (const auto& r : rows)
            {
                a.push_back(vector_value(r, at + ".rows"));
                if (a.back().size() != dimension)
                    throw LoadError(fmt::format("{}: row has dimension {}, expected {}", at, a.back().size(),
                                                dimension));
            }
            return std::make_shared<AffineSubspace>(std::move(a), vector_field(j, "rhs", at, 0));
        }
        if (kind == "subgradient")
        {
            const json& fn = require(j, "function", at);
            const std::string form = fn.is_string() ? fn.get<std::string>() : "";
            LevelFunction d;
            if (form == "squared-distance" || form == "l1-distance")
            {
                d.form = form == "squared-distance" ? LevelFunction::Form::squared_distance
                                                    : LevelFunction::Form::l1_distance;
                d.center = vector_field(j, "center", at, dimension);
                d.radius = real_field(j, "radius", at);
            }
            else if (form == "max-affine")
            {
                d.form = LevelFunction::Form::max_affine;
                const json& normals = require(j, "normals", at);
                if (!normals.is_array())
                    throw LoadError(at + ": 'normals' must be an array of arrays");
                for (const auto& a : normals)
                {
                    d.normals.push_back(vector_value(a, at + ".normals"));
                    if (d.normals.back().size() != dimension)
                        throw LoadError(fmt::format("{}: normal has dimension {}, expected {}", at,
                                                    d.normals.back().size(), dimension));
                }
                d.offsets = vector_field(j, "offsets", at, 0).std_vector();
            }
            else
            {
                throw LoadError(fmt::format("{}: unknown function '{}'", at, form));
            }
            return std::make_shared<SubgradientProjection>(std::move(d));
        }
        if (kind == "average")
        {
            const json& members = require(j, "operators", at);
            if (!members.is_array())
                throw LoadError(at + ": 'operators' must be an array");
            CutterFamily family;
            for (const auto& member : members)
                family.push_back(cutter_from_json(member, dimension));
            WeightVector w(vector_field(j, "weights", at, 0).std_vector());
            std::optional<Vector> witness;
            if (j.contains("witness"))
                witness = vector_field(j, "witness", at, dimension);
            return std::make_shared<BlockAverage>(std::move(family), std::move(w), std::move(witness));
        }
    }
    catch (const LoadError&)
    {
        throw;
    }
    catch (const Error& e)
    {
        throw LoadError(fmt::format("{}: {}", at, e.what()));
    }
    throw LoadError(fmt::format("unknown operator kind '{}'", kind));
}

json cutter_to_json(const Cutter& op)
{
    json j;
    j["kind"] = std::string(to_string(op.kind()));
    if (const auto* h = dynamic_cast<const Halfspace*>(&op))
    {
        j["normal"] = vector_json(h->normal());
        j["offset"] = h->offset();
    }
    else if (const auto* p = dynamic_cast<const Hyperplane*>(&op))
    {
        j["normal"] = vector_json(p->normal());
        j["offset"] = p->offset();
    }
    else if (const auto* b = dynamic_cast<const Ball*>(&op))
    {
        j["center"] = vector_json(b->center());
        j["radius"] = b->radius();
    }
    else if (const auto* x = dynamic_cast<const Box*>(&op))
    {
        j["lower"] = vector_json(x->lower());
        j["upper"] = vector_json(x->upper());
    }
    else if (const auto* a = dynamic_cast<const AffineSubspace*>(&op))
    {
        json rows = json::array();
        for (const auto& r : a->rows())
            rows.push_back(vector_json(r));
        j["rows"] = rows;
        j["rhs"] = vector_json(a->rhs());
    }
    else if (const auto* s = dynamic_cast<const SubgradientProjection*>(&op))
    {
        if (!s->description())
            throw ConfigError("subgradient projection built from function handles cannot be serialized");
        const LevelFunction& d = *s->description();
        j["function"] = std::string(level_form_name(d.form));
        if (d.form == LevelFunction::Form::max_affine)
        {
            json normals = json::array();
            for (const auto& a : d.normals)
                normals.push_back(vector_json(a));
            j["normals"] = normals;
            j["offsets"] = d.offsets;
        }
        else
        {
            j["center"] = vector_json(d.center);
            j["radius"] = d.radius;
        }
    }
    else if (const auto* avg = dynamic_cast<const BlockAverage*>(&op))
    {
        json members = json::array();
        for (const auto& m : avg->members())
            members.push_back(cutter_to_json(*m));
        j["operators"] = members;
        j["weights"] = avg->weights().values();
        if (auto wit = avg->witness())
            j["witness"] = vector_json(*wit);
    }
    else
    {
        throw ConfigError("operator type cannot be serialized");
    }
    return j;
}

// ---------------------------------------------------------------------------
// Problems

ProblemSpec problem_from_json(const json& j)
{
    if (!j.is_object())
        throw LoadError("problem: top level must be an object");
    ProblemSpec spec;
    if (j.contains("name"))
        spec.name = j.at("name").is_string() ? j.at("name").get<std::string>() : "";
    if (j.contains("seed"))
        spec.seed = seed_value(j.at("seed"), "problem");

    const json& dim = require(j, "dimension", "problem");
    if (!dim.is_number_integer() || dim.get<std::int64_t>() < 1)
        throw LoadError("problem: 'dimension' must be a positive integer");
    spec.dimension = dim.get<std::size_t>();

    const json& ops = require(j, "operators", "problem");
    if (!ops.is_array() || ops.empty())
        throw LoadError("problem: 'operators' must be a nonempty array");
    for (std::size_t i = 0; i < ops.size(); ++i)
    {
        try
        {
            spec.operators.push_back(cutter_from_json(ops[i], spec.dimension));
        }
        catch (const LoadError& e)
        {
            throw LoadError(fmt::format("problem: operator {}: {}", i, e.what()));
        }
    }

    if (j.contains("reference_points"))
    {
        const json& refs = j.at("reference_points");
        if (!refs.is_array())
            throw LoadError("problem: 'reference_points' must be an array");
        for (std::size_t r = 0; r < refs.size(); ++r)
        {
            Vector q = vector_value(refs[r], fmt::format("problem: reference point {}", r));
            if (q.size() != spec.dimension)
                throw LoadError(fmt::format("problem: reference point {} has dimension {}, expected {}", r,
                                            q.size(), spec.dimension));
            for (std::size_t i = 0; i < spec.operators.size(); ++i)
            {
                double res = 0.0;
                try
                {
                    res = fixed_point_residual(*spec.operators[i], q);
                }
                catch (const Error& e)
                {
                    throw LoadError(fmt::format("problem: reference point {} cannot be evaluated by operator {} ({}): {}",
                                                r, i, to_string(spec.operators[i]->kind()), e.what()));
                }
                if (res > kReferenceTolerance)
                    throw LoadError(fmt::format(
                        "problem: reference point {} is not a fixed point of operator {} ({}): residual {:.3g}", r,
                        i, to_string(spec.operators[i]->kind()), res));
            }
            spec.reference_points.push_back(std::move(q));
        }
    }
    return spec;
}

json problem_to_json(const ProblemSpec& spec)
{
    json j;
    j["name"] = spec.name;
    if (spec.seed)
        j["seed"] = *spec.seed;
    j["dimension"] = spec.dimension;
    json ops = json::array();
    for (const auto& op : spec.operators)
        ops.push_back(cutter_to_json(*op));
    j["operators"] = ops;
    json refs = json::array();
    for (const auto& q : spec.reference_points)
        refs.push_back(vector_json(q));
    j["reference_points"] = refs;
    return j;
}

namespace
{
json read_json_file(const std::filesystem::path& path, const char* what)
{
    std::ifstream in(path);
    if (!in)
        throw LoadError(fmt::format("cannot open {} file '{}'", what, path.string()));
    try
    {
        return json::parse(in);
    }
    catch (const json::exception& e)
    {
        throw LoadError(fmt::format("{} file '{}' is not valid JSON: {}", what, path.string(), e.what()));
    }
}
}  // namespace

ProblemSpec load_problem(const std::filesystem::path& path)
{
    try
    {
        return problem_from_json(read_json_file(path, "problem"));
    }
    catch (const json::exception& e)
    {
        throw LoadError(fmt::format("problem '{}': {}", path.string(), e.what()));
    }
}

void save_problem(const std::filesystem::path& path, const ProblemSpec& spec)
{
    std::ofstream out(path);
    if (!out)
        throw LoadError(fmt::format("cannot write '{}'", path.string()));
    out << problem_to_json(spec).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Run configs

WeightSchedule ScheduleSpec::build(std::size_t m) const
{
    switch (kind)
    {
    case ScheduleKind::constant_uniform: return WeightSchedule::constant_uniform(m);
    case ScheduleKind::cyclic_singleton: return WeightSchedule::cyclic_singleton(m);
    case ScheduleKind::example46: return WeightSchedule::example46(m);
    case ScheduleKind::remark44_counterexample: return WeightSchedule::remark44_counterexample(m);
    case ScheduleKind::example45:
        if (!seed)
            throw ConfigError("example45 schedule requires a seed");
        return WeightSchedule::example45(m, window, *seed);
    case ScheduleKind::user_table:
    {
        std::vector<WeightVector> rows;
        for (const auto& r : table)
            rows.emplace_back(r);
        WeightSchedule s = WeightSchedule::user_table(std::move(rows));
        if (s.size() != m)
            throw ConfigError(fmt::format("weight table has {} columns, problem has {} operators", s.size(), m));
        return s;
    }
    }
    throw ConfigError("unknown schedule kind");
}

SolverConfig RunConfig::solver_config(const ProblemSpec& problem) const
{
    SolverConfig c;
    c.tau1 = tau1;
    c.tau2 = tau2;
    c.policy = policy;
    c.schedule = schedule.build(problem.operators.size());
    c.max_iterations = max_iterations;
    c.residual_tolerance = residual_tolerance;
    c.residual_check_stride = residual_check_stride;
    c.lambda_cap = lambda_cap;
    c.reference_points = problem.reference_points;
    c.full_trace_limit = output.full_trace_limit;
    c.validate(problem.operators.size());
    return c;
}

Vector RunConfig::start(const ProblemSpec& problem) const
{
    if (!initial_point)
        return Vector(problem.dimension, 0.0);
    if (initial_point->size() != problem.dimension)
        throw ConfigError(fmt::format("initial point has dimension {}, problem {}", initial_point->size(),
                                      problem.dimension));
    return *initial_point;
}

RunConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw LoadError("config: top level must be an object");
    RunConfig c;
    const std::string where = "config";
    try
    {
        if (j.contains("tau1"))
            c.tau1 = real_field(j, "tau1", where);
        if (j.contains("tau2"))
            c.tau2 = real_field(j, "tau2", where);
        if (j.contains("lambda_policy"))
        {
            const json& p = j.at("lambda_policy");
            const std::string kind = require(p, "kind", "lambda_policy").get<std::string>();
            if (kind == "fixed")
                c.policy = LambdaPolicy::fixed(real_field(p, "lambda", "lambda_policy"));
            else if (kind == "max-extrapolation")
                c.policy = LambdaPolicy::max_extrapolation();
            else if (kind == "fraction")
                c.policy = LambdaPolicy::fraction(real_field(p, "gamma", "lambda_policy"));
            else
                throw LoadError(fmt::format("lambda_policy: unknown kind '{}'", kind));
        }
        if (j.contains("schedule"))
        {
            const json& s = j.at("schedule");
            c.schedule.kind = schedule_kind_from(require(s, "kind", "schedule").get<std::string>());
            if (c.schedule.kind == ScheduleKind::example45)
            {
                if (!s.contains("seed"))
                    throw LoadError("schedule: example45 requires a 'seed'");
                c.schedule.seed = seed_value(s.at("seed"), "schedule");
                const json& w = require(s, "s", "schedule");
                if (!w.is_number_integer() || w.get<std::int64_t>() < 2 || w.get<std::int64_t>() % 2 != 0)
                    throw LoadError("schedule: example45 's' must be a positive even integer");
                c.schedule.window = w.get<std::size_t>();
            }
            else if (s.contains("seed"))
            {
                c.schedule.seed = seed_value(s.at("seed"), "schedule");
            }
            if (c.schedule.kind == ScheduleKind::user_table)
            {
                const json& t = require(s, "table", "schedule");
                if (!t.is_array() || t.empty())
                    throw LoadError("schedule: 'table' must be a nonempty array of weight vectors");
                for (const auto& row : t)
                    c.schedule.table.push_back(vector_value(row, "schedule.table").std_vector());
            }
        }
        if (j.contains("max_iterations"))
            c.max_iterations = j.at("max_iterations").get<std::size_t>();
        if (j.contains("residual_tolerance"))
            c.residual_tolerance = real_field(j, "residual_tolerance", where);
        if (j.contains("residual_check_stride"))
            c.residual_check_stride = j.at("residual_check_stride").get<std::size_t>();
        if (j.contains("lambda_cap"))
            c.lambda_cap = real_field(j, "lambda_cap", where);
        if (j.contains("initial_point"))
            c.initial_point = vector_value(j.at("initial_point"), "config.initial_point");
        if (j.contains("output"))
        {
            const json& o = j.at("output");
            if (o.contains("trace"))
                c.output.trace_path = o.at("trace").get<std::string>();
            if (o.contains("full_trace_limit"))
                c.output.full_trace_limit = o.at("full_trace_limit").get<std::size_t>();
        }
    }
    catch (const json::exception& e)
    {
        throw LoadError(fmt::format("config: {}", e.what()));
    }

    // Schedule-independent invariants; the rest is checked against the problem.
    auto in_unit = [](double t) { return t > 0.0 && t <= 1.0; };
    if (!in_unit(c.tau1) || !in_unit(c.tau2))
        throw LoadError("config: tau1 and tau2 must lie in (0, 1]");
    if (c.policy.kind == LambdaPolicy::Kind::fixed && !(c.policy.value >= c.tau1 && c.policy.value <= 2.0 - c.tau2))
        throw LoadError(fmt::format("config: fixed lambda {} outside [{}, {}]", c.policy.value, c.tau1, 2.0 - c.tau2));
    if (c.policy.kind == LambdaPolicy::Kind::fraction && !in_unit(c.policy.value))
        throw LoadError("config: fraction gamma must lie in (0, 1]");
    if (!(c.residual_tolerance > 0.0))
        throw LoadError("config: residual_tolerance must be positive");
    return c;
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["tau1"] = c.tau1;
    j["tau2"] = c.tau2;
    json p;
    p["kind"] = std::string(to_string(c.policy.kind));
    if (c.policy.kind == LambdaPolicy::Kind::fixed)
        p["lambda"] = c.policy.value;
    else if (c.policy.kind == LambdaPolicy::Kind::fraction)
        p["gamma"] = c.policy.value;
    j["lambda_policy"] = p;
    json s;
    s["kind"] = std::string(to_string(c.schedule.kind));
    if (c.schedule.kind == ScheduleKind::example45)
        s["s"] = c.schedule.window;
    if (c.schedule.seed)
        s["seed"] = *c.schedule.seed;
    if (c.schedule.kind == ScheduleKind::user_table)
        s["table"] = c.schedule.table;
    j["schedule"] = s;
    j["max_iterations"] = c.max_iterations;
    j["residual_tolerance"] = c.residual_tolerance;
    j["residual_check_stride"] = c.residual_check_stride;
    j["lambda_cap"] = c.lambda_cap;
    if (c.initial_point)
        j["initial_point"] = vector_json(*c.initial_point);
    j["output"] = {{"trace", c.output.trace_path}, {"full_trace_limit", c.output.full_trace_limit}};
    return j;
}

RunConfig load_config(const std::filesystem::path& path)
{
    return config_from_json(read_json_file(path, "config"));
}

// ---------------------------------------------------------------------------
// Traces

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace, std::size_t references)
{
    os << "k,lambda,L,residual,step_norm";
    for (std::size_t r = 0; r < references; ++r)
        os << ",dist_to_ref_" << r;
    os << '\n';
    for (const auto& rec : trace)
    {
        os << rec.k << ',' << format_real(rec.lambda) << ',' << format_real(rec.gain) << ',';
        if (rec.residual)
            os << format_real(*rec.residual);
        os << ',' << format_real(rec.step_norm);
        for (std::size_t r = 0; r < references; ++r)
            os << ',' << (r < rec.distances_to_refs.size() ? format_real(rec.distances_to_refs[r]) : "");
        os << '\n';
    }
}

json trace_to_json(const std::vector<IterationRecord>& trace, double tau1, double tau2,
                   const std::vector<Vector>& references)
{
    json records = json::array();
    for (const auto& rec : trace)
    {
        json r;
        r["k"] = rec.k;
        r["x"] = vector_json(rec.x);
        r["weights"] = rec.weights.values();
        r["gain"] = rec.gain;
        r["lambda"] = rec.lambda;
        r["direction"] = vector_json(rec.direction);
        r["weighted_displacement"] = rec.weighted_displacement;
        r["residual"] = rec.residual ? json(*rec.residual) : json(nullptr);
        r["step_norm"] = rec.step_norm;
        r["cumulative_step_sq"] = rec.cumulative_step_sq;
        records.push_back(std::move(r));
    }
    json refs = json::array();
    for (const auto& q : references)
        refs.push_back(vector_json(q));
    return json{{"tau1", tau1}, {"tau2", tau2}, {"reference_points", refs}, {"records", records}};
}

StoredTrace trace_from_json(const json& j)
{
    StoredTrace t;
    try
    {
        t.tau1 = real_field(j, "tau1", "trace");
        t.tau2 = real_field(j, "tau2", "trace");
        for (const auto& q : require(j, "reference_points", "trace"))
            t.references.push_back(vector_value(q, "trace.reference_points"));
        for (const auto& r : require(j, "records", "trace"))
        {
            IterationRecord rec;
            rec.k = r.at("k").get<std::size_t>();
            rec.x = vector_value(r.at("x"), "trace.x");
            rec.weights = WeightVector(r.at("weights").get<std::vector<double>>());
            rec.block = rec.weights.support();
            rec.gain = r.at("gain").get<double>();
            rec.lambda = r.at("lambda").get<double>();
            rec.direction = vector_value(r.at("direction"), "trace.direction");
            rec.weighted_displacement = r.at("weighted_displacement").get<double>();
            if (!r.at("residual").is_null())
                rec.residual = r.at("residual").get<double>();
            rec.step_norm = r.at("step_norm").get<double>();
            rec.cumulative_step_sq = r.at("cumulative_step_sq").get<double>();
            for (const auto& q : t.references)
                rec.distances_to_refs.push_back(distance(rec.x, q));
            t.records.push_back(std::move(rec));
        }
    }
    catch (const json::exception& e)
    {
        throw LoadError(fmt::format("trace: {}", e.what()));
    }
    catch (const ConfigError& e)
    {
        throw LoadError(fmt::format("trace: {}", e.what()));
    }
    return t;
}

json summary_to_json(const SolveResult& result, double tolerance)
{
    json j;
    j["status"] = std::string(to_string(result.status));
    j["iterations"] = result.iterations;
    j["final_residual"] = result.final_residual;
    j["residual_tolerance"] = tolerance;
    j["final_point"] = vector_json(result.final_point);
    j["trace_rows"] = result.trace.size();
    if (!result.message.empty())
        j["message"] = result.message;
    return j;
}
}  // namespace cfp
