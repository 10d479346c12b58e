#include "ageom/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "ageom/acceptance.hpp"
#include "ageom/error.hpp"

namespace ageom {

namespace {

const json& field(const json& in, const char* key)
{
    if (!in.is_object() || !in.contains(key))
        throw Error(ErrorCode::InvalidInput, std::string("input needs field \"") + key + "\"");
    return in.at(key);
}

CMatrix matrix_field(const json& in, const char* key)
{
    try {
        return matrix_from_json(field(in, key));
    } catch (const Error& e) {
        throw Error(e.code(), std::string(key) + ": " + e.detail());
    }
}

FormRef form_field(const json& in, const char* key)
{
    try {
        return form_from_json(field(in, key));
    } catch (const Error& e) {
        throw Error(e.code(), std::string(key) + ": " + e.detail());
    }
}

// A_dom defaults to A for square T.
FormRef domain_field(const json& in, const FormRef& form, const CMatrix& t)
{
    if (in.contains("A_dom"))
        return form_field(in, "A_dom");
    if (t.rows() != t.cols())
        throw Error(ErrorCode::InvalidInput, "rectangular T needs \"A_dom\"");
    return form;
}

std::string string_field(const json& in, const char* key, const std::string& fallback)
{
    if (!in.is_object() || !in.contains(key))
        return fallback;
    if (!in.at(key).is_string())
        throw Error(ErrorCode::InvalidInput, std::string(key) + " must be a string");
    return in.at(key).get<std::string>();
}

double tolerance(const RunConfig& c, double fallback) { return c.tol.value_or(fallback); }

RunResult verdict(json report, bool ok)
{
    report["ok"] = ok;
    return {ok ? 0 : 2, std::move(report)};
}

RunResult cmd_check(const RunConfig& c, const json& in)
{
    const std::string mode = string_field(in, "mode", "isometry");
    const FormRef form = form_field(in, "A");
    if (mode == "isometry") {
        const CMatrix t = matrix_field(in, "T");
        const FormRef dom = domain_field(in, form, t);
        const IsometryCheck chk = check_isometry(*form, *dom, t, tolerance(c, 1e-9));
        json r{{"mode", mode}};
        r.update(to_json(chk));
        return verdict(std::move(r), chk.isometric);
    }
    const AOperator b(form, matrix_field(in, "B"));
    if (mode == "symmetrizable") {
        const double tol = tolerance(c, 1e-9);
        const bool sym = is_a_symmetric(b, tol);
        const CMatrix bl = to_l_model(b);
        json r{{"mode", mode},
               {"a_symmetric", sym},
               {"defect", a_symmetry_defect(*form, b.m) / std::max(1.0, svd_norm(b.m))},
               {"l_model_hermiticity", hermiticity_defect(bl)}};
        return verdict(std::move(r), sym);
    }
    if (mode == "adjoint") {
        const AOperator bs = a_adjoint(b);
        const double res = norm_max(form->matrix() * b.m - bs.m.adjoint() * form->matrix()) /
                           (form->scale() * std::max(1.0, svd_norm(b.m)));
        json r{{"mode", mode}, {"B_sharp", to_json(bs.m)}, {"adjoint_residual", res}};
        r["banach_norm"] = banach_norm(b);
        r["l_norm"] = l_norm(b);
        return verdict(std::move(r), res < tolerance(c, 1e-9));
    }
    throw Error(ErrorCode::InvalidInput, "check mode must be isometry, symmetrizable or adjoint");
}

RunResult cmd_project(const RunConfig& c, const json& in)
{
    const FormRef form = form_field(in, "A");
    const CMatrix f = matrix_field(in, "F");
    const AProjection q = compatible_projector(form, f);
    const CMatrix ql = to_l_model(AOperator(form, q.q));
    const double idem = idempotence_defect(q.q);
    const double sym = a_symmetry_defect(*form, q.q);
    const double herm = svd_norm(ql - ql.adjoint());
    const double tol = tolerance(c, 1e-9);
    json r{{"Q", to_json(q.q)},
           {"idempotence", idem},
           {"a_symmetry", sym},
           {"l_model_hermiticity", herm},
           {"l_model_idempotence", svd_norm(ql * ql - ql)}};
    return verdict(std::move(r), idem < tol && sym < tol && herm < tol);
}

RunResult cmd_douglas(const RunConfig& c, const json& in)
{
    const DouglasResult d = douglas(matrix_field(in, "A"), matrix_field(in, "B"), tolerance(c, 1e-8));
    return verdict(to_json(d), d.agree());
}

RunResult cmd_section(const RunConfig& c, const json& in)
{
    const double tol = tolerance(c, 1e-8);
    const FormRef form = form_field(in, "A");
    const CMatrix t0m = matrix_field(in, "T0");
    const FormRef dom = domain_field(in, form, t0m);
    const AIsometry t0(form, dom, t0m, tol);
    const AIsometry t(form, dom, matrix_field(in, "T"), tol);
    const AUnitary sigma = isometry_section(t0, t);
    const AUnitary base = isometry_section(t0, t0);
    const double rec = svd_norm(sigma.matrix() * t0.matrix() - t.matrix()) / std::max(1.0, svd_norm(t.matrix()));
    const double at_base = svd_norm(base.matrix() - CMatrix::identity(form->dim()));
    json r{{"sigma", to_json(sigma.matrix())},
           {"reconstruction", rec},
           {"at_base", at_base},
           {"isometry", sigma.defect()}};
    return verdict(std::move(r), rec < tol && at_base < tol && sigma.defect() < tol);
}

RunResult cmd_conjugate(const RunConfig& c, const json& in)
{
    const double tol = tolerance(c, 1e-8);
    const FormRef form = form_field(in, "A");
    const CMatrix t1m = matrix_field(in, "T1");
    const FormRef dom = domain_field(in, form, t1m);
    const AIsometry t1(form, dom, t1m, tol);
    const AIsometry t2(form, dom, matrix_field(in, "T2"), tol);
    const AUnitary h(form, matrix_field(in, "H"), tol);
    const AUnitary k = conjugator(t1, t2, h, tol);
    const double res = svd_norm(k.matrix() * h.matrix() * t1.matrix() - t2.matrix()) /
                       std::max(1.0, svd_norm(t2.matrix()));
    json r{{"K", to_json(k.matrix())}, {"reconstruction", res}, {"isometry", k.defect()}};
    return verdict(std::move(r), res < tol && k.defect() < tol);
}

RunResult cmd_extend(const RunConfig& c, const json& in)
{
    const KreinInstance inst = KreinInstance::make(matrix_field(in, "X"), matrix_field(in, "P"));
    const std::string method = string_field(in, "method", "paper");
    KreinReport rep;
    if (method == "paper") {
        KreinOptions opts;
        if (in.contains("m")) {
            if (!in["m"].is_number())
                throw Error(ErrorCode::InvalidInput, "m must be a number");
            opts.m = in["m"].get<double>();
        }
        rep = extend_paper(inst, opts);
    } else if (method == "dykstra") {
        rep = extend_dykstra(inst);
    } else {
        throw Error(ErrorCode::InvalidInput, "method must be paper or dykstra");
    }
    const ExtensionCheck chk = verify_extension(inst, rep.z, tolerance(c, 1e-8));
    json r{{"norm_XP", inst.norm_xp}};
    r.update(to_json(rep));
    r["verification"] = to_json(chk);
    return verdict(std::move(r), chk.ok);
}

struct CurveInput {
    FormRef form;
    FormRef dom;
    CMatrix t;
    CMatrix v;
};

CurveInput curve_input(const json& in, double tol)
{
    CurveInput ci;
    ci.form = form_field(in, "A");
    ci.t = matrix_field(in, "T");
    ci.dom = domain_field(in, ci.form, ci.t);
    const AIsometry t(ci.form, ci.dom, ci.t, tol);
    if (in.contains("V"))
        ci.v = matrix_field(in, "V");
    else if (in.contains("H"))
        ci.v = tangent_from_hermitian(t, matrix_field(in, "H"));
    else
        throw Error(ErrorCode::InvalidInput, "input needs a tangent \"V\" or a Hermitian generator \"H\"");
    return ci;
}

GeodesicCurve curve_from(const CurveInput& ci, double tol)
{
    const AIsometry t(ci.form, ci.dom, ci.t, tol);
    return minimal_curve(make_tangent(t, ci.v, tol));
}

RunResult cmd_geodesic(const RunConfig& c, const json& in)
{
    const double tol = tolerance(c, 1e-8);
    const CurveInput ci = curve_input(in, tol);
    const GeodesicCurve g = curve_from(ci, tol);
    const double t1 = c.t1.value_or(std::numbers::pi);
    const CMatrix& a = ci.form->matrix();
    double iso = 0.0;
    double speed = 0.0;
    for (int s = 0; s < 50; ++s) {
        const double tt = -std::numbers::pi + 2.0 * std::numbers::pi * s / 49.0;
        const CMatrix d = g.at(tt);
        iso = std::max(iso, svd_norm(d.adjoint() * a * d - ci.dom->matrix()) / ci.dom->scale());
        speed = std::max(speed, std::abs(svd_norm(g.velocity_l(tt)) - 1.0));
    }
    const LengthResult len = curve_length([&](double s) { return svd_norm(g.velocity_l(s)); }, 0.0, t1);
    json r{{"tangent_norm", g.speed},
           {"Z", to_json(g.z().m)},
           {"Z_l", to_json(g.z_l)},
           {"endpoint", to_json(g.at(t1))},
           {"t1", t1},
           {"length", len.length},
           {"length_error", std::abs(len.length - t1)},
           {"max_isometry_residual", iso},
           {"max_speed_deviation", speed}};
    r["extension"] = g.extension ? json(std::string(to_string(g.extension->method))) : json(nullptr);
    return verdict(std::move(r), iso < tol && speed <= 1e-6 && std::abs(len.length - t1) <= 1e-6);
}

RunResult cmd_race(const RunConfig& c, const json& in)
{
    const CurveInput ci = curve_input(in, 1e-8);
    const GeodesicCurve g = curve_from(ci, 1e-8);
    RaceOptions opts;
    opts.t1 = c.t1.value_or(in.contains("t1") ? field(in, "t1").get<double>() : std::numbers::pi);
    opts.trials = c.trials.value_or(200);
    opts.seed = c.seed;
    if (c.tol)
        opts.tol = *c.tol;
    if (string_field(in, "derivative", "divided_differences") == "block_exponential")
        opts.derivative = DerivativeMethod::BlockExponential;
    const RaceReport rep = race(g, opts);
    return verdict(to_json(rep), rep.violations == 0 && rep.max_endpoint_error < 1e-9);
}

RunResult cmd_seq(const RunConfig& c)
{
    if (c.args.empty())
        throw Error(ErrorCode::InvalidInput, "seq needs wold, adjoint or demo");
    const std::string& sub = c.args[0];
    if (sub == "demo") {
        const Index horizon = c.horizon.value_or(1000000);
        if (horizon == 0)
            throw Error(ErrorCode::InvalidInput, "horizon must be positive");
        const DivergenceDemo d = divergence_demo(horizon);
        json samples = json::array();
        for (Index h = 1; h <= horizon; h *= 10)
            samples.push_back({{"horizon", h}, {"partial_sum", d.at(h)}});
        json r{{"operator", "example_242_U"},
               {"horizon", horizon},
               {"terms", d.partial_sums.size()},
               {"witness_norm_sq", d.witness_norm_sq},
               {"partial_sum", d.partial_sums.back()},
               {"monotone", d.monotone},
               {"samples", std::move(samples)}};
        return {0, std::move(r)};
    }
    if (c.args.size() < 2)
        throw Error(ErrorCode::InvalidInput, "seq " + sub + " needs an operator name");
    std::optional<WeightedSpace> space;
    if (c.args.size() > 2) {
        space = parse_space(c.args[2]);
        if (!space)
            throw Error(ErrorCode::InvalidInput, "unknown space " + c.args[2]);
    }
    const auto op = builtin_operator(c.args[1], space);
    if (!op) {
        std::string names;
        for (const auto& n : builtin_names())
            names += (names.empty() ? "" : ", ") + n;
        throw Error(ErrorCode::InvalidInput, "unknown operator " + c.args[1] + " (built-ins: " + names + ")");
    }
    json head{{"operator", op->name}, {"space", op->space.name()}};
    if (sub == "adjoint") {
        const Index horizon = c.horizon.value_or(100000);
        head["horizon"] = horizon;
        head.update(to_json(seq_adjointability(*op, horizon)));
        return {0, std::move(head)};
    }
    if (sub == "wold") {
        const Index horizon = c.horizon.value_or(1024);
        const WoldReport w = seq_wold(*op, horizon);
        head.update(to_json(w));
        return verdict(std::move(head), w.partitions());
    }
    throw Error(ErrorCode::InvalidInput, "seq subcommand must be wold, adjoint or demo");
}

RunResult cmd_suite(const RunConfig& c)
{
    AcceptanceOptions opts;
    opts.seed = c.seed;
    std::vector<int> wanted;
    for (const auto& a : c.args) {
        try {
            wanted.push_back(std::stoi(a));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, "suite takes criterion numbers, got " + a);
        }
    }
    json items = json::array();
    bool all = true;
    for (const auto& crit : acceptance_criteria()) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), crit.id) == wanted.end())
            continue;
        const CriterionResult res = run_criterion(crit, opts);
        std::cerr << "criterion " << res.id << ": " << (res.pass() ? "PASS" : "FAIL") << " in " << res.seconds
                  << " s\n";
        all = all && res.pass();
        items.push_back({{"id", res.id},
                         {"title", res.title},
                         {"pass", res.pass()},
                         {"checks_pass", res.checks_pass},
                         {"within_budget", res.within_budget()},
                         {"budget_seconds", res.budget_seconds},
                         {"summary", res.summary},
                         {"details", res.details}});
    }
    json r{{"seed", c.seed}, {"criteria", std::move(items)}};
    return verdict(std::move(r), all);
}

json error_report(const std::string& code, const std::string& message)
{
    return {{"error", {{"code", code}, {"message", message}}}};
}

int exit_code_for(ErrorCode code)
{
    return code == ErrorCode::NoConvergence || code == ErrorCode::Infeasible ? 2 : 1;
}

} // namespace

bool needs_input(const std::string& command)
{
    return command != "seq" && command != "suite";
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

RunResult run(const RunConfig& c, const json& in)
{
    try {
        if (c.tol && !(*c.tol > 0.0))
            throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
        if (c.command == "check")
            return cmd_check(c, in);
        if (c.command == "project")
            return cmd_project(c, in);
        if (c.command == "douglas")
            return cmd_douglas(c, in);
        if (c.command == "section")
            return cmd_section(c, in);
        if (c.command == "conjugate")
            return cmd_conjugate(c, in);
        if (c.command == "extend")
            return cmd_extend(c, in);
        if (c.command == "geodesic")
            return cmd_geodesic(c, in);
        if (c.command == "race")
            return cmd_race(c, in);
        if (c.command == "seq")
            return cmd_seq(c);
        if (c.command == "suite")
            return cmd_suite(c);
        throw Error(ErrorCode::InvalidInput, "unknown command " + c.command);
    } catch (const Error& e) {
        return {exit_code_for(e.code()), error_report(std::string(to_string(e.code())), e.detail())};
    } catch (const json::exception& e) {
        return {1, error_report("InvalidInput", e.what())};
    }
}

RunResult run(const RunConfig& c)
{
    json in = json::object();
    if (needs_input(c.command)) {
        if (c.input.empty())
            return {1, error_report("InvalidInput", c.command + " needs an input file")};
        std::string text;
        if (c.input == "-") {
            text.assign(std::istreambuf_iterator<char>(std::cin), {});
        } else {
            std::ifstream f(c.input);
            if (!f)
                return {1, error_report("InvalidInput", "cannot read " + c.input)};
            text.assign(std::istreambuf_iterator<char>(f), {});
        }
        try {
            in = json::parse(text);
        } catch (const json::exception& e) {
            return {1, error_report("InvalidInput", e.what())};
        }
    }
    return run(c, in);
}

} // namespace ageom
