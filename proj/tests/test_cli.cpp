#include <doctest.h>

#include <cmath>

#include "ageom/cli.hpp"
#include "ageom/random.hpp"

using namespace ageom;

namespace {

RunResult call(const std::string& command, const json& input, std::vector<std::string> args = {})
{
    RunConfig c;
    c.command = command;
    c.args = std::move(args);
    return run(c, input);
}

} // namespace

TEST_CASE("matrix JSON round trip and validation")
{
    Rng rng(71);
    const CMatrix m = random_ginibre(rng, 3, 2);
    const CMatrix back = matrix_from_json(to_json(m));
    CHECK(back.rows() == 3);
    CHECK(back.cols() == 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(back(i, j) == m(i, j));
    CHECK(matrix_from_json(json::parse(R"({"rows":1,"cols":2,"data":[3,[1,-1]]})"))(0, 1) == cplx(1, -1));
    CHECK_THROWS(matrix_from_json(json::parse(R"({"rows":2,"cols":2,"data":[1,2,3]})")));
    CHECK_THROWS(matrix_from_json(json::parse(R"({"rows":1,"cols":1,"data":["x"]})")));
    CHECK(to_json(*AForm::identity(2))["psd_checked"] == true);
}

TEST_CASE("check on the identity")
{
    const json id = to_json(CMatrix::identity(3));
    const RunResult r = call("check", {{"A", id}, {"T", id}});
    CHECK(r.exit_code == 0);
    CHECK(r.report["isometric"] == true);

    const RunResult bad = call("check", {{"A", id}, {"T", to_json(CMatrix::identity(3) * cplx(2.0))}});
    CHECK(bad.exit_code == 2);
    CHECK(bad.report["isometric"] == false);

    const RunResult sym = call("check", {{"mode", "symmetrizable"}, {"A", to_json(CMatrix::identity(2))}, {"B", to_json(CMatrix{{0, 1}, {0, 0}})}});
    CHECK(sym.report["a_symmetric"] == false);

    const RunResult adj = call(
        "check", {{"mode", "adjoint"}, {"A", to_json(CMatrix{{1, 0}, {0, 0.5}})}, {"B", to_json(CMatrix{{0, 1}, {0, 0}})}});
    CHECK(adj.exit_code == 0);
    const CMatrix bs = matrix_from_json(adj.report["B_sharp"]);
    CHECK(std::abs(bs(1, 0) - cplx(2.0)) < 1e-14);
}

TEST_CASE("input errors are structured")
{
    const RunResult missing = call("check", json::object());
    CHECK(missing.exit_code == 1);
    CHECK(missing.report["error"]["code"] == "InvalidInput");

    const json id = to_json(CMatrix::identity(2));
    const RunResult not_pd = call("project", {{"A", to_json(CMatrix{{1, 0}, {0, -1}})}, {"F", id}});
    CHECK(not_pd.exit_code == 1);
    CHECK(not_pd.report["error"]["code"] == "NotPSD");

    CHECK(call("frobnicate", json::object()).exit_code == 1);
    CHECK(call("seq", json::object(), {"wold", "no_such_operator"}).exit_code == 1);

    RunConfig c;
    c.command = "douglas";
    c.tol = -1.0;
    CHECK(run(c, json::object()).exit_code == 1);
}

TEST_CASE("project and douglas")
{
    const RunResult p = call("project", {{"A", to_json(CMatrix{{2, 1}, {1, 1}})}, {"F", to_json(CMatrix{{1}, {0}})}});
    CHECK(p.exit_code == 0);
    const CMatrix q = matrix_from_json(p.report["Q"]);
    CHECK(std::abs(q(0, 1) - cplx(0.5)) < 1e-12);

    const json diag = to_json(CMatrix{{1, 0}, {0, 0}});
    const RunResult d = call("douglas", {{"A", diag}, {"B", to_json(CMatrix{{0, 0}, {0, 1}})}});
    CHECK(d.exit_code == 0);
    CHECK(d.report["solvable"] == false);
    CHECK(d.report["agree"] == true);
}

TEST_CASE("extend on the forced instance")
{
    const RunResult r =
        call("extend", {{"X", to_json(CMatrix{{0, 1}, {1, 0}})}, {"P", to_json(CMatrix{{1, 0}, {0, 0}})}});
    CHECK(r.exit_code == 0);
    CHECK(r.report["method"] == "paper_construction");
    const CMatrix z = matrix_from_json(r.report["Z"]);
    CHECK(std::abs(z(1, 1)) < 1e-6);
    CHECK(r.report["verification"]["ok"] == true);
}

TEST_CASE("geodesic, section and conjugate")
{
    const json id = to_json(CMatrix::identity(2));
    const RunResult g = call("geodesic", {{"A", id}, {"T", id}, {"H", to_json(CMatrix{{0, 1}, {1, 0}})}});
    CHECK(g.exit_code == 0);
    const CMatrix end = matrix_from_json(g.report["endpoint"]);
    CHECK(std::abs(end(0, 0) + cplx(1.0)) < 1e-12);

    const double th = 0.4;
    const json a = to_json(CMatrix::identity(2));
    const json t0 = to_json(CMatrix{{1}, {0}});
    const json t = to_json(CMatrix{{std::cos(th)}, {std::sin(th)}});
    const json dom = to_json(CMatrix::identity(1));
    const RunResult s = call("section", {{"A", a}, {"A_dom", dom}, {"T0", t0}, {"T", t}});
    CHECK(s.exit_code == 0);
    CHECK(s.report["reconstruction"].get<double>() < 1e-12);

    const RunResult k = call("conjugate", {{"A", a}, {"A_dom", dom}, {"T1", t0}, {"T2", t0}, {"H", a}});
    CHECK(k.exit_code == 0);
}

TEST_CASE("seq subcommands")
{
    const RunResult adj = call("seq", json::object(), {"adjoint", "example_242_Ustar"});
    CHECK(adj.exit_code == 0);
    CHECK(adj.report["verdict"] == "non_adjointable_evidence");

    RunConfig c;
    c.command = "seq";
    c.args = {"wold", "double_shift"};
    c.horizon = 64;
    const RunResult w = run(c, json::object());
    CHECK(w.exit_code == 0);
    CHECK(w.report["partitions"] == true);

    c.args = {"demo"};
    c.horizon = 1000;
    const RunResult d = run(c, json::object());
    CHECK(d.report["monotone"] == true);
    CHECK(d.report["samples"].size() == 4);
}

TEST_CASE("race reports are byte-identical for identical inputs")
{
    Rng rng(72);
    const CMatrix a = random_pd(rng, 4, 10.0);
    const json in{{"A", to_json(a)}, {"T", to_json(CMatrix::identity(4))}, {"H", to_json(random_hermitian(rng, 4))}};
    RunConfig c;
    c.command = "race";
    c.trials = 8;
    c.t1 = 2.0;
    c.seed = 42;
    const std::string first = render(run(c, in).report);
    const std::string second = render(run(c, in).report);
    CHECK(first == second);
    c.seed = 43;
    CHECK(render(run(c, in).report) != first);
}
