#include <doctest.h>

#include <cmath>

#include "ageom/a_space.hpp"
#include "ageom/error.hpp"
#include "ageom/random.hpp"
#include "oracles.hpp"

using namespace ageom;

namespace {

FormRef diag_form(std::initializer_list<double> d)
{
    std::vector<double> v(d);
    return AForm::make(CMatrix::diagonal(std::span<const double>(v)));
}

FormRef random_form(Rng& rng, std::size_t n) { return AForm::make(random_pd(rng, n, 100.0)); }

} // namespace

TEST_CASE("AForm validation")
{
    CHECK_THROWS_AS(AForm::make(CMatrix{{1, 0}, {0, -1}}), Error);
    CHECK_THROWS_AS(AForm::make(CMatrix{{1, 0}, {0, 0}}), Error);
    CHECK_THROWS_AS(AForm::make(CMatrix{{1, 1}, {0, 1}}), Error);
    try {
        AForm::make(CMatrix{{1, 0}, {0, 0}});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPSD);
    }
    const FormRef f = diag_form({4, 1});
    CHECK(f->scale() == doctest::Approx(4.0));
    CHECK(f->conditioning() == doctest::Approx(4.0));
    CHECK(f->normalized()->scale() == doctest::Approx(1.0));
    CHECK(f->root_residual() < 1e-14);
    CHECK_FALSE(f->ill_conditioned());
    CHECK(diag_form({1, 1e-9})->ill_conditioned());
}

TEST_CASE("a_inner hand cases")
{
    const CMatrix e1 = CMatrix::basis_vector(2, 0);
    const CMatrix e2 = CMatrix::basis_vector(2, 1);
    CHECK(a_inner(*AForm::identity(2), e1, e1) == cplx(1.0));
    CHECK(a_inner(*diag_form({1, 2}), e2, e2) == cplx(2.0));

    // truncated Dirichlet model: A = diag(n + 1) on coefficients
    const std::size_t n = 8;
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = static_cast<double>(k + 1);
    const FormRef dir = AForm::make(CMatrix::diagonal(std::span<const double>(w)));
    for (std::size_t k = 0; k < n; ++k) {
        const CMatrix z = CMatrix::basis_vector(n, k);
        CHECK(a_inner(*dir, z, z) == cplx(static_cast<double>(k + 1)));
    }
}

TEST_CASE("L-model and A-adjoint hand cases")
{
    const FormRef f = diag_form({1, 0.5});
    const AOperator b(f, CMatrix{{0, 1}, {0, 0}});
    CHECK(oracle::max_abs(to_l_model(b) - CMatrix{{0, std::sqrt(2.0)}, {0, 0}}) < 1e-14);
    CHECK(oracle::max_abs(a_adjoint(b).m - CMatrix{{0, 0}, {2, 0}}) < 1e-14);
    CHECK(banach_norm(b) == doctest::Approx(2.0));
    CHECK(l_norm(b) == doctest::Approx(std::sqrt(2.0)));

    Rng rng(21);
    const CMatrix m = random_ginibre(rng, 3, 3);
    const AOperator plain(AForm::identity(3), m);
    CHECK(oracle::max_abs(to_l_model(plain) - m) < 1e-14);
    CHECK(oracle::max_abs(a_adjoint(plain).m - m.adjoint()) < 1e-14);
    CHECK(l_norm(plain) == doctest::Approx(svd_norm(m)));
    const CMatrix u = random_unitary(rng, 3);
    CHECK(banach_norm(AOperator(AForm::identity(3), u)) == doctest::Approx(1.0));
}

TEST_CASE("is_a_symmetric examples")
{
    Rng rng(22);
    const FormRef f = random_form(rng, 5);
    CHECK(is_a_symmetric(AOperator(f, f->matrix())));
    CHECK(is_a_symmetric(AOperator(AForm::identity(4), random_hermitian(rng, 4))));
    CHECK_FALSE(is_a_symmetric(AOperator(AForm::identity(2), CMatrix{{0, 1}, {0, 0}})));
}

TEST_CASE("adjoint calculus properties")
{
    for (std::size_t trial = 0; trial < 500; ++trial) {
        Rng rng(23, trial);
        const std::size_t n = rng.index(1, 16);
        const FormRef f = random_form(rng, n);
        const AOperator b(f, random_ginibre(rng, n, n));
        const AOperator c(f, random_ginibre(rng, n, n));
        const AOperator bs = a_adjoint(b);
        const double nb = svd_norm(b.m);
        // basis sampled <B e_j, e_i>_A = <e_j, B^# e_i>_A
        const std::size_t i = rng.index(0, n - 1);
        const std::size_t j = rng.index(0, n - 1);
        const CMatrix ei = CMatrix::basis_vector(n, i);
        const CMatrix ej = CMatrix::basis_vector(n, j);
        CHECK(std::abs(a_inner(*f, b.m * ej, ei) - a_inner(*f, ej, bs.m * ei)) <= 1e-9 * f->scale() * nb);
        CHECK(oracle::max_abs(a_adjoint(bs).m - b.m) <= 1e-9 * nb);
        CHECK(oracle::max_abs(to_l_model(b) * to_l_model(c) - to_l_model(AOperator(f, b.m * c.m))) <=
              1e-9 * svd_norm(to_l_model(b)) * svd_norm(to_l_model(c)));
        CHECK(oracle::max_abs(to_l_model(bs) - to_l_model(b).adjoint()) <= 1e-9 * svd_norm(to_l_model(b)));
        CHECK(oracle::max_abs(from_l_model(f, to_l_model(b)).m - b.m) <= 1e-9 * nb);
        CHECK(std::abs(banach_norm(bs) - banach_norm(b)) <= 1e-9 * banach_norm(b));
        // A-symmetric part: l_norm <= ||B||
        const AOperator sym(f, (b.m + bs.m) * cplx(0.5));
        CHECK(is_a_symmetric(sym));
        CHECK(hermiticity_defect(to_l_model(sym)) < 1e-9 * std::max(1.0, svd_norm(sym.m)));
        CHECK(l_norm(sym) <= svd_norm(sym.m) + 1e-9);
    }
}

TEST_CASE("compatible_projector hand cases")
{
    const CMatrix e1{{1}, {0}};
    CHECK(oracle::max_abs(compatible_projector(AForm::identity(2), e1).q - CMatrix{{1, 0}, {0, 0}}) < 1e-15);
    const AProjection q = compatible_projector(AForm::make(CMatrix{{2, 1}, {1, 1}}), e1);
    CHECK(oracle::max_abs(q.q - CMatrix{{1, 0.5}, {0, 0}}) <= 1e-12);
    CHECK_THROWS_AS(compatible_projector(AForm::identity(2), CMatrix{{1, 2}, {1, 2}}), Error);
}

TEST_CASE("compatible_projector invariants")
{
    for (std::size_t trial = 0; trial < 500; ++trial) {
        Rng rng(24, trial);
        const std::size_t n = rng.index(1, 12);
        const std::size_t k = rng.index(1, n);
        const FormRef form = random_form(rng, n);
        const CMatrix f = random_ginibre(rng, n, k);
        const AProjection q = compatible_projector(form, f);
        CHECK(idempotence_defect(q.q) < 1e-9);
        CHECK(a_symmetry_defect(*form, q.q) < 1e-9);
        CHECK(oracle::max_abs(q.q * f - f) < 1e-9 * svd_norm(f));
        const CMatrix ql = to_l_model(AOperator(form, q.q));
        CHECK(oracle::max_abs(ql - ql.adjoint()) < 1e-9);
        CHECK(std::abs(std::real(trace(ql)) - static_cast<double>(k)) < 1e-9);
    }
}

TEST_CASE("projector_from_idempotent")
{
    const CMatrix p{{1, 0}, {0, 0}};
    CHECK(oracle::max_abs(projector_from_idempotent(p) - p) < 1e-15);
    CHECK(oracle::max_abs(projector_from_idempotent(CMatrix{{1, 1}, {0, 0}}) - p) < 1e-14);
    CHECK_THROWS_AS(projector_from_idempotent(CMatrix{{1, 1}, {1, 1}}), Error);

    for (std::size_t trial = 0; trial < 200; ++trial) {
        Rng rng(25, trial);
        const std::size_t n = rng.index(1, 10);
        const std::size_t k = rng.index(1, n);
        const FormRef form = random_form(rng, n);
        const CMatrix q = compatible_projector(form, random_ginibre(rng, n, k)).q;
        const CMatrix r = projector_from_idempotent(q);
        CHECK(oracle::max_abs(r - r.adjoint()) < 1e-9);
        CHECK(oracle::max_abs(r * r - r) < 1e-9);
        CHECK(oracle::max_abs(r * q - q) < 1e-9 * std::max(1.0, svd_norm(q)));
        CHECK(oracle::max_abs(q * r - r) < 1e-9 * std::max(1.0, svd_norm(q)));
    }
}

TEST_CASE("douglas hand cases")
{
    const CMatrix p{{1, 0}, {0, 0}};
    const DouglasResult same = douglas(p, p);
    CHECK(same.solvable);
    CHECK(same.agree());
    REQUIRE(same.x);
    CHECK(oracle::max_abs(*same.x - p) < 1e-12);
    REQUIRE(same.lambda);
    CHECK(*same.lambda == doctest::Approx(1.0).epsilon(1e-9));

    const DouglasResult off = douglas(p, CMatrix{{0, 0}, {0, 1}});
    CHECK_FALSE(off.solvable);
    CHECK_FALSE(off.range_inclusion);
    CHECK_FALSE(off.lambda_bounded);
    CHECK_FALSE(off.x);

    CHECK_THROWS_AS(douglas(CMatrix{{1, 0}, {0, -1}}, p), Error);
}

TEST_CASE("douglas three-way agreement and the closed-form lambda")
{
    for (std::size_t trial = 0; trial < 500; ++trial) {
        Rng rng(26, trial);
        const std::size_t n = rng.index(1, 8);
        const std::size_t m = rng.index(1, 6);
        const int kind = static_cast<int>(trial % 3);
        if (kind == 0) {
            const CMatrix a = random_pd(rng, n, 1e3);
            const CMatrix b = random_ginibre(rng, n, m);
            const DouglasResult d = douglas(a, b);
            CHECK(d.solvable);
            CHECK(d.agree());
            CHECK(svd_norm(a * *d.x - b) < 1e-9);
            // for invertible A the smallest lambda is ||A^{-1} B||^2
            const double closed = std::pow(svd_norm(inverse(a) * b), 2);
            CHECK(std::abs(*d.lambda - closed) <= 1e-6 * std::max(1.0, closed));
        } else {
            const CMatrix a = random_psd(rng, n, rng.index(0, n - 1));
            const CMatrix b = kind == 1 ? a * random_ginibre(rng, n, m) : random_ginibre(rng, n, m);
            const DouglasResult d = douglas(a, b);
            CHECK(d.agree());
            if (kind == 1)
                CHECK(d.solvable);
            if (d.solvable)
                CHECK(svd_norm(a * *d.x - b) < 1e-8);
        }
    }
}

TEST_CASE("smallest_lambda on a diagonal case")
{
    const LambdaBound l = smallest_lambda(CMatrix{{3, 0}, {0, 1}}, CMatrix{{1, 0}, {0, 2}});
    REQUIRE(l.lambda);
    CHECK(*l.lambda == doctest::Approx(9.0).epsilon(1e-9));
    const LambdaBound none = smallest_lambda(CMatrix{{0}, {1}}, CMatrix{{1}, {0}});
    CHECK_FALSE(none.lambda);
    CHECK(none.complement_mass == doctest::Approx(1.0));
}
