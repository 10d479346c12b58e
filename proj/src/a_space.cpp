#include "ageom/a_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ageom/error.hpp"

namespace ageom {

FormRef AForm::make(const CMatrix& a)
{
    if (!a.is_square() || a.empty())
        throw Error(ErrorCode::InvalidInput, "AForm: weight must be a nonempty square matrix");
    const HermEig e = herm_eig(a);
    if (e.values.front() <= 0.0)
        throw Error(ErrorCode::NotPSD, "AForm: weight has eigenvalue " + std::to_string(e.values.front()) +
                                           " <= 0");
    auto f = std::shared_ptr<AForm>(new AForm());
    f->a_ = herm_part(a);
    f->lmin_ = e.values.front();
    f->lmax_ = e.values.back();
    f->sqrt_ = herm_apply(e, [](double l) { return cplx(std::sqrt(l)); });
    f->inv_sqrt_ = herm_apply(e, [](double l) { return cplx(1.0 / std::sqrt(l)); });
    f->inv_ = herm_apply(e, [](double l) { return cplx(1.0 / l); });
    return f;
}

FormRef AForm::identity(std::size_t n) { return make(CMatrix::identity(n)); }

FormRef AForm::normalized() const { return make(a_ / cplx(lmax_)); }

double AForm::root_residual() const
{
    const std::size_t n = dim();
    const double r1 = svd_norm(sqrt_ * sqrt_ - a_) / lmax_;
    const double r2 = svd_norm(sqrt_ * inv_sqrt_ - CMatrix::identity(n));
    return std::max(r1, r2);
}

AOperator::AOperator(FormRef f, CMatrix mat) : form(std::move(f)), m(std::move(mat))
{
    if (!form)
        throw Error(ErrorCode::InvalidInput, "AOperator: missing form");
    if (m.rows() != form->dim() || m.cols() != form->dim())
        throw Error(ErrorCode::InvalidInput, "AOperator: operator must be " + std::to_string(form->dim()) +
                                                 "x" + std::to_string(form->dim()));
}

double idempotence_defect(const CMatrix& q) { return svd_norm(q * q - q); }

double a_symmetry_defect(const AForm& form, const CMatrix& q)
{
    const CMatrix& a = form.matrix();
    return svd_norm(a * q - q.adjoint() * a) / form.scale();
}

AProjection::AProjection(FormRef f, CMatrix mat, double tol) : form(std::move(f)), q(std::move(mat))
{
    if (!form)
        throw Error(ErrorCode::InvalidInput, "AProjection: missing form");
    if (q.rows() != form->dim() || q.cols() != form->dim())
        throw Error(ErrorCode::InvalidInput, "AProjection: dimension mismatch");
    const double nq = svd_norm(q);
    const double idem = idempotence_defect(q);
    if (idem > tol * std::max(1.0, nq * nq))
        throw Error(ErrorCode::InvalidInput, "AProjection: ||Q^2 - Q|| = " + std::to_string(idem));
    const double sym = a_symmetry_defect(*form, q);
    if (sym > tol * std::max(1.0, nq))
        throw Error(ErrorCode::InvalidInput, "AProjection: ||AQ - Q*A|| / ||A|| = " + std::to_string(sym));
}

cplx a_inner(const AForm& form, const CMatrix& f, const CMatrix& g)
{
    if (f.rows() != form.dim() || g.rows() != form.dim())
        throw Error(ErrorCode::InvalidInput, "a_inner: vector dimension mismatch");
    return inner(form.matrix() * f, g);
}

CMatrix to_l_model(const AOperator& b) { return b.form->sqrt() * b.m * b.form->inv_sqrt(); }

AOperator from_l_model(const FormRef& form, const CMatrix& bl)
{
    return {form, form->inv_sqrt() * bl * form->sqrt()};
}

CMatrix to_l_model(const AForm& codomain, const AForm& domain, const CMatrix& t)
{
    return codomain.sqrt() * t * domain.inv_sqrt();
}

CMatrix from_l_model(const AForm& codomain, const AForm& domain, const CMatrix& tl)
{
    return codomain.inv_sqrt() * tl * domain.sqrt();
}

AOperator a_adjoint(const AOperator& b)
{
    return {b.form, b.form->inverse() * b.m.adjoint() * b.form->matrix()};
}

CMatrix a_adjoint(const AForm& codomain, const AForm& domain, const CMatrix& t)
{
    return domain.inverse() * t.adjoint() * codomain.matrix();
}

double banach_norm(const AOperator& b) { return std::max(svd_norm(b.m), svd_norm(a_adjoint(b).m)); }

double l_norm(const AOperator& b) { return svd_norm(to_l_model(b)); }

bool is_a_symmetric(const AOperator& b, double tol)
{
    const CMatrix& a = b.form->matrix();
    const double defect = svd_norm(a * b.m - b.m.adjoint() * a);
    return defect <= tol * b.form->scale() * svd_norm(b.m);
}

AProjection compatible_projector(const FormRef& form, const CMatrix& f)
{
    if (f.rows() != form->dim() || f.cols() == 0 || f.cols() > f.rows())
        throw Error(ErrorCode::InvalidInput, "compatible_projector: F must be n x k with 1 <= k <= n");
    const Svd s = svd(f);
    if (s.values.back() <= 1e-10 * s.values.front())
        throw Error(ErrorCode::RankDeficient, "compatible_projector: sigma_min/sigma_max = " +
                                                  std::to_string(s.values.back() / s.values.front()));
    const CMatrix fa = f.adjoint() * form->matrix();
    const CMatrix q = f * solve(fa * f, fa);
    return {form, q};
}

CMatrix projector_from_idempotent(const CMatrix& q, double tol)
{
    if (!q.is_square())
        throw Error(ErrorCode::InvalidInput, "projector_from_idempotent: Q must be square");
    const double nq = svd_norm(q);
    const double idem = idempotence_defect(q);
    if (idem > tol * (1.0 + nq * nq))
        throw Error(ErrorCode::InvalidInput, "projector_from_idempotent: ||Q^2 - Q|| = " + std::to_string(idem));
    const CMatrix s = q + q.adjoint() - CMatrix::identity(q.rows());
    // (Q + Q* - I) is Hermitian with spectrum away from 0 exactly when the
    // range and kernel of Q are transversal.
    const HermEig e = herm_eig(s);
    double gap = 0.0;
    if (!e.values.empty()) {
        gap = std::abs(e.values.front());
        for (double l : e.values)
            gap = std::min(gap, std::abs(l));
    }
    if (gap <= 1e-12 * std::max(1.0, nq))
        throw Error(ErrorCode::Singular, "projector_from_idempotent: Q + Q* - I is singular");
    const CMatrix sinv = herm_apply(e, [](double l) { return cplx(1.0 / l); });
    return herm_part(q * sinv);
}

LambdaBound smallest_lambda(const CMatrix& m, const CMatrix& n, double complement_tol, double abs_tol)
{
    if (m.rows() != n.rows())
        throw Error(ErrorCode::InvalidInput, "smallest_lambda: row mismatch");
    LambdaBound out;
    const double mnorm = svd_norm(m);
    if (mnorm == 0.0) {
        out.lambda = 0.0;
        return out;
    }
    const Svd s = svd(n);
    std::size_t r = 0;
    while (r < s.values.size() && s.values.front() > 0.0 && s.values[r] > 1e-12 * s.values.front())
        ++r;
    const CMatrix ur = s.u.block(0, 0, n.rows(), r);
    const CMatrix c = ur.adjoint() * m;
    out.complement_mass = svd_norm(m - ur * c);
    if (r == 0 || out.complement_mass > complement_tol * mnorm)
        return out;

    CMatrix d2(r, r);
    for (std::size_t k = 0; k < r; ++k)
        d2(k, k) = s.values[k] * s.values[k];
    const CMatrix cc = herm_part(c * c.adjoint());
    const double cnorm2 = svd_norm(cc);
    const double smin2 = s.values[r - 1] * s.values[r - 1];
    const double smax2 = s.values[0] * s.values[0];

    auto feasible = [&](double lambda) {
        const double floor = -1e-13 * (lambda * smax2 + cnorm2);
        return lambda_min(lambda * d2 - cc) >= floor;
    };
    double lo = 0.0;
    double hi = cnorm2 / smin2;
    if (feasible(lo)) {
        out.lambda = 0.0;
        return out;
    }
    while (hi - lo > abs_tol && out.steps < 400) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (feasible(mid) ? hi : lo) = mid;
        ++out.steps;
    }
    out.lambda = hi;
    return out;
}

DouglasResult douglas(const CMatrix& a, const CMatrix& b, double tol)
{
    if (!a.is_square() || a.rows() != b.rows())
        throw Error(ErrorCode::InvalidInput, "douglas: A must be square with as many rows as B");
    const HermEig e = herm_eig(a);
    const double amax = e.values.empty() ? 0.0 : std::max(std::abs(e.values.front()), e.values.back());
    if (!e.values.empty() && e.values.front() < -1e-10 * std::max(amax, 1e-300))
        throw Error(ErrorCode::NotPSD, "douglas: A has eigenvalue " + std::to_string(e.values.front()));

    DouglasResult out;
    const double bnorm = svd_norm(b);
    const std::size_t n = a.rows();

    // Range test through the eigenprojection of A.
    CMatrix range_proj(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (e.values[k] <= 1e-12 * amax || amax == 0.0)
            continue;
        ++out.rank;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                range_proj(i, j) += e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    out.complement_mass = svd_norm(b - range_proj * b);
    out.range_inclusion = out.complement_mass <= tol * bnorm;

    // Solvability through the pseudoinverse.
    PinvSolution ps = pinv_solve(a, b);
    out.residual = ps.residual;
    out.solvable = ps.residual <= tol * bnorm;
    if (out.solvable)
        out.x = std::move(ps.x);

    // Majorization BB* <= lambda AA*.
    const LambdaBound lb = smallest_lambda(b, a, tol);
    out.lambda_bounded = lb.lambda.has_value();
    out.lambda = lb.lambda;
    out.bisection_steps = lb.steps;
    return out;
}

} // namespace ageom
