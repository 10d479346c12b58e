#include "ageom/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ageom/error.hpp"

namespace ageom {

IsometryCheck check_isometry(const AForm& codomain, const AForm& domain, const CMatrix& t, double tol)
{
    if (t.rows() != codomain.dim() || t.cols() != domain.dim())
        throw Error(ErrorCode::InvalidInput, "check_isometry: T must be " + std::to_string(codomain.dim()) + "x" +
                                                 std::to_string(domain.dim()));
    IsometryCheck out;
    out.defect = svd_norm(t.adjoint() * codomain.matrix() * t - domain.matrix()) / domain.scale();
    out.isometric = out.defect <= tol;
    const LambdaBound lb = smallest_lambda(t.adjoint() * codomain.matrix(), domain.matrix());
    out.lambda_witness = lb.lambda.value_or(std::numeric_limits<double>::infinity());
    return out;
}

IsometryCheck check_isometry(const AForm& form, const CMatrix& t, double tol)
{
    return check_isometry(form, form, t, tol);
}

AIsometry::AIsometry(FormRef codomain, FormRef domain, CMatrix t, double tol)
    : form_(std::move(codomain)), domain_(std::move(domain)), t_(std::move(t))
{
    if (!form_ || !domain_)
        throw Error(ErrorCode::InvalidInput, "AIsometry: missing form");
    if (t_.rows() != form_->dim() || t_.cols() != domain_->dim())
        throw Error(ErrorCode::InvalidInput, "AIsometry: shape does not match the forms");
    defect_ = svd_norm(t_.adjoint() * form_->matrix() * t_ - domain_->matrix()) / domain_->scale();
    if (defect_ > tol)
        throw Error(ErrorCode::NotIsometric, "||T*AT - A_dom|| / ||A_dom|| = " + std::to_string(defect_));
}

AIsometry::AIsometry(FormRef form, CMatrix t, double tol) : AIsometry(form, form, std::move(t), tol) {}

CMatrix AIsometry::sharp() const { return a_adjoint(*form_, *domain_, t_); }

CMatrix AIsometry::l_model() const { return to_l_model(*form_, *domain_, t_); }

AUnitary::AUnitary(FormRef form, CMatrix g, double tol) : AIsometry(form, form, std::move(g), tol)
{
    inv_ = ageom::inverse(matrix());
    const double gap = svd_norm(inv_ - sharp()) / std::max(1.0, svd_norm(inv_));
    if (gap > tol)
        throw Error(ErrorCode::NotIsometric, "AUnitary: ||G^{-1} - G^#|| = " + std::to_string(gap));
}

AProjection final_projection(const AIsometry& t) { return {t.form(), t.matrix() * t.sharp(), 1e-8}; }

AUnitary projection_section(const AProjection& p0, const AProjection& p, SectionDiagnostics* diag)
{
    if (p0.form->dim() != p.form->dim() || svd_norm(p0.form->matrix() - p.form->matrix()) >
                                                   1e-12 * p0.form->scale())
        throw Error(ErrorCode::InvalidInput, "projection_section: projections live on different forms");
    const FormRef& form = p0.form;
    const std::size_t n = form->dim();
    const CMatrix ident = CMatrix::identity(n);
    const CMatrix q0 = herm_part(to_l_model(AOperator(form, p0.q)));
    const CMatrix q = herm_part(to_l_model(AOperator(form, p.q)));
    const CMatrix d = q - q0;
    const double dist = svd_norm(d);
    if (dist >= 1.0 - 1e-6)
        throw Error(ErrorCode::TooFar, "projection_section: ||P - P0|| = " + std::to_string(dist) +
                                           " in the L-model");

    const CMatrix gram = herm_part(ident - d * d);
    const CMatrix gl = (q * q0 + (ident - q) * (ident - q0)) * herm_inv_sqrt(gram);
    AUnitary g(form, from_l_model(form, gl).m, 1e-8);

    if (diag != nullptr) {
        diag->distance = dist;
        diag->conjugation = svd_norm(g.matrix() * p0.q * g.inverse() - p.q) / std::max(1.0, svd_norm(p.q));
        diag->isometry = g.defect();
    }
    return g;
}

AUnitary isometry_section(const AIsometry& t0, const AIsometry& t)
{
    if (t0.form() != t.form() &&
        (t0.form()->dim() != t.form()->dim() ||
         svd_norm(t0.form()->matrix() - t.form()->matrix()) > 1e-12 * t0.form()->scale()))
        throw Error(ErrorCode::InvalidInput, "isometry_section: isometries act into different spaces");
    if (t0.matrix().cols() != t.matrix().cols() ||
        svd_norm(t0.domain()->matrix() - t.domain()->matrix()) > 1e-12 * t0.domain()->scale())
        throw Error(ErrorCode::InvalidInput, "isometry_section: isometries have different domains");
    const FormRef& form = t0.form();
    const std::size_t n = form->dim();
    const AProjection p0 = final_projection(t0);
    const AProjection p = final_projection(t);
    const AUnitary g = projection_section(p0, p);
    const CMatrix sigma = t.matrix() * t0.sharp() + g.matrix() * (CMatrix::identity(n) - p0.q);
    return {form, sigma, 1e-8};
}

AUnitary conjugator(const AIsometry& t1, const AIsometry& t2, const AUnitary& h, double tol)
{
    const FormRef& form = t2.form();
    const std::size_t n = form->dim();
    if (t1.form()->dim() != n || h.form()->dim() != n || t1.matrix().cols() != t2.matrix().cols())
        throw Error(ErrorCode::InvalidInput, "conjugator: dimension mismatch");
    const AProjection p1 = final_projection(t1);
    const AProjection p2 = final_projection(t2);
    const double mismatch =
        svd_norm(h.matrix() * p1.q * h.inverse() - p2.q) / std::max(1.0, svd_norm(p2.q));
    if (mismatch > tol)
        throw Error(ErrorCode::ProjectionMismatch, "conjugator: ||H P1 H^{-1} - P2|| = " + std::to_string(mismatch));
    const AIsometry t1h(form, t1.domain(), h.matrix() * t1.matrix(), 1e-8);
    const CMatrix k = t2.matrix() * t1h.sharp() + CMatrix::identity(n) - p2.q;
    return {form, k, 1e-8};
}

WoldSplit dense_wold(const AIsometry& t)
{
    if (!t.square())
        throw Error(ErrorCode::InvalidInput, "dense_wold: T must act on a single space");
    if (t.defect() > 1e-8)
        throw Error(ErrorCode::NotIsometric, "dense_wold: T is not an A-isometry");
    const std::size_t n = t.matrix().rows();
    const Svd s = svd(t.l_model());
    std::size_t rank = 0;
    for (double v : s.values)
        if (v > 1e-10 * s.values.front())
            ++rank;
    WoldSplit out;
    out.complement_dim_estimate = static_cast<double>(n - rank);
    if (rank != n)
        throw Error(ErrorCode::NotIsometric, "dense_wold: isometry is not invertible");
    // R(T) has trivial A-orthogonal complement, so the wandering space
    // L - T L is zero and the whole space is the unitary part.
    out.unitary_dim = n;
    return out;
}

AIsometry random_isometry(Rng& rng, const FormRef& codomain, const FormRef& domain)
{
    const std::size_t n = codomain->dim();
    const std::size_t k = domain->dim();
    if (k > n)
        throw Error(ErrorCode::InvalidInput, "random_isometry: domain larger than codomain");
    const CMatrix tl = random_unitary(rng, n).block(0, 0, n, k);
    return {codomain, domain, from_l_model(*codomain, *domain, tl), 1e-8};
}

} // namespace ageom
