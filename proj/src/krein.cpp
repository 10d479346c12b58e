#include "ageom/krein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ageom/error.hpp"

namespace ageom {

std::string_view to_string(KreinMethod m) noexcept
{
    return m == KreinMethod::PaperConstruction ? "paper_construction" : "dykstra_fallback";
}

KreinInstance KreinInstance::make(const CMatrix& x, const CMatrix& p)
{
    if (!x.is_square() || !p.is_square() || x.rows() != p.rows() || x.empty())
        throw Error(ErrorCode::InvalidInput, "KreinInstance: X and P must be square of equal size");
    const double xs = norm_max(x);
    if (hermiticity_defect(x) > 1e-10 * std::max(xs, 1e-300))
        throw Error(ErrorCode::NonHermitian, "KreinInstance: X is not Hermitian");
    if (hermiticity_defect(p) > 1e-9 || svd_norm(p * p - p) > 1e-9)
        throw Error(ErrorCode::InvalidInput, "KreinInstance: P is not an orthogonal projection");

    KreinInstance inst;
    inst.n = x.rows();
    inst.p = herm_part(p);
    inst.rank_p = static_cast<std::size_t>(std::lround(trace(inst.p).real()));
    inst.norm_xp = svd_norm(x * inst.p);
    if (inst.norm_xp <= 1e-300)
        throw Error(ErrorCode::InvalidInput, "KreinInstance: XP = 0 cannot be normalized");
    inst.x = herm_part(x) / cplx(inst.norm_xp);
    return inst;
}

bool ProofChecks::ok(double tol) const noexcept
{
    const double scale = 1.0 + norm_bbar;
    return gram_lambda_min > 0.0 && qm_idempotence <= tol && square_identity <= tol &&
           row_identity <= tol * scale && column_identity <= tol * scale && b0_range <= tol * scale &&
           b1_range <= tol * scale;
}

PaperStep paper_step(const KreinInstance& inst, double m)
{
    if (!(m > 1.0))
        throw Error(ErrorCode::GramNotPD, "paper_step: m = " + std::to_string(m) + " must exceed 1");
    const std::size_t n = inst.n;
    const CMatrix ident = CMatrix::identity(n);
    const CMatrix& p = inst.p;
    const CMatrix pc = ident - p;
    const CMatrix xm = inst.x / cplx(m);

    PaperStep out;
    ProofChecks& ck = out.checks;

    const CMatrix b0 = p * xm;
    // Gram operator of [f, g] = <f, g> - <B0 f, B0 g>.
    const CMatrix w = herm_part(ident - xm * p * xm);
    ck.gram_lambda_min = lambda_min(w);
    if (ck.gram_lambda_min <= 0.0)
        throw Error(ErrorCode::GramNotPD, "paper_step: I - X_m P X_m has lambda_min " +
                                              std::to_string(ck.gram_lambda_min));

    // Q_m is the [.,.]-orthogonal projection onto R(P).
    const CMatrix qm = solve(w, p * w);
    const CMatrix s = p + qm - ident;
    const CMatrix pi = p * inverse(s);
    const CMatrix b1 = pc * xm * pi;
    out.bbar = b0 + b1;
    out.z = herm_part(out.bbar) * cplx(m);

    ck.norm_qm = svd_norm(qm);
    ck.norm_bbar = svd_norm(out.bbar);
    const double qscale = 1.0 + ck.norm_qm * ck.norm_qm;
    ck.qm_idempotence = svd_norm(qm * qm - qm) / qscale;
    const CMatrix d = p - qm;
    ck.square_identity = svd_norm(s * s - (ident - d * d)) / qscale;
    ck.row_identity = svd_norm(p * out.bbar - p * xm);
    ck.column_identity = svd_norm(out.bbar * p - xm * p);
    ck.b0_range = svd_norm(pc * b0);
    ck.b1_range = svd_norm(p * b1);
    return out;
}

namespace {

void measure(const KreinInstance& inst, KreinReport& r)
{
    r.norm_z = svd_norm(r.z);
    r.constraint_residual = svd_norm(r.z * inst.p - inst.x * inst.p);
    r.hermiticity = svd_norm(r.z - r.z.adjoint());
}

} // namespace

KreinReport extend_paper(const KreinInstance& inst, const KreinOptions& opts)
{
    const double m0 = opts.m.value_or(1.0 + 1e-3);
    if (!(m0 > 1.0))
        throw Error(ErrorCode::GramNotPD, "extend_paper: m = " + std::to_string(m0) + " must exceed 1");

    KreinReport best;
    bool have_best = false;
    double excess = m0 - 1.0;
    for (int step = 0; step < opts.max_steps && excess >= 1e-13; ++step, excess /= 10.0) {
        const double m = 1.0 + excess;
        PaperStep ps;
        try {
            ps = paper_step(inst, m);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::GramNotPD || e.code() == ErrorCode::Singular)
                break;
            throw;
        }
        KreinReport r;
        r.z = std::move(ps.z);
        r.m_used = m;
        r.checks = ps.checks;
        measure(inst, r);
        best.m_tried.push_back(m);
        r.m_tried = best.m_tried;
        r.iterations = best.m_tried.size();
        best = std::move(r);
        have_best = true;
        if (best.norm_z <= 1.0 + opts.norm_tol && best.constraint_residual <= opts.constraint_tol)
            return best;
    }

    if (!opts.allow_fallback) {
        if (!have_best)
            throw Error(ErrorCode::GramNotPD, "extend_paper: no admissible m in the schedule");
        return best;
    }
    KreinReport fb = extend_dykstra(inst);
    fb.m_tried = best.m_tried;
    fb.checks = best.checks;
    fb.m_used = have_best ? best.m_used : 0.0;
    return fb;
}

KreinReport extend_dykstra(const KreinInstance& inst, const DykstraOptions& opts)
{
    const std::size_t n = inst.n;
    const HermEig pe = herm_eig(inst.p);
    // Frame with the range of P first.
    CMatrix u(n, n);
    std::size_t k = 0;
    for (std::size_t pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < n; ++j) {
            const bool in_range = pe.values[j] > 0.5;
            if (in_range != (pass == 0))
                continue;
            for (std::size_t i = 0; i < n; ++i)
                u(i, k) = pe.vectors(i, j);
            ++k;
        }
    const std::size_t r = inst.rank_p;
    const CMatrix xt = herm_part(u.adjoint() * inst.x * u);

    auto project_affine = [&](CMatrix z) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i < r || j < r)
                    z(i, j) = xt(i, j);
        return z;
    };
    auto project_ball = [](const CMatrix& z) {
        return herm_apply(herm_eig(herm_part(z)), [](double l) { return cplx(std::clamp(l, -1.0, 1.0)); });
    };

    CMatrix x = xt;
    CMatrix pinc(n, n);
    CMatrix qinc(n, n);
    std::size_t it = 0;
    double step = 0.0;
    for (; it < opts.max_iterations; ++it) {
        const CMatrix y = project_affine(x + pinc);
        pinc = x + pinc - y;
        const CMatrix xn = project_ball(y + qinc);
        qinc = y + qinc - xn;
        step = norm_fro(xn - x);
        x = xn;
        if (step < opts.step_tol)
            break;
        if (opts.feasibility_stride > 0 && (it + 1) % opts.feasibility_stride == 0 &&
            svd_norm(project_affine(x)) <= 1.0 + opts.norm_tol)
            break;
    }

    KreinReport rep;
    rep.method = KreinMethod::DykstraFallback;
    rep.iterations = it + 1;
    rep.z = herm_part(u * project_affine(x) * u.adjoint());
    measure(inst, rep);
    if (rep.norm_z > 1.0 + opts.norm_tol || rep.constraint_residual > 1e-8)
        throw Error(ErrorCode::NoConvergence,
                    "extend_dykstra: after " + std::to_string(rep.iterations) + " iterations ||Z|| - 1 = " +
                        std::to_string(rep.norm_z - 1.0) + ", ||ZP - XP|| = " +
                        std::to_string(rep.constraint_residual) + ", last step " + std::to_string(step));
    return rep;
}

ExtensionCheck verify_extension(const KreinInstance& inst, const CMatrix& z, double constraint_tol, double norm_tol)
{
    if (z.rows() != inst.n || z.cols() != inst.n)
        throw Error(ErrorCode::InvalidInput, "verify_extension: Z has the wrong shape");
    ExtensionCheck c;
    c.hermiticity = svd_norm(z - z.adjoint());
    c.constraint_residual = svd_norm(z * inst.p - inst.x * inst.p);
    c.norm = svd_norm(z);
    c.ok = c.hermiticity <= 1e-10 && c.constraint_residual <= constraint_tol && c.norm <= 1.0 + norm_tol;
    return c;
}

std::vector<NormProfilePoint> norm_profile(const KreinInstance& inst, std::span<const double> ms)
{
    std::vector<NormProfilePoint> out;
    for (double m : ms) {
        try {
            const PaperStep ps = paper_step(inst, m);
            out.push_back({m, ps.checks.norm_bbar, svd_norm(ps.z)});
        } catch (const Error&) {
        }
    }
    return out;
}

} // namespace ageom
