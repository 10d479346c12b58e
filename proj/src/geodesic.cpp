#include "ageom/geodesic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <queue>
#include <string>
#include <thread>

#include "ageom/error.hpp"

namespace ageom {

namespace {

constexpr cplx I{0.0, 1.0};

// K(s) = s K1 + s(1 - s) M.
CMatrix path_generator(const CMatrix& k1, const CMatrix& m, double s) { return s * k1 + (s * (1.0 - s)) * m; }

} // namespace

TangentVector make_tangent(const AIsometry& t, const CMatrix& v, double tol)
{
    if (v.rows() != t.matrix().rows() || v.cols() != t.matrix().cols())
        throw Error(ErrorCode::InvalidInput, "make_tangent: V must have the shape of T");
    const CMatrix t_l = t.l_model();
    const CMatrix v_l = to_l_model(*t.form(), *t.domain(), v);
    const CMatrix p = herm_part(t_l * t_l.adjoint());
    const CMatrix y = -I * v_l * t_l.adjoint();
    const double scale = std::max(1.0, svd_norm(v_l));
    const double col_defect = svd_norm(y - y * p);
    const CMatrix pyp = p * y * p;
    const double herm_defect = svd_norm(pyp - pyp.adjoint());
    if (col_defect > tol * scale || herm_defect > tol * scale)
        throw Error(ErrorCode::NotTangent, "make_tangent: ||Y - YP|| = " + std::to_string(col_defect) +
                                               ", ||PYP - (PYP)*|| = " + std::to_string(herm_defect));
    TangentVector out{t, v, v_l, herm_part(y + y.adjoint() - pyp), p, 0.0};
    out.norm = svd_norm(v_l);
    return out;
}

CMatrix tangent_from_hermitian(const AIsometry& t, const CMatrix& h_l)
{
    return from_l_model(*t.form(), *t.domain(), I * h_l * t.l_model());
}

CMatrix GeodesicCurve::at_l(double t) const
{
    return herm_apply(z_eig, [t](double l) { return std::polar(1.0, t * l); }) * t_l;
}

CMatrix GeodesicCurve::at(double t) const { return from_l_model(*base.form(), *base.domain(), at_l(t)); }

CMatrix GeodesicCurve::velocity_l(double t) const { return I * z_l * at_l(t); }

AOperator GeodesicCurve::z() const { return from_l_model(base.form(), z_l); }

GeodesicCurve minimal_curve(const TangentVector& v, const KreinOptions& opts)
{
    const std::size_t n = v.base.form()->dim();
    GeodesicCurve c{v.base, v.base.l_model(), CMatrix(n, n), {}, v.norm, std::numbers::pi, std::nullopt};
    if (v.norm > 0.0) {
        const KreinInstance inst = KreinInstance::make(v.x_l, v.p_l);
        KreinReport rep = extend_paper(inst, opts);
        c.z_l = rep.z;
        c.extension = std::move(rep);
    }
    c.z_eig = herm_eig(c.z_l);
    return c;
}

LengthResult curve_length(const std::function<double(double)>& speed, double a, double b, double tol, int max_levels)
{
    LengthResult out;
    if (a == b)
        return out;
    struct Cell {
        double left;
        double width;
        double f_left, f_mid, f_right;
        int level;
        double fine() const { return width / 3.0 * (f_left + f_mid + f_right); }
        double change() const { return std::abs(fine() - width * f_mid); }
    };
    auto make = [&](double left, double width, double f_mid, int level) {
        out.evaluations += 2;
        out.levels = std::max(out.levels, level);
        return Cell{left, width, speed(left + width / 6.0), f_mid, speed(left + 5.0 * width / 6.0), level};
    };
    auto less = [](const Cell& x, const Cell& y) { return x.change() < y.change(); };
    std::priority_queue<Cell, std::vector<Cell>, decltype(less)> cells(less);

    // Start from 4 midpoint cells tripled once; then triple the cell whose
    // one- and three-point values disagree most (its old midpoint becomes the
    // centre of the new cells) until the summed disagreement is below tol.
    const double width0 = (b - a) / 4.0;
    for (int i = 0; i < 4; ++i) {
        const double left = a + i * width0;
        ++out.evaluations;
        cells.push(make(left, width0, speed(left + 0.5 * width0), 1));
    }
    auto total_change = [&] {
        double sum = 0.0;
        auto copy = cells;
        for (; !copy.empty(); copy.pop())
            sum += copy.top().change();
        return sum;
    };
    double change = total_change();
    for (std::size_t refinements = 0; change >= tol; ++refinements) {
        const Cell c = cells.top();
        if (c.level >= max_levels)
            throw Error(ErrorCode::NoConvergence, "curve_length: quadrature did not settle to " + std::to_string(tol));
        cells.pop();
        const double w3 = c.width / 3.0;
        const Cell kids[3] = {make(c.left, w3, c.f_left, c.level + 1), make(c.left + w3, w3, c.f_mid, c.level + 1),
                              make(c.left + 2.0 * w3, w3, c.f_right, c.level + 1)};
        change -= c.change();
        for (const Cell& k : kids) {
            change += k.change();
            cells.push(k);
        }
        if (refinements % 64 == 63)
            change = total_change();
    }
    std::vector<Cell> leaves;
    for (; !cells.empty(); cells.pop())
        leaves.push_back(cells.top());
    std::sort(leaves.begin(), leaves.end(), [](const Cell& x, const Cell& y) { return x.left < y.left; });
    for (const Cell& c : leaves)
        out.length += c.fine();
    return out;
}

LengthResult exponential_path_length(const CMatrix& k1, const CMatrix& m, const CMatrix& t_l, DerivativeMethod method,
                                     double tol)
{
    auto speed = [&](double s) {
        const CMatrix k = path_generator(k1, m, s);
        const CMatrix dk = k1 + (1.0 - 2.0 * s) * m;
        const CMatrix d = method == DerivativeMethod::DividedDifferences ? exp_i_hermitian_frechet(k, dk)
                                                                          : expm_frechet(I * k, I * dk);
        return svd_norm(d * t_l);
    };
    return curve_length(speed, 0.0, 1.0, tol);
}

unsigned worker_count(unsigned requested)
{
    unsigned cap = 1;
    if (const char* env = std::getenv("A_GEOM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            cap = static_cast<unsigned>(std::min<long>(v, 256));
    }
    return requested == 0 ? cap : std::min(requested, cap);
}

RaceReport race(const GeodesicCurve& curve, const RaceOptions& opts)
{
    if (opts.t1 < 0.0 || opts.t1 > std::numbers::pi + 1e-12)
        throw Error(ErrorCode::InvalidInput, "race: t1 must lie in [0, pi]");
    const std::size_t n = curve.z_l.rows();
    RaceReport rep;
    rep.t1 = opts.t1;
    rep.seed = opts.seed;
    rep.competitor_lengths.assign(opts.trials, 0.0);
    rep.perturbation_norms.assign(opts.trials, 0.0);
    std::vector<double> endpoint(opts.trials, 0.0);

    rep.geodesic_length =
        curve_length([&](double s) { return svd_norm(curve.velocity_l(s)); }, 0.0, opts.t1, opts.tol).length;

    const CMatrix k1 = opts.t1 * curve.z_l;
    const CMatrix target = curve.at_l(opts.t1);

    auto run_trial = [&](std::size_t j) {
        Rng rng(opts.seed, j);
        CMatrix m = random_hermitian(rng, n);
        const double radius = (1.0 - rng.uniform()) * std::numbers::pi;
        m *= radius / svd_norm(m);
        endpoint[j] = svd_norm(exp_i_hermitian(path_generator(k1, m, 1.0)) * curve.t_l - target);
        rep.perturbation_norms[j] = radius;
        rep.competitor_lengths[j] = exponential_path_length(k1, m, curve.t_l, opts.derivative, opts.tol).length;
    };

    const unsigned workers = std::min<std::size_t>(worker_count(opts.threads), std::max<std::size_t>(opts.trials, 1));
    if (workers <= 1) {
        for (std::size_t j = 0; j < opts.trials; ++j)
            run_trial(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < opts.trials; j = next++) {
                    try {
                        run_trial(j);
                    } catch (...) {
                        if (!failed.exchange(true))
                            failure = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    for (std::size_t j = 0; j < opts.trials; ++j) {
        rep.max_endpoint_error = std::max(rep.max_endpoint_error, endpoint[j]);
        if (rep.competitor_lengths[j] < opts.t1 - opts.tol)
            ++rep.violations;
    }
    if (!rep.competitor_lengths.empty()) {
        std::vector<double> sorted = rep.competitor_lengths;
        std::sort(sorted.begin(), sorted.end());
        rep.min_length = sorted.front();
        const std::size_t mid = sorted.size() / 2;
        rep.median_length = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
    return rep;
}

} // namespace ageom
