#include "ageom/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "ageom/error.hpp"

namespace ageom {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::InvalidInput,
                    std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
}

void require_square(const CMatrix& a, const char* op)
{
    if (!a.is_square())
        throw Error(ErrorCode::InvalidInput, std::string(op) + ": matrix must be square");
}

} // namespace

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data))
{
    if (data_.size() != rows_ * cols_)
        throw Error(ErrorCode::InvalidInput, "CMatrix: data length " + std::to_string(data_.size()) +
                                                 " does not match " + std::to_string(rows_) + "x" +
                                                 std::to_string(cols_));
    if (!all_finite())
        throw Error(ErrorCode::InvalidInput, "CMatrix: non-finite entry");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw Error(ErrorCode::InvalidInput, "CMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d)
{
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> d)
{
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::column(std::span<const cplx> v)
{
    return {v.size(), 1, std::vector<cplx>(v.begin(), v.end())};
}

CMatrix CMatrix::basis_vector(std::size_t n, std::size_t k)
{
    CMatrix m(n, 1);
    m(k, 0) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const
{
    CMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = std::conj((*this)(i, j));
    return t;
}

CMatrix CMatrix::transpose() const
{
    CMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw Error(ErrorCode::InvalidInput, "CMatrix::block out of range");
    CMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& b)
{
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
        throw Error(ErrorCode::InvalidInput, "CMatrix::set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            (*this)(r0 + i, c0 + j) = b(i, j);
}

bool CMatrix::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& o)
{
    require_same_shape(*this, o, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] += o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o)
{
    require_same_shape(*this, o, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] -= o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) noexcept
{
    for (auto& z : data_)
        z *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator-(CMatrix a) { return a *= -1.0; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
CMatrix operator/(CMatrix a, cplx s) { return a *= 1.0 / s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b)
{
    if (a.cols() != b.rows())
        throw Error(ErrorCode::InvalidInput, "operator*: inner dimensions " + std::to_string(a.cols()) +
                                                 " and " + std::to_string(b.rows()) + " differ");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    CMatrix c(n, m);
    auto cd = c.data();
    const auto ad = a.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < n; ++i) {
        cplx* crow = cd.data() + i * m;
        for (std::size_t l = 0; l < k; ++l) {
            const cplx ail = ad[i * k + l];
            if (ail == cplx{})
                continue;
            const cplx* brow = bd.data() + l * m;
            for (std::size_t j = 0; j < m; ++j)
                crow[j] += ail * brow[j];
        }
    }
    return c;
}

double norm_fro(const CMatrix& m) noexcept
{
    double s = 0.0;
    for (const auto& z : m.data())
        s += std::norm(z);
    return std::sqrt(s);
}

double norm_max(const CMatrix& m) noexcept
{
    double s = 0.0;
    for (const auto& z : m.data())
        s = std::max(s, std::abs(z));
    return s;
}

double norm_one(const CMatrix& m) noexcept
{
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i)
            s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

cplx trace(const CMatrix& m) noexcept
{
    cplx s{};
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        s += m(i, i);
    return s;
}

CMatrix herm_part(const CMatrix& m)
{
    require_square(m, "herm_part");
    CMatrix h(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

double hermiticity_defect(const CMatrix& m)
{
    require_square(m, "hermiticity_defect");
    double d = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

cplx inner(const CMatrix& f, const CMatrix& g)
{
    require_same_shape(f, g, "inner");
    cplx s{};
    for (std::size_t k = 0; k < f.data().size(); ++k)
        s += f.data()[k] * std::conj(g.data()[k]);
    return s;
}

// ---------------------------------------------------------------------------
// Jacobi

namespace {

HermEig jacobi(const CMatrix& m, double herm_tol, bool want_vectors)
{
    require_square(m, "herm_eig");
    const std::size_t n = m.rows();
    const double scale = norm_max(m);
    const double defect = hermiticity_defect(m);
    if (defect > herm_tol * std::max(scale, 1e-300))
        throw Error(ErrorCode::NonHermitian,
                    "herm_eig: ||M - M*||_max = " + std::to_string(defect) + " exceeds tolerance");

    CMatrix a = herm_part(m);
    CMatrix v = want_vectors ? CMatrix::identity(n) : CMatrix();
    const double fro = norm_fro(a);
    constexpr int max_sweeps = 80;

    int sweep = 0;
    for (;; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += std::norm(a(p, q));
        off = std::sqrt(2.0 * off);
        if (off <= 1e-15 * fro || off == 0.0)
            break;
        if (sweep == max_sweeps)
            throw Error(ErrorCode::NoConvergence, "herm_eig: Jacobi sweep cap reached");

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::sqrt(std::norm(apq));
                if (r < 1e-300)
                    continue;
                const cplx e = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = [[c, s], [-s conj(e), c conj(e)]] on the (p, q) plane.
                const cplx j_qp = -s * std::conj(e);
                const cplx j_qq = c * std::conj(e);

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * c + akq * j_qp;
                    a(k, q) = akp * s + akq * j_qq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(j_qp) * aqk;
                    a(q, k) = s * apk + std::conj(j_qq) * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; want_vectors && k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * c + vkq * j_qp;
                    v(k, q) = vkp * s + vkq * j_qq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    HermEig out;
    out.values.resize(n);
    out.vectors = want_vectors ? CMatrix(n, n) : CMatrix();
    out.sweeps = sweep;
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; want_vectors && i < n; ++i)
            out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

} // namespace

HermEig herm_eig(const CMatrix& m, double herm_tol) { return jacobi(m, herm_tol, true); }

std::vector<double> herm_eigvalues(const CMatrix& m, double herm_tol) { return jacobi(m, herm_tol, false).values; }

double lambda_min(const CMatrix& hermitian)
{
    const auto e = herm_eigvalues(hermitian);
    return e.empty() ? 0.0 : e.front();
}

double lambda_max(const CMatrix& hermitian)
{
    const auto e = herm_eigvalues(hermitian);
    return e.empty() ? 0.0 : e.back();
}

CMatrix herm_sqrt(const CMatrix& psd)
{
    return herm_apply(herm_eig(psd), [](double l) { return cplx(std::sqrt(std::max(l, 0.0))); });
}

CMatrix herm_inv_sqrt(const CMatrix& pd)
{
    const auto e = herm_eig(pd);
    if (!e.values.empty() && e.values.front() <= 0.0)
        throw Error(ErrorCode::Singular, "herm_inv_sqrt: matrix is not positive definite");
    return herm_apply(e, [](double l) { return cplx(1.0 / std::sqrt(l)); });
}

// ---------------------------------------------------------------------------
// Norms and SVD

double svd_norm(const CMatrix& m)
{
    if (m.empty())
        return 0.0;
    const CMatrix gram = m.cols() <= m.rows() ? m.adjoint() * m : m * m.adjoint();
    const auto e = herm_eigvalues(gram);
    return std::sqrt(std::max(e.back(), 0.0));
}

Svd svd(const CMatrix& m)
{
    const std::size_t r = m.rows(), c = m.cols();
    const std::size_t p = std::min(r, c);
    CMatrix dil(r + c, r + c);
    dil.set_block(0, r, m);
    dil.set_block(r, 0, m.adjoint());
    const auto e = herm_eig(dil);

    Svd out;
    out.values.resize(p);
    out.u = CMatrix(r, p);
    out.v = CMatrix(c, p);
    const double root2 = std::sqrt(2.0);
    for (std::size_t k = 0; k < p; ++k) {
        const std::size_t idx = r + c - 1 - k;
        out.values[k] = std::max(e.values[idx], 0.0);
        for (std::size_t i = 0; i < r; ++i)
            out.u(i, k) = root2 * e.vectors(i, idx);
        for (std::size_t i = 0; i < c; ++i)
            out.v(i, k) = root2 * e.vectors(r + i, idx);
    }
    return out;
}

PinvSolution pinv_solve(const CMatrix& m, const CMatrix& b, double rel_cutoff)
{
    if (m.rows() != b.rows())
        throw Error(ErrorCode::InvalidInput, "pinv_solve: M and B must have the same number of rows");
    const Svd s = svd(m);
    PinvSolution out;
    out.x = CMatrix(m.cols(), b.cols());
    const double smax = s.values.empty() ? 0.0 : s.values.front();
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        if (smax == 0.0 || s.values[k] <= rel_cutoff * smax)
            break;
        ++out.rank;
        // x += v_k (u_k* b) / sigma_k
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx coef{};
            for (std::size_t i = 0; i < m.rows(); ++i)
                coef += std::conj(s.u(i, k)) * b(i, j);
            coef /= s.values[k];
            for (std::size_t i = 0; i < m.cols(); ++i)
                out.x(i, j) += s.v(i, k) * coef;
        }
    }
    out.residual = svd_norm(m * out.x - b);
    return out;
}

CMatrix solve(const CMatrix& a, const CMatrix& b)
{
    require_square(a, "solve");
    if (a.rows() != b.rows())
        throw Error(ErrorCode::InvalidInput, "solve: right-hand side has wrong row count");
    const std::size_t n = a.rows(), m = b.cols();
    CMatrix lu = a;
    CMatrix x = b;
    const double scale = norm_max(a);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                piv = i;
            }
        if (best <= 1e-15 * scale || best == 0.0)
            throw Error(ErrorCode::Singular, "solve: matrix is numerically singular");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(lu(k, j), lu(piv, j));
            for (std::size_t j = 0; j < m; ++j)
                std::swap(x(k, j), x(piv, j));
        }
        const cplx inv_p = 1.0 / lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = lu(i, k) * inv_p;
            if (f == cplx{})
                continue;
            lu(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j)
                lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < m; ++j)
                x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        const cplx inv_p = 1.0 / lu(kk, kk);
        for (std::size_t j = 0; j < m; ++j) {
            cplx s = x(kk, j);
            for (std::size_t l = kk + 1; l < n; ++l)
                s -= lu(kk, l) * x(l, j);
            x(kk, j) = s * inv_p;
        }
    }
    return x;
}

CMatrix inverse(const CMatrix& a) { return solve(a, CMatrix::identity(a.rows())); }

// ---------------------------------------------------------------------------
// Exponentials

namespace {

// Pade coefficients and thresholds for scaling and squaring in the 1-norm.
constexpr std::array<double, 4> pade3{120., 60., 12., 1.};
constexpr std::array<double, 6> pade5{30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> pade7{17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
constexpr std::array<double, 10> pade9{17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                       2162160.,     110880.,     3960.,       90.,        1.};
constexpr std::array<double, 14> pade13{64764752532480000., 32382376266240000., 7771770303897600.,
                                        1187353796428800.,  129060195264000.,   10559470521600.,
                                        670442572800.,      33522128640.,       1323241920.,
                                        40840800.,          960960.,            16380.,
                                        182.,               1.};
constexpr double theta3 = 1.495585217958292e-2;
constexpr double theta5 = 2.539398330063230e-1;
constexpr double theta7 = 9.504178996162932e-1;
constexpr double theta9 = 2.097847961257068e0;
constexpr double theta13 = 5.371920351148152e0;

template <std::size_t N>
CMatrix pade_low(const CMatrix& a, const std::array<double, N>& b)
{
    const std::size_t n = a.rows();
    const CMatrix ident = CMatrix::identity(n);
    const CMatrix a2 = a * a;
    CMatrix u_even = b[1] * ident;
    CMatrix v = b[0] * ident;
    CMatrix power = ident;
    for (std::size_t j = 1; 2 * j < N; ++j) {
        power = power * a2;
        u_even += b[2 * j + 1] * power;
        v += b[2 * j] * power;
    }
    const CMatrix u = a * u_even;
    return solve(v - u, v + u);
}

CMatrix pade_13(const CMatrix& a)
{
    const auto& b = pade13;
    const std::size_t n = a.rows();
    const CMatrix ident = CMatrix::identity(n);
    const CMatrix a2 = a * a;
    const CMatrix a4 = a2 * a2;
    const CMatrix a6 = a4 * a2;
    const CMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                            b[3] * a2 + b[1] * ident;
    const CMatrix u = a * u_inner;
    const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                      b[0] * ident;
    return solve(v - u, v + u);
}

double skew_defect(const CMatrix& m)
{
    double d = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            d = std::max(d, std::abs(m(i, j) + std::conj(m(j, i))));
    return d;
}

} // namespace

CMatrix mat_exp_pade(const CMatrix& m)
{
    require_square(m, "mat_exp");
    const double nrm = norm_one(m);
    if (nrm <= theta3)
        return pade_low(m, pade3);
    if (nrm <= theta5)
        return pade_low(m, pade5);
    if (nrm <= theta7)
        return pade_low(m, pade7);
    if (nrm <= theta9)
        return pade_low(m, pade9);
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
    CMatrix r = pade_13(m * cplx(std::ldexp(1.0, -s)));
    for (int k = 0; k < s; ++k)
        r = r * r;
    return r;
}

CMatrix mat_exp(const CMatrix& m)
{
    require_square(m, "mat_exp");
    if (m.empty())
        return m;
    const double scale = norm_max(m);
    if (scale == 0.0)
        return CMatrix::identity(m.rows());
    constexpr double structure_tol = 1e-14;
    if (hermiticity_defect(m) <= structure_tol * scale)
        return herm_apply(herm_eig(m), [](double l) { return cplx(std::exp(l)); });
    if (skew_defect(m) <= structure_tol * scale)
        return exp_i_hermitian(cplx(0.0, -1.0) * m);
    return mat_exp_pade(m);
}

CMatrix exp_i_hermitian(const CMatrix& h, double t)
{
    return herm_apply(herm_eig(h), [t](double l) { return std::polar(1.0, t * l); });
}

CMatrix expm_frechet(const CMatrix& m, const CMatrix& e)
{
    require_square(m, "expm_frechet");
    require_same_shape(m, e, "expm_frechet");
    const std::size_t n = m.rows();
    CMatrix big(2 * n, 2 * n);
    big.set_block(0, 0, m);
    big.set_block(n, n, m);
    big.set_block(0, n, e);
    return mat_exp_pade(big).block(0, n, n, n);
}

CMatrix exp_i_hermitian_frechet(const HermEig& h_eig, const CMatrix& e)
{
    const std::size_t n = h_eig.values.size();
    const CMatrix& v = h_eig.vectors;
    CMatrix et = v.adjoint() * e * v;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double lj = h_eig.values[j], lk = h_eig.values[k];
            const double half = 0.5 * (lj - lk);
            const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
            // (e^{i lj} - e^{i lk}) / (lj - lk) = i e^{i (lj + lk) / 2} sinc((lj - lk) / 2)
            const cplx dd = cplx(0.0, 1.0) * std::polar(1.0, 0.5 * (lj + lk)) * sinc;
            et(j, k) *= dd;
        }
    }
    return v * et * v.adjoint();
}

CMatrix exp_i_hermitian_frechet(const CMatrix& h, const CMatrix& e)
{
    return exp_i_hermitian_frechet(herm_eig(h), e);
}

} // namespace ageom
