#include "ageom/random.hpp"

#include <cmath>

#include "ageom/error.hpp"

namespace ageom {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    // splitmix64 of a mix of both words
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

cplx Rng::complex_normal()
{
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

std::size_t Rng::index(std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
}

CMatrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols)
{
    CMatrix g(rows, cols);
    for (auto& z : g.data())
        z = rng.complex_normal();
    return g;
}

CMatrix random_hermitian(Rng& rng, std::size_t n) { return herm_part(random_ginibre(rng, n, n)); }

CMatrix random_unitary(Rng& rng, std::size_t n)
{
    // Modified Gram-Schmidt on the columns; phases of R's diagonal are
    // absorbed so the result is Haar.
    CMatrix q = random_ginibre(rng, n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx d{};
                for (std::size_t i = 0; i < n; ++i)
                    d += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < n; ++i)
                    q(i, j) -= d * q(i, k);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            nrm += std::norm(q(i, j));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0)
            throw Error(ErrorCode::Singular, "random_unitary: degenerate draw");
        for (std::size_t i = 0; i < n; ++i)
            q(i, j) /= nrm;
    }
    return q;
}

CMatrix random_pd(Rng& rng, std::size_t n, double cond)
{
    std::vector<double> ev(n);
    const double lo = std::log(1.0 / cond);
    for (auto& l : ev)
        l = std::exp(rng.uniform(lo, 0.0));
    if (n > 0) {
        ev[0] = 1.0;
        if (n > 1)
            ev[1] = 1.0 / cond;
    }
    const CMatrix u = random_unitary(rng, n);
    return herm_part(u * CMatrix::diagonal(std::span<const double>(ev)) * u.adjoint());
}

CMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank)
{
    const CMatrix g = random_ginibre(rng, n, rank);
    return herm_part(g * g.adjoint());
}

CMatrix random_orthogonal_projection(Rng& rng, std::size_t n, std::size_t k)
{
    const CMatrix u = random_unitary(rng, n).block(0, 0, n, k);
    return herm_part(u * u.adjoint());
}

CMatrix random_a_unitary(Rng& rng, const CMatrix& a)
{
    const CMatrix u = random_unitary(rng, a.rows());
    return herm_inv_sqrt(a) * u * herm_sqrt(a);
}

CMatrix random_a_unitary_near_identity(Rng& rng, const CMatrix& a, double eps)
{
    const CMatrix h = random_hermitian(rng, a.rows());
    const double nrm = svd_norm(h);
    const CMatrix u = exp_i_hermitian(h, nrm > 0.0 ? eps / nrm : 0.0);
    return herm_inv_sqrt(a) * u * herm_sqrt(a);
}

} // namespace ageom
