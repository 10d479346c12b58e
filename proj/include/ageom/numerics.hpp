#pragma once

// Dense complex linear algebra kernels shared by every other module.
//
// Sizes are desk scale (n up to a few hundred), so everything is plain
// row-major storage with O(n^3) loops and a cyclic Jacobi eigensolver.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ageom {

using cplx = std::complex<double>;

class CMatrix {
public:
    CMatrix() = default;

    /// Zero matrix of the given shape.
    CMatrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major `data`; throws InvalidInput on a size
    /// mismatch or a non-finite entry.
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

    /// Row-wise literal, e.g. `CMatrix{{0, 1}, {1, 0}}`.
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static CMatrix diagonal(std::span<const double> d);
    static CMatrix diagonal(std::span<const cplx> d);
    static CMatrix column(std::span<const cplx> v);
    static CMatrix basis_vector(std::size_t n, std::size_t k);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;

    CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const CMatrix& b);
    CMatrix col(std::size_t j) const { return block(0, j, rows_, 1); }

    bool all_finite() const noexcept;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s) noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(CMatrix a, cplx s);
CMatrix operator/(CMatrix a, cplx s);

double norm_fro(const CMatrix& m) noexcept;
double norm_max(const CMatrix& m) noexcept;
/// Induced 1-norm (max absolute column sum).
double norm_one(const CMatrix& m) noexcept;
cplx trace(const CMatrix& m) noexcept;

/// (M + M*)/2.
CMatrix herm_part(const CMatrix& m);
/// max |M_ij - conj(M_ji)|.
double hermiticity_defect(const CMatrix& m);
/// Standard inner product <f, g> = sum f_i conj(g_i) of two column vectors
/// (or the Frobenius pairing of equally shaped matrices).
cplx inner(const CMatrix& f, const CMatrix& g);

// ---------------------------------------------------------------------------
// Hermitian eigenproblem

struct HermEig {
    std::vector<double> values; ///< ascending
    CMatrix vectors;            ///< unitary, columns are eigenvectors
    int sweeps = 0;
};

/// Cyclic two-sided Jacobi. Throws NonHermitian if
/// ||M - M*||_max > herm_tol * ||M||_max, NoConvergence after the sweep cap.
HermEig herm_eig(const CMatrix& m, double herm_tol = 1e-10);
/// Eigenvalues only, ascending; same errors.
std::vector<double> herm_eigvalues(const CMatrix& m, double herm_tol = 1e-10);

/// V diag(f(lambda)) V* for a decomposition produced by herm_eig.
template <typename F>
CMatrix herm_apply(const HermEig& eig, F&& f)
{
    const std::size_t n = eig.values.size();
    CMatrix scaled = eig.vectors;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx fj = f(eig.values[j]);
        for (std::size_t i = 0; i < n; ++i)
            scaled(i, j) *= fj;
    }
    return scaled * eig.vectors.adjoint();
}

double lambda_min(const CMatrix& hermitian);
double lambda_max(const CMatrix& hermitian);

/// Principal square root of a Hermitian PSD matrix (negative noise clipped).
CMatrix herm_sqrt(const CMatrix& psd);
/// Inverse square root of a Hermitian positive definite matrix.
CMatrix herm_inv_sqrt(const CMatrix& pd);

// ---------------------------------------------------------------------------
// Norms, SVD, least squares

/// Largest singular value, computed as sqrt(lambda_max(M*M)) on the smaller Gram.
double svd_norm(const CMatrix& m);

struct Svd {
    std::vector<double> values; ///< descending, min(rows, cols) of them
    CMatrix u;                  ///< rows x p
    CMatrix v;                  ///< cols x p
};

/// Thin SVD through the Hermitian dilation [[0, M], [M*, 0]], whose spectrum
/// is {+-sigma_i}. Singular vectors belonging to numerically zero singular
/// values are unspecified.
Svd svd(const CMatrix& m);

struct PinvSolution {
    CMatrix x;
    double residual = 0.0; ///< ||M X - B||_2
    std::size_t rank = 0;
};

/// X = M^+ B; singular values below rel_cutoff * sigma_max are dropped.
PinvSolution pinv_solve(const CMatrix& m, const CMatrix& b, double rel_cutoff = 1e-12);

/// LU with partial pivoting. Throws Singular on a vanishing pivot.
CMatrix solve(const CMatrix& a, const CMatrix& b);
CMatrix inverse(const CMatrix& a);

// ---------------------------------------------------------------------------
// Exponentials

/// exp(M). Hermitian and skew-Hermitian inputs go through the eigenbasis;
/// everything else through scaling and squaring with a Pade approximant.
CMatrix mat_exp(const CMatrix& m);

/// Scaling and squaring only, regardless of structure.
CMatrix mat_exp_pade(const CMatrix& m);

/// exp(i t H) for Hermitian H.
CMatrix exp_i_hermitian(const CMatrix& h, double t = 1.0);

/// Directional derivative d/ds exp(M + sE) at s = 0, read off the upper right
/// block of exp([[M, E], [0, M]]).
CMatrix expm_frechet(const CMatrix& m, const CMatrix& e);

/// Directional derivative d/ds exp(i(H + sE)) at s = 0 for Hermitian H,
/// via divided differences of x -> e^{ix} in the eigenbasis of H.
CMatrix exp_i_hermitian_frechet(const HermEig& h_eig, const CMatrix& e);
CMatrix exp_i_hermitian_frechet(const CMatrix& h, const CMatrix& e);

} // namespace ageom
