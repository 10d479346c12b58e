#pragma once

// Seeded generators for random test and harness instances.

#include <cstdint>
#include <random>

#include "ageom/numerics.hpp"

namespace ageom {

/// Stream for trial `index` under master `seed`; streams are independent of
/// how trials are scheduled across threads.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t index) : engine_(stream_seed(seed, index)) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    double normal();
    cplx complex_normal();
    /// Uniform integer in [lo, hi].
    std::size_t index(std::size_t lo, std::size_t hi);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Matrix of i.i.d. standard complex Gaussians.
CMatrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols);
/// (G + G*)/2 for a Ginibre G.
CMatrix random_hermitian(Rng& rng, std::size_t n);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
CMatrix random_unitary(Rng& rng, std::size_t n);
/// Positive definite with eigenvalues drawn log-uniformly from [1/cond, 1].
CMatrix random_pd(Rng& rng, std::size_t n, double cond = 100.0);
/// Positive semidefinite of the given rank.
CMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank);
/// Orthogonal projection onto a random k-dimensional subspace.
CMatrix random_orthogonal_projection(Rng& rng, std::size_t n, std::size_t k);
/// Isometry of the A-inner product on C^n: A^{-1/2} U A^{1/2} for Haar U.
CMatrix random_a_unitary(Rng& rng, const CMatrix& a);
/// exp(i eps H) in the L-model, pulled back: an A-unitary near the identity.
CMatrix random_a_unitary_near_identity(Rng& rng, const CMatrix& a, double eps);

} // namespace ageom
