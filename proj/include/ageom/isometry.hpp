#pragma once

// Isometries of the A-inner product, their final projections, local
// cross-sections of the unitary group action, and conjugators.
//
// An isometry maps (C^k, A_dom) into (C^n, A) with T* A T = A_dom. The square
// single-form case k = n, A_dom = A is the usual one; in finite dimension such
// a T is automatically invertible, so proper ranges need k < n.

#include <optional>

#include "ageom/a_space.hpp"
#include "ageom/random.hpp"

namespace ageom {

struct IsometryCheck {
    bool isometric = false;
    double defect = 0.0;         ///< ||T*AT - A_dom|| / ||A_dom||
    double lambda_witness = 0.0; ///< smallest lambda with T*A^2T <= lambda A_dom^2
};

IsometryCheck check_isometry(const AForm& codomain, const AForm& domain, const CMatrix& t, double tol = 1e-9);
IsometryCheck check_isometry(const AForm& form, const CMatrix& t, double tol = 1e-9);

class AIsometry {
public:
    /// Throws NotIsometric if the relative defect exceeds tol.
    AIsometry(FormRef codomain, FormRef domain, CMatrix t, double tol = 1e-9);
    AIsometry(FormRef form, CMatrix t, double tol = 1e-9);

    const FormRef& form() const noexcept { return form_; }
    const FormRef& domain() const noexcept { return domain_; }
    const CMatrix& matrix() const noexcept { return t_; }
    double defect() const noexcept { return defect_; }
    bool square() const noexcept { return t_.rows() == t_.cols() && form_ == domain_; }

    /// T^# = A_dom^{-1} T* A.
    CMatrix sharp() const;
    /// A^{1/2} T A_dom^{-1/2}; has orthonormal columns.
    CMatrix l_model() const;

private:
    FormRef form_;
    FormRef domain_;
    CMatrix t_;
    double defect_ = 0.0;
};

class AUnitary : public AIsometry {
public:
    /// Additionally requires T invertible with T^{-1} = T^# to tol.
    AUnitary(FormRef form, CMatrix g, double tol = 1e-9);

    const CMatrix& inverse() const noexcept { return inv_; }

private:
    CMatrix inv_;
};

/// P_T = T T^#, the A-symmetric idempotent onto range(T).
AProjection final_projection(const AIsometry& t);

struct SectionDiagnostics {
    double distance = 0.0;       ///< ||P_l - P0_l||
    double conjugation = 0.0;    ///< ||G P0 G^{-1} - P|| / max(1, ||P||)
    double isometry = 0.0;       ///< ||G*AG - A|| / ||A||
};

/// A-unitary G with G P0 G^{-1} = P and G = I when P = P0. Throws TooFar when
/// the L-model projections are at distance >= 1 - 1e-6.
AUnitary projection_section(const AProjection& p0, const AProjection& p, SectionDiagnostics* diag = nullptr);

/// sigma_{T0}(T) = T T0^# + G_T (I - P_{T0}), an A-unitary with sigma T0 = T.
AUnitary isometry_section(const AIsometry& t0, const AIsometry& t);

/// K = T2 (H T1)^# + I - P_{T2}; K H T1 = T2. Throws ProjectionMismatch
/// unless H P_{T1} H^{-1} = P_{T2} to tol.
AUnitary conjugator(const AIsometry& t1, const AIsometry& t2, const AUnitary& h, double tol = 1e-8);

struct WoldSplit {
    std::size_t unitary_dim = 0;
    std::size_t shift_dim = 0;
    std::size_t wandering_dim = 0;
    double complement_dim_estimate = 0.0; ///< n - numerical rank of T
};

/// Wold decomposition of a square A-isometry: always all-unitary in finite
/// dimension. Throws NotIsometric, or InvalidInput for a non-square T.
WoldSplit dense_wold(const AIsometry& t);

/// Random isometry (C^k, A_dom) -> (C^n, A).
AIsometry random_isometry(Rng& rng, const FormRef& codomain, const FormRef& domain);

} // namespace ageom
