#pragma once

// Operator calculus for the inner product <f, g>_A = <Af, g>.
//
// The completion L of (C^n, <.,.>_A) is modelled in coordinates f -> A^{1/2} f,
// so an operator B acting on C^n corresponds to A^{1/2} B A^{-1/2} on L.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ageom/numerics.hpp"

namespace ageom {

class AForm;
using FormRef = std::shared_ptr<const AForm>;

class AForm {
public:
    /// Validates A (Hermitian, positive definite) and caches its roots.
    /// Throws NonHermitian or NotPSD.
    static FormRef make(const CMatrix& a);
    static FormRef identity(std::size_t n);

    std::size_t dim() const noexcept { return a_.rows(); }
    const CMatrix& matrix() const noexcept { return a_; }
    const CMatrix& sqrt() const noexcept { return sqrt_; }
    const CMatrix& inv_sqrt() const noexcept { return inv_sqrt_; }
    const CMatrix& inverse() const noexcept { return inv_; }

    double lambda_min() const noexcept { return lmin_; }
    double lambda_max() const noexcept { return lmax_; }
    /// ||A||, kept as given; constructions below are invariant under A -> cA.
    double scale() const noexcept { return lmax_; }
    double conditioning() const noexcept { return lmax_ / lmin_; }
    bool ill_conditioned() const noexcept { return conditioning() > 1e8; }

    /// Same subspace geometry with ||A|| = 1.
    FormRef normalized() const;

    /// Residuals of sqrt^2 = A and sqrt * inv_sqrt = I, relative to ||A|| and 1.
    double root_residual() const;

private:
    AForm() = default;

    CMatrix a_;
    CMatrix sqrt_;
    CMatrix inv_sqrt_;
    CMatrix inv_;
    double lmin_ = 0.0;
    double lmax_ = 0.0;
};

struct AOperator {
    AOperator(FormRef form, CMatrix m);

    FormRef form;
    CMatrix m;
};

struct AProjection {
    /// Throws InvalidInput unless Q is idempotent and A-symmetric to `tol`
    /// (relative to ||Q||^2 and ||A|| ||Q||).
    AProjection(FormRef form, CMatrix q, double tol = 1e-9);

    FormRef form;
    CMatrix q;
};

double idempotence_defect(const CMatrix& q);
/// ||AQ - Q*A|| / ||A||.
double a_symmetry_defect(const AForm& form, const CMatrix& q);

cplx a_inner(const AForm& form, const CMatrix& f, const CMatrix& g);

CMatrix to_l_model(const AOperator& b);
AOperator from_l_model(const FormRef& form, const CMatrix& bl);

/// L-model form of T : (C^k, A_dom) -> (C^n, A): A^{1/2} T A_dom^{-1/2}.
CMatrix to_l_model(const AForm& codomain, const AForm& domain, const CMatrix& t);
CMatrix from_l_model(const AForm& codomain, const AForm& domain, const CMatrix& tl);

/// B^# = A^{-1} B* A.
AOperator a_adjoint(const AOperator& b);
/// A_dom^{-1} T* A for T : (C^k, A_dom) -> (C^n, A).
CMatrix a_adjoint(const AForm& codomain, const AForm& domain, const CMatrix& t);

/// max(||B||, ||B^#||).
double banach_norm(const AOperator& b);
/// ||A^{1/2} B A^{-1/2}||.
double l_norm(const AOperator& b);

/// ||AB - B*A|| <= tol ||A|| ||B||.
bool is_a_symmetric(const AOperator& b, double tol = 1e-9);

/// Q = F (F*AF)^{-1} F* A. Throws RankDeficient unless
/// sigma_min(F) > 1e-10 sigma_max(F).
AProjection compatible_projector(const FormRef& form, const CMatrix& f);

/// Orthogonal projection onto range(Q) for an idempotent Q:
/// Q (Q + Q* - I)^{-1}. Throws InvalidInput if ||Q^2 - Q|| > tol (1 + ||Q||^2),
/// Singular if Q + Q* - I cannot be inverted.
CMatrix projector_from_idempotent(const CMatrix& q, double tol = 1e-9);

struct DouglasResult {
    bool range_inclusion = false; ///< R(B) in R(A), via the eigenprojection of A
    bool solvable = false;        ///< pinv residual <= 1e-8 ||B||
    bool lambda_bounded = false;  ///< some finite lambda with BB* <= lambda AA*
    std::optional<CMatrix> x;     ///< A^+ B when solvable
    std::optional<double> lambda; ///< smallest lambda when bounded
    double residual = 0.0;        ///< ||A A^+ B - B||
    double complement_mass = 0.0; ///< ||(I - P_R(A)) B||
    std::size_t rank = 0;
    int bisection_steps = 0;

    bool agree() const noexcept { return range_inclusion == solvable && solvable == lambda_bounded; }
};

/// Three independent tests of AX = B solvability for PSD A (possibly
/// singular). Throws NotPSD or NonHermitian.
DouglasResult douglas(const CMatrix& a, const CMatrix& b, double tol = 1e-8);

/// Smallest lambda >= 0 with M M* <= lambda N N*, by bisection on
/// lambda_min(lambda NN* - MM*) over the range of N, to `abs_tol`. Returns
/// nullopt if M has mass outside range(N) above `complement_tol` ||M||.
struct LambdaBound {
    std::optional<double> lambda;
    double complement_mass = 0.0;
    int steps = 0;
};
LambdaBound smallest_lambda(const CMatrix& m, const CMatrix& n, double complement_tol = 1e-8,
                            double abs_tol = 1e-10);

} // namespace ageom
