#pragma once

// Selfadjoint norm-preserving completion: given Hermitian X and an orthogonal
// projection P with ||XP|| = 1, find Hermitian Z with ZP = XP and ||Z|| = 1.
//
// extend_paper follows the constructive route through the indefinite form
// [f, g] = <f, g> - <B0 f, B0 g>; extend_dykstra is an independent
// alternating-projection solver used as fallback and as a test oracle.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ageom/numerics.hpp"

namespace ageom {

struct KreinInstance {
    /// Validates X = X*, P = P* = P^2 and rescales X so that ||XP|| = 1.
    /// Throws NonHermitian, InvalidInput (bad P, or XP = 0).
    static KreinInstance make(const CMatrix& x, const CMatrix& p);

    std::size_t n = 0;
    std::size_t rank_p = 0;
    CMatrix x;              ///< normalized
    CMatrix p;
    double norm_xp = 0.0;   ///< ||XP|| before normalization
};

enum class KreinMethod { PaperConstruction, DykstraFallback };
std::string_view to_string(KreinMethod m) noexcept;

/// Residuals of the intermediate identities of the construction at one m.
struct ProofChecks {
    double gram_lambda_min = 0.0;   ///< lambda_min(I - X_m P X_m), must be > 0
    double qm_idempotence = 0.0;    ///< ||Q_m^2 - Q_m|| / (1 + ||Q_m||^2)
    double square_identity = 0.0;   ///< ||(P + Q_m - I)^2 - (I - (P - Q_m)^2)|| / (1 + ||Q_m||^2)
    double row_identity = 0.0;      ///< ||P Bbar - P X_m||
    double column_identity = 0.0;   ///< ||Bbar P - X_m P||
    double b0_range = 0.0;          ///< ||(I - P) Bbar0||
    double b1_range = 0.0;          ///< ||P Bbar1||
    double norm_qm = 0.0;
    double norm_bbar = 0.0;

    bool ok(double tol = 1e-9) const noexcept;
};

struct KreinReport {
    CMatrix z;
    double m_used = 0.0;
    KreinMethod method = KreinMethod::PaperConstruction;
    double norm_z = 0.0;
    double constraint_residual = 0.0; ///< ||ZP - XP||
    double hermiticity = 0.0;         ///< ||Z - Z*||
    std::size_t iterations = 0;       ///< m values tried, or Dykstra sweeps
    std::vector<double> m_tried;
    std::optional<ProofChecks> checks; ///< from the last constructive attempt
};

/// One pass of the construction at a fixed m > 1. Throws GramNotPD if
/// I - X_m P X_m is not positive definite, Singular if P + Q_m - I is.
struct PaperStep {
    CMatrix z;
    CMatrix bbar;
    ProofChecks checks;
};
PaperStep paper_step(const KreinInstance& inst, double m);

struct KreinOptions {
    std::optional<double> m;     ///< first m; default 1 + 1e-3
    int max_steps = 10;          ///< m - 1 is divided by 10 between steps
    double norm_tol = 1e-6;
    double constraint_tol = 1e-8;
    bool allow_fallback = true;
};

/// Constructive completion over a schedule of m decreasing to 1, then Dykstra if
/// no m meets the norm and constraint tolerances. Throws GramNotPD for a
/// requested m <= 1, NoConvergence if the fallback also fails.
KreinReport extend_paper(const KreinInstance& inst, const KreinOptions& opts = {});

struct DykstraOptions {
    std::size_t max_iterations = 100000;
    double step_tol = 1e-10;
    double norm_tol = 1e-6;
    /// Stop as soon as the projected iterate has norm <= 1 + norm_tol
    /// (checked every `feasibility_stride` sweeps).
    std::size_t feasibility_stride = 25;
};

/// Dykstra projections between the affine set of Hermitian Z agreeing with X
/// on the P-column blocks and the unit spectral-norm ball. Convergence is
/// sublinear when the ball only touches the affine set, which is the generic
/// case for ||XP|| = 1. Throws NoConvergence (message carries final residuals).
KreinReport extend_dykstra(const KreinInstance& inst, const DykstraOptions& opts = {});

struct ExtensionCheck {
    double hermiticity = 0.0;
    double constraint_residual = 0.0;
    double norm = 0.0;
    bool ok = false;
};
ExtensionCheck verify_extension(const KreinInstance& inst, const CMatrix& z, double constraint_tol = 1e-8,
                                double norm_tol = 1e-6);

struct NormProfilePoint {
    double m = 0.0;
    double norm_bbar = 0.0;
    double norm_z = 0.0;
};
/// ||Bbar_m|| and ||Z(m)|| over a grid of m; entries where the Gram fails
/// to be positive definite are skipped.
std::vector<NormProfilePoint> norm_profile(const KreinInstance& inst, std::span<const double> ms);

} // namespace ageom
