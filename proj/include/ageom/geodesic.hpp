#pragma once

// Tangent vectors to the isometry manifold, the curves delta(t) = e^{itZ} T
// and their lengths in the operator-norm Finsler metric of the L-model.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ageom/isometry.hpp"
#include "ageom/krein.hpp"
#include "ageom/random.hpp"

namespace ageom {

struct TangentVector {
    AIsometry base;
    CMatrix v;      ///< H-model velocity, same shape as T
    CMatrix v_l;    ///< A^{1/2} V A_dom^{-1/2}
    CMatrix x_l;    ///< Hermitian lift with i X_l T_l = V_l
    CMatrix p_l;    ///< T_l T_l*
    double norm = 0.0;
};

/// Lifts V at T. Tangency requires Y = -i V_l T_l* to satisfy Y = Y P and
/// P Y P Hermitian to tol (relative to max(1, ||V_l||)); throws NotTangent.
TangentVector make_tangent(const AIsometry& t, const CMatrix& v, double tol = 1e-8);

/// i H T_l pulled back to the H-model, for Hermitian H on the L-model.
CMatrix tangent_from_hermitian(const AIsometry& t, const CMatrix& h_l);

struct GeodesicCurve {
    AIsometry base;
    CMatrix t_l;
    CMatrix z_l;               ///< Hermitian, Z_l P = X_l P / speed, ||Z_l|| <= 1
    HermEig z_eig;
    double speed = 0.0;        ///< norm of the input tangent; delta(speed * s) has velocity V at s = 0
    double t_max = 0.0;        ///< pi: the range on which minimality is claimed
    std::optional<KreinReport> extension;

    /// e^{itZ} T in the H-model.
    CMatrix at(double t) const;
    /// e^{itZ_l} T_l.
    CMatrix at_l(double t) const;
    /// i Z_l e^{itZ_l} T_l.
    CMatrix velocity_l(double t) const;
    /// Z = A^{-1/2} Z_l A^{1/2}, A-symmetric.
    AOperator z() const;
};

/// Unit-speed curve through T with initial direction V / ||V_l||.
GeodesicCurve minimal_curve(const TangentVector& v, const KreinOptions& opts = {});

struct LengthResult {
    double length = 0.0;
    std::size_t evaluations = 0;
    int levels = 0;
};

/// Integral of `speed` over [a, b] by adaptive composite midpoint. Starting
/// from 4 cells, the cell whose one- and three-point midpoint values differ
/// most is tripled until those differences sum to < tol, so the last two
/// partitions give estimates within tol. Throws NoConvergence when a cell
/// would need more than max_levels triplings.
LengthResult curve_length(const std::function<double(double)>& speed, double a, double b, double tol = 1e-6,
                          int max_levels = 10);

enum class DerivativeMethod { BlockExponential, DividedDifferences };

/// Length of s -> e^{iK(s)} T_l on [0, 1] where K(s) = s K1 + s(1-s) M.
LengthResult exponential_path_length(const CMatrix& k1, const CMatrix& m, const CMatrix& t_l,
                                     DerivativeMethod method = DerivativeMethod::DividedDifferences,
                                     double tol = 1e-6);

struct RaceOptions {
    double t1 = 3.141592653589793;
    std::size_t trials = 200;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    DerivativeMethod derivative = DerivativeMethod::DividedDifferences;
    unsigned threads = 0; ///< 0: A_GEOM_THREADS or 1
};

struct RaceReport {
    double t1 = 0.0;
    double geodesic_length = 0.0;
    std::vector<double> competitor_lengths;
    std::vector<double> perturbation_norms;
    std::size_t violations = 0;
    std::uint64_t seed = 0;
    double min_length = 0.0;
    double median_length = 0.0;
    double max_endpoint_error = 0.0;
};

/// Compares the length t1 of delta on [0, t1] against exponential paths
/// with the same endpoints. Competitor j uses perturbation M_j drawn from
/// Rng(seed, j) with ||M_j|| uniform in (0, pi].
RaceReport race(const GeodesicCurve& curve, const RaceOptions& opts);

/// Threads from A_GEOM_THREADS (default 1), capped by `requested` if nonzero.
unsigned worker_count(unsigned requested);

} // namespace ageom
