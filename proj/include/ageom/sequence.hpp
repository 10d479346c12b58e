#pragma once

// Exact backend on weighted sequence spaces. H is the space of sequences
// with sum w(n) |x_n|^2 < infinity inside L = l^2, and operators are basis
// maps e_n -> c(n) e_{sigma(n)} given by closed-form index rules. Every
// verdict is evidence up to a finite horizon, never a proof.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ageom/a_space.hpp"

namespace ageom {

using Index = std::uint64_t;

enum class WeightKind { Dirichlet, Sobolev, Unit };

struct WeightedSpace {
    WeightKind kind = WeightKind::Unit;

    static WeightedSpace dirichlet() { return {WeightKind::Dirichlet}; }
    static WeightedSpace sobolev() { return {WeightKind::Sobolev}; }
    static WeightedSpace unit() { return {WeightKind::Unit}; }

    /// Dirichlet sequences start at n = 0 (coefficient of z^0), the others at 1.
    Index first() const noexcept { return kind == WeightKind::Dirichlet ? 0 : 1; }
    /// n + 1, n and 1 respectively; always >= 1 on the index set.
    double weight(Index n) const noexcept;
    std::string name() const;
};

std::optional<WeightedSpace> parse_space(const std::string& name);

/// k-th positive integer (k >= 1) that is not the square of an odd integer.
Index non_odd_square(Index k);
/// Inverse of non_odd_square; nullopt on odd squares.
std::optional<Index> non_odd_square_rank(Index m);
bool is_odd_square(Index m);

struct SeqOperator {
    std::string name;
    WeightedSpace space;
    /// Index rule; nullopt where the operator kills e_n.
    std::function<std::optional<Index>(Index)> sigma;
    /// Exact preimage rule; nullopt off the range.
    std::function<std::optional<Index>(Index)> inverse;
    /// Unit-modulus coefficient.
    std::function<cplx(Index)> coeff = [](Index) { return cplx(1.0); };
    /// Every index has a preimage (sigma is a bijection of the index set).
    bool surjective = false;
};

/// dirichlet_shift, example_242_U, example_242_Ustar, double_shift, identity.
/// `space` overrides the default space of the built-in.
std::optional<SeqOperator> builtin_operator(const std::string& name,
                                            std::optional<WeightedSpace> space = std::nullopt);
std::vector<std::string> builtin_names();

/// sigma total, injective and |c| = 1 on the first `horizon` indices.
bool seq_is_l_isometry(const SeqOperator& op, Index horizon);

enum class Trend { Bounded, Growing };
std::string to_string(Trend t);

struct RatioWitness {
    Index index = 0;
    double ratio = 0.0;
};

struct BoundedReport {
    bool bounded_evidence = true;
    double sup_ratio = 0.0;
    Index sup_index = 0;
    Trend trend = Trend::Bounded;
    /// Supremum of w(sigma(n)) / w(n) over each complete dyadic window.
    std::vector<RatioWitness> window_sups;
};

/// Ratios w(sigma(n)) / w(n) for indices up to the horizon. The trend is
/// Growing when the window suprema strictly increase over the last three
/// complete dyadic windows with non-shrinking increments.
BoundedReport seq_bounded_on_H(const SeqOperator& op, Index horizon);

/// e_k -> conj(c(sigma^{-1}(k))) e_{sigma^{-1}(k)} on the range, 0 elsewhere.
SeqOperator seq_adjoint(const SeqOperator& op);

enum class Adjointability { AdjointableEvidence, NonAdjointableEvidence };
std::string to_string(Adjointability a);

struct AdjointabilityReport {
    Adjointability verdict = Adjointability::AdjointableEvidence;
    bool l_isometry = false;
    BoundedReport op;
    BoundedReport adjoint;
    /// Window maxima of whichever side grows.
    std::vector<RatioWitness> witness;
};

/// Non-adjointable evidence when the adjoint fails to preserve H, or when the
/// operator itself does (then its adjoint on L is not a bounded operator of H
/// that could serve as the A-adjoint of anything).
AdjointabilityReport seq_adjointability(const SeqOperator& op, Index horizon);

struct DivergenceDemo {
    Index horizon = 0;
    std::vector<double> partial_sums; ///< ||U* x||_H^2 over odd j <= 1, 3, 5, ...
    double witness_norm_sq = 0.0;     ///< ||x||_H^2 over the same odd indices
    bool monotone = true;

    /// Partial sum with the witness cut to indices <= h (1 <= h <= horizon).
    double at(Index h) const { return partial_sums.at(static_cast<std::size_t>((h + 1) / 2 - 1)); }
};

/// The witness x_j = j^{-3/2} (j odd) has finite H-norm but U* x does not.
/// With x cut to the index window [1, horizon], ||U* x||_H^2 is the sum of
/// 1/j over odd j <= horizon, i.e. sum_{k < (horizon+1)/2} 1/(2k+1).
DivergenceDemo divergence_demo(Index horizon);

struct WoldReport {
    Index first = 0;
    Index horizon = 0;
    std::vector<Index> unitary;
    std::vector<Index> wandering;
    std::vector<std::vector<Index>> shift_layers;
    std::vector<Index> undetermined;

    /// Disjoint, and together with `undetermined` exactly the window.
    bool partitions() const;
};

/// Index-orbit Wold split on the window [first, first + horizon). Indices
/// whose backward orbit ends at an index outside the range of sigma are in
/// shift layer = orbit length; closed orbits and surjective operators give
/// unitary indices; orbits that leave the window are undetermined.
WoldReport seq_wold(const SeqOperator& op, Index horizon);

struct SeqTruncation {
    FormRef form;             ///< diag(1 / w)
    CMatrix t;                ///< H-orthonormal coordinates y_n = sqrt(w(n)) x_n
    std::vector<double> weights;
};

/// First `size` indices of op as a dense operator; columns whose image
/// leaves the window are zero.
SeqTruncation truncate(const SeqOperator& op, std::size_t size);

/// H-orthonormal coordinates of a finitely supported sequence.
CMatrix to_h_coordinates(const WeightedSpace& space, const std::vector<cplx>& x);

} // namespace ageom
