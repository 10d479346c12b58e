#include "ageom/sequence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "ageom/error.hpp"

namespace ageom {

double WeightedSpace::weight(Index n) const noexcept
{
    switch (kind) {
    case WeightKind::Dirichlet: return static_cast<double>(n) + 1.0;
    case WeightKind::Sobolev: return static_cast<double>(n);
    case WeightKind::Unit: return 1.0;
    }
    return 1.0;
}

std::string WeightedSpace::name() const
{
    switch (kind) {
    case WeightKind::Dirichlet: return "dirichlet";
    case WeightKind::Sobolev: return "sobolev";
    case WeightKind::Unit: return "unit";
    }
    return "unit";
}

std::optional<WeightedSpace> parse_space(const std::string& name)
{
    if (name == "dirichlet")
        return WeightedSpace::dirichlet();
    if (name == "sobolev")
        return WeightedSpace::sobolev();
    if (name == "unit")
        return WeightedSpace::unit();
    return std::nullopt;
}

namespace {

Index isqrt(Index x)
{
    auto r = static_cast<Index>(std::sqrt(static_cast<long double>(x)));
    while (r * r > x)
        --r;
    while ((r + 1) * (r + 1) <= x)
        ++r;
    return r;
}

// Number of odd squares in [1, x].
Index odd_squares_upto(Index x) { return (isqrt(x) + 1) / 2; }

} // namespace

bool is_odd_square(Index m)
{
    if (m == 0)
        return false;
    const Index r = isqrt(m);
    return r * r == m && (r % 2 == 1);
}

Index non_odd_square(Index k)
{
    if (k == 0)
        throw Error(ErrorCode::InvalidInput, "non_odd_square: k starts at 1");
    // smallest x with x - #odd squares <= x >= k; the answer lies in [k, 2k]
    Index lo = k, hi = 2 * k;
    while (lo < hi) {
        const Index mid = lo + (hi - lo) / 2;
        if (mid - odd_squares_upto(mid) >= k)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::optional<Index> non_odd_square_rank(Index m)
{
    if (m == 0 || is_odd_square(m))
        return std::nullopt;
    return m - odd_squares_upto(m);
}

namespace {

// rho(n) = n^2 for odd n, the (n/2)-th non-odd-square for even n.
std::optional<Index> rho(Index n)
{
    if (n == 0)
        return std::nullopt;
    if (n % 2 == 1)
        return n * n;
    return non_odd_square(n / 2);
}

std::optional<Index> rho_inverse(Index m)
{
    if (m == 0)
        return std::nullopt;
    if (is_odd_square(m))
        return isqrt(m);
    return 2 * *non_odd_square_rank(m);
}

} // namespace

std::optional<SeqOperator> builtin_operator(const std::string& name, std::optional<WeightedSpace> space)
{
    SeqOperator op;
    op.name = name;
    if (name == "dirichlet_shift") {
        op.space = space.value_or(WeightedSpace::dirichlet());
        const Index first = op.space.first();
        op.sigma = [](Index n) -> std::optional<Index> { return n + 1; };
        op.inverse = [first](Index k) -> std::optional<Index> {
            if (k <= first)
                return std::nullopt;
            return k - 1;
        };
    } else if (name == "double_shift") {
        op.space = space.value_or(WeightedSpace::sobolev());
        if (op.space.first() == 0)
            throw Error(ErrorCode::InvalidInput, "double_shift needs indices starting at 1");
        op.sigma = [](Index n) -> std::optional<Index> { return 2 * n; };
        op.inverse = [](Index k) -> std::optional<Index> {
            if (k % 2 != 0)
                return std::nullopt;
            return k / 2;
        };
    } else if (name == "example_242_Ustar") {
        op.space = space.value_or(WeightedSpace::sobolev());
        if (op.space.first() == 0)
            throw Error(ErrorCode::InvalidInput, "example_242_Ustar needs indices starting at 1");
        op.sigma = rho;
        op.inverse = rho_inverse;
        op.surjective = true;
    } else if (name == "example_242_U") {
        op.space = space.value_or(WeightedSpace::sobolev());
        if (op.space.first() == 0)
            throw Error(ErrorCode::InvalidInput, "example_242_U needs indices starting at 1");
        op.sigma = rho_inverse;
        op.inverse = rho;
        op.surjective = true;
    } else if (name == "identity") {
        op.space = space.value_or(WeightedSpace::unit());
        op.sigma = [](Index n) -> std::optional<Index> { return n; };
        op.inverse = op.sigma;
        op.surjective = true;
    } else {
        return std::nullopt;
    }
    return op;
}

std::vector<std::string> builtin_names()
{
    return {"dirichlet_shift", "double_shift", "example_242_U", "example_242_Ustar", "identity"};
}

bool seq_is_l_isometry(const SeqOperator& op, Index horizon)
{
    std::unordered_set<Index> seen;
    seen.reserve(static_cast<std::size_t>(horizon));
    const Index first = op.space.first();
    for (Index n = first; n < first + horizon; ++n) {
        const auto s = op.sigma(n);
        if (!s || *s < first || !seen.insert(*s).second)
            return false;
        if (std::abs(op.coeff(n)) != 1.0)
            return false;
    }
    return true;
}

std::string to_string(Trend t) { return t == Trend::Bounded ? "bounded" : "growing"; }

BoundedReport seq_bounded_on_H(const SeqOperator& op, Index horizon)
{
    BoundedReport rep;
    const Index first = op.space.first();
    // Window j holds positions p = n - first + 1 in [2^j, 2^{j+1}).
    const int windows = horizon == 0 ? 0 : std::bit_width(horizon + 1) - 1;
    rep.window_sups.assign(static_cast<std::size_t>(windows), RatioWitness{});
    std::vector<bool> window_seen(rep.window_sups.size(), false);
    for (Index p = 1; p <= horizon; ++p) {
        const Index n = first + p - 1;
        const auto s = op.sigma(n);
        if (!s)
            continue;
        const double ratio = op.space.weight(*s) / op.space.weight(n);
        if (ratio > rep.sup_ratio) {
            rep.sup_ratio = ratio;
            rep.sup_index = n;
        }
        const auto j = static_cast<std::size_t>(std::bit_width(p) - 1);
        if (j < rep.window_sups.size() && (!window_seen[j] || ratio > rep.window_sups[j].ratio)) {
            rep.window_sups[j] = {n, ratio};
            window_seen[j] = true;
        }
    }
    // Drop windows with no defined ratio so the trend only compares data.
    std::vector<RatioWitness> sups;
    for (std::size_t j = 0; j < rep.window_sups.size(); ++j)
        if (window_seen[j])
            sups.push_back(rep.window_sups[j]);
    rep.window_sups = sups;
    if (sups.size() >= 3) {
        const double s1 = sups[sups.size() - 3].ratio;
        const double s2 = sups[sups.size() - 2].ratio;
        const double s3 = sups[sups.size() - 1].ratio;
        if (s1 < s2 && s2 < s3 && s3 - s2 >= s2 - s1)
            rep.trend = Trend::Growing;
    }
    rep.bounded_evidence = rep.trend == Trend::Bounded;
    return rep;
}

SeqOperator seq_adjoint(const SeqOperator& op)
{
    SeqOperator adj;
    adj.name = op.name + "*";
    adj.space = op.space;
    adj.sigma = op.inverse;
    adj.inverse = op.sigma;
    adj.coeff = [c = op.coeff, inv = op.inverse](Index k) {
        const auto pre = inv(k);
        return pre ? std::conj(c(*pre)) : cplx(1.0);
    };
    adj.surjective = op.surjective;
    return adj;
}

std::string to_string(Adjointability a)
{
    return a == Adjointability::AdjointableEvidence ? "adjointable_evidence" : "non_adjointable_evidence";
}

AdjointabilityReport seq_adjointability(const SeqOperator& op, Index horizon)
{
    AdjointabilityReport rep;
    rep.l_isometry = seq_is_l_isometry(op, horizon);
    rep.op = seq_bounded_on_H(op, horizon);
    rep.adjoint = seq_bounded_on_H(seq_adjoint(op), horizon);
    if (rep.adjoint.trend == Trend::Growing) {
        rep.verdict = Adjointability::NonAdjointableEvidence;
        rep.witness = rep.adjoint.window_sups;
    } else if (rep.op.trend == Trend::Growing) {
        rep.verdict = Adjointability::NonAdjointableEvidence;
        rep.witness = rep.op.window_sups;
    }
    return rep;
}

DivergenceDemo divergence_demo(Index horizon)
{
    const SeqOperator ustar = *builtin_operator("example_242_Ustar");
    DivergenceDemo demo;
    demo.horizon = horizon;
    demo.partial_sums.reserve(static_cast<std::size_t>((horizon + 1) / 2));
    double sum = 0.0;
    for (Index j = 1; j <= horizon; j += 2) {
        const double xj = std::pow(static_cast<double>(j), -1.5);
        const Index image = *ustar.sigma(j);
        const double term = ustar.space.weight(image) * xj * xj;
        demo.witness_norm_sq += ustar.space.weight(j) * xj * xj;
        const double next = sum + term;
        if (next < sum)
            demo.monotone = false;
        sum = next;
        demo.partial_sums.push_back(sum);
    }
    return demo;
}

bool WoldReport::partitions() const
{
    std::vector<Index> all;
    all.insert(all.end(), unitary.begin(), unitary.end());
    for (const auto& layer : shift_layers)
        all.insert(all.end(), layer.begin(), layer.end());
    all.insert(all.end(), undetermined.begin(), undetermined.end());
    if (all.size() != horizon)
        return false;
    std::sort(all.begin(), all.end());
    for (Index i = 0; i < horizon; ++i)
        if (all[i] != first + i)
            return false;
    return shift_layers.empty() ? wandering.empty() : shift_layers.front() == wandering;
}

WoldReport seq_wold(const SeqOperator& op, Index horizon)
{
    if (!op.inverse)
        throw Error(ErrorCode::InvalidInput, "seq_wold: operator has no preimage rule");
    WoldReport rep;
    const Index first = op.space.first();
    rep.first = first;
    rep.horizon = horizon;
    const Index end = first + horizon;

    // status: -1 unknown, -2 unitary, -3 undetermined, >= 0 shift layer
    constexpr long unknown = -1, unitary = -2, undetermined = -3;
    std::vector<long> status(static_cast<std::size_t>(horizon), unknown);
    auto slot = [&](Index n) -> long& { return status[static_cast<std::size_t>(n - first)]; };

    std::vector<Index> chain;
    for (Index m = first; m < end; ++m) {
        if (slot(m) != unknown)
            continue;
        chain.clear();
        std::unordered_set<Index> on_chain;
        Index cur = m;
        long base = unknown; // status of the last chain element
        for (;;) {
            chain.push_back(cur);
            on_chain.insert(cur);
            const auto pre = op.inverse(cur);
            if (!pre || *pre < first) {
                base = 0;
                break;
            }
            if (*pre >= end) {
                base = op.surjective ? unitary : undetermined;
                break;
            }
            if (on_chain.count(*pre) != 0) {
                base = unitary;
                break;
            }
            const long known = slot(*pre);
            if (known != unknown) {
                base = known >= 0 ? known + 1 : known;
                break;
            }
            cur = *pre;
        }
        // chain runs from m backwards; the last element carries `base`.
        for (std::size_t i = chain.size(); i-- > 0;) {
            const long depth_from_end = static_cast<long>(chain.size() - 1 - i);
            slot(chain[i]) = base >= 0 ? base + depth_from_end : base;
        }
    }

    for (Index n = first; n < end; ++n) {
        const long s = slot(n);
        if (s == unitary) {
            rep.unitary.push_back(n);
        } else if (s == undetermined) {
            rep.undetermined.push_back(n);
        } else {
            const auto layer = static_cast<std::size_t>(s);
            if (rep.shift_layers.size() <= layer)
                rep.shift_layers.resize(layer + 1);
            rep.shift_layers[layer].push_back(n);
        }
    }
    if (!rep.shift_layers.empty())
        rep.wandering = rep.shift_layers.front();
    return rep;
}

SeqTruncation truncate(const SeqOperator& op, std::size_t size)
{
    SeqTruncation tr;
    const Index first = op.space.first();
    tr.weights.resize(size);
    std::vector<double> inv_w(size);
    for (std::size_t i = 0; i < size; ++i) {
        tr.weights[i] = op.space.weight(first + i);
        inv_w[i] = 1.0 / tr.weights[i];
    }
    tr.form = AForm::make(CMatrix::diagonal(std::span<const double>(inv_w)));
    tr.t = CMatrix(size, size);
    for (std::size_t j = 0; j < size; ++j) {
        const auto s = op.sigma(first + j);
        if (!s || *s < first || *s - first >= size)
            continue;
        const auto i = static_cast<std::size_t>(*s - first);
        tr.t(i, j) = op.coeff(first + j) * std::sqrt(tr.weights[i] / tr.weights[j]);
    }
    return tr;
}

CMatrix to_h_coordinates(const WeightedSpace& space, const std::vector<cplx>& x)
{
    CMatrix y(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        y(i, 0) = std::sqrt(space.weight(space.first() + i)) * x[i];
    return y;
}

} // namespace ageom
