#include <doctest.h>

#include <cmath>
#include <set>

#include "ageom/sequence.hpp"
#include "oracles.hpp"

using namespace ageom;

namespace {

SeqOperator op(const std::string& name, std::optional<WeightedSpace> space = std::nullopt)
{
    auto o = builtin_operator(name, space);
    REQUIRE(o);
    return *o;
}

SeqOperator halving()
{
    SeqOperator o;
    o.name = "halving";
    o.space = WeightedSpace::unit();
    o.sigma = [](Index n) -> std::optional<Index> { return (n + 1) / 2; };
    o.inverse = [](Index) -> std::optional<Index> { return std::nullopt; };
    return o;
}

} // namespace

TEST_CASE("weights and spaces")
{
    CHECK(WeightedSpace::dirichlet().first() == 0);
    CHECK(WeightedSpace::dirichlet().weight(0) == 1.0);
    CHECK(WeightedSpace::sobolev().weight(5) == 5.0);
    CHECK(WeightedSpace::unit().weight(9) == 1.0);
    CHECK(parse_space("dirichlet"));
    CHECK_FALSE(parse_space("hardy-ish"));
}

TEST_CASE("non-odd-square enumeration against brute force")
{
    std::vector<Index> brute;
    for (Index m = 1; brute.size() < 5000; ++m) {
        const Index r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(m))));
        if (!(r * r == m && r % 2 == 1))
            brute.push_back(m);
    }
    for (std::size_t k = 0; k < brute.size(); ++k) {
        REQUIRE(non_odd_square(k + 1) == brute[k]);
        REQUIRE(non_odd_square_rank(brute[k]) == std::optional<Index>(k + 1));
    }
    CHECK(is_odd_square(9));
    CHECK(is_odd_square(1));
    CHECK_FALSE(is_odd_square(4));
    CHECK_FALSE(non_odd_square_rank(25));
    // large indices stay exact
    const Index big = non_odd_square(Index{1} << 40);
    CHECK(non_odd_square_rank(big) == std::optional<Index>(Index{1} << 40));
}

TEST_CASE("example operators are mutually inverse")
{
    const SeqOperator u = op("example_242_U");
    const SeqOperator us = op("example_242_Ustar");
    for (Index n = 1; n < 20000; ++n) {
        const auto a = us.sigma(n);
        REQUIRE(a);
        REQUIRE(u.sigma(*a) == std::optional<Index>(n));
        REQUIRE(us.inverse(*a) == std::optional<Index>(n));
    }
    CHECK(us.sigma(3) == std::optional<Index>(9));
    CHECK(us.sigma(5) == std::optional<Index>(25));
    CHECK(us.sigma(2) == std::optional<Index>(non_odd_square(1)));
    CHECK(u.sigma(9) == std::optional<Index>(3));
}

TEST_CASE("seq_is_l_isometry")
{
    CHECK(seq_is_l_isometry(op("dirichlet_shift"), 1000));
    CHECK(seq_is_l_isometry(op("double_shift"), 1000));
    CHECK(seq_is_l_isometry(op("example_242_U"), 1000));
    CHECK(seq_is_l_isometry(op("example_242_Ustar"), 1000));
    CHECK_FALSE(seq_is_l_isometry(halving(), 1000));
}

TEST_CASE("boundedness on H")
{
    const BoundedReport u = seq_bounded_on_H(op("example_242_U"), 100000);
    CHECK(u.bounded_evidence);
    CHECK(u.sup_ratio <= 2.0);
    const BoundedReport us = seq_bounded_on_H(op("example_242_Ustar"), 100000);
    CHECK_FALSE(us.bounded_evidence);
    CHECK(us.trend == Trend::Growing);
    CHECK(us.sup_ratio >= 300.0);
    const BoundedReport id = seq_bounded_on_H(op("identity"), 1000);
    CHECK(id.sup_ratio == 1.0);
    CHECK(id.trend == Trend::Bounded);
}

TEST_CASE("seq_adjoint")
{
    const SeqOperator d = seq_adjoint(op("double_shift"));
    CHECK(d.sigma(6) == std::optional<Index>(3));
    CHECK_FALSE(d.sigma(7));
    const SeqOperator s = seq_adjoint(op("dirichlet_shift"));
    CHECK_FALSE(s.sigma(0));
    CHECK(s.sigma(1) == std::optional<Index>(0));
    const SeqOperator us = op("example_242_Ustar");
    const SeqOperator twice = seq_adjoint(seq_adjoint(us));
    for (Index n = 1; n < 1000; ++n)
        REQUIRE(twice.sigma(n) == us.sigma(n));
    const SeqOperator inv = seq_adjoint(us);
    for (Index n = 1; n < 1000; ++n)
        REQUIRE(inv.sigma(*us.sigma(n)) == std::optional<Index>(n));
}

TEST_CASE("adjointability verdicts")
{
    CHECK(seq_adjointability(op("dirichlet_shift"), 100000).verdict == Adjointability::AdjointableEvidence);
    const AdjointabilityReport dbl = seq_adjointability(op("double_shift", WeightedSpace::sobolev()), 100000);
    CHECK(dbl.verdict == Adjointability::AdjointableEvidence);
    CHECK(dbl.adjoint.sup_ratio <= 1.0);
    const AdjointabilityReport u = seq_adjointability(op("example_242_U"), 100000);
    CHECK(u.verdict == Adjointability::NonAdjointableEvidence);
    REQUIRE(!u.witness.empty());
    for (const auto& w : u.witness)
        CHECK(w.ratio == static_cast<double>(w.index));
    CHECK(seq_adjointability(op("example_242_Ustar"), 100000).verdict == Adjointability::NonAdjointableEvidence);
}

TEST_CASE("divergence demo")
{
    CHECK(divergence_demo(1).partial_sums.back() == 1.0);
    CHECK(divergence_demo(2).partial_sums.back() == 1.0);
    CHECK(divergence_demo(3).partial_sums.back() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    const DivergenceDemo d = divergence_demo(100000);
    CHECK(d.monotone);
    CHECK(d.partial_sums.size() == 50000);
    CHECK(std::abs(d.partial_sums.back() - static_cast<double>(oracle::odd_harmonic(50000))) < 1e-10);
    CHECK(d.at(99999) == d.partial_sums.back());
    CHECK(d.at(10) == doctest::Approx(1.0 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7 + 1.0 / 9).epsilon(1e-15));
    for (std::size_t k = 1; k < d.partial_sums.size(); ++k)
        REQUIRE(d.partial_sums[k] > d.partial_sums[k - 1]);
    // the witness itself is in H: sum over odd j of j * j^{-3} converges
    CHECK(d.witness_norm_sq < std::pow(std::numbers::pi, 2) / 8.0 + 1e-12);
}

TEST_CASE("Wold split: shift on the unit space")
{
    const WoldReport w = seq_wold(op("dirichlet_shift", WeightedSpace::unit()), 64);
    CHECK(w.partitions());
    CHECK(w.wandering == std::vector<Index>{1});
    CHECK(w.unitary.empty());
    REQUIRE(w.shift_layers.size() == 64);
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(w.shift_layers[k] == std::vector<Index>{k + 1});
}

TEST_CASE("Wold split: permutation and double shift against brute force")
{
    const WoldReport p = seq_wold(op("example_242_Ustar"), 4096);
    CHECK(p.partitions());
    CHECK(p.wandering.empty());
    CHECK(p.unitary.size() == 4096);

    const SeqOperator d = op("double_shift");
    const Index horizon = 4096;
    const WoldReport w = seq_wold(d, horizon);
    CHECK(w.partitions());
    const auto missing = oracle::missing_from_range(d.sigma, d.space.first(), horizon, horizon);
    CHECK(std::set<Index>(w.wandering.begin(), w.wandering.end()) == missing);
    for (std::size_t k = 0; k < w.shift_layers.size(); ++k)
        for (Index m : w.shift_layers[k]) {
            REQUIRE(m % (Index{1} << k) == 0);
            REQUIRE((m >> k) % 2 == 1);
        }
}

TEST_CASE("truncation matches the weighted inner product")
{
    const SeqOperator s = op("dirichlet_shift");
    const SeqTruncation t = truncate(s, 6);
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(t.weights[k] == static_cast<double>(k + 1));
    // interior columns in H coordinates carry sqrt(w(n+1)/w(n))
    for (std::size_t k = 0; k + 1 < 6; ++k)
        CHECK(std::abs(t.t(k + 1, k) - cplx(std::sqrt(static_cast<double>(k + 2) / static_cast<double>(k + 1)))) <
              1e-15);
    const std::vector<cplx> x{1.0, cplx(0.0, 2.0), -1.0};
    const CMatrix h = to_h_coordinates(WeightedSpace::dirichlet(), x);
    double expected = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        expected += static_cast<double>(k + 1) * std::norm(x[k]);
    double got = 0.0;
    for (const auto& z : h.data())
        got += std::norm(z);
    CHECK(got == doctest::Approx(expected));
}
