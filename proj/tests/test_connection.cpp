#include "doctest.h"
#include "gen.hpp"

#include "stphase/connection.hpp"
#include "stphase/errors.hpp"

using namespace stphase;

namespace {

LaurentSeries u(long k = 1, Rational c = 1) { return LaurentSeries::monomial(FieldElement(c), k); }

ElementaryConnection el(long p, const LaurentSeries& phi, RegularPart reg = RegularPart::trivial()) {
    return ElementaryConnection(RamificationMap::power(p), phi, std::move(reg));
}

RegularPart jordan(std::vector<std::pair<FieldElement, long>> b) {
    std::vector<JordanBlock> blocks;
    for (auto& [e, s] : b) {
        blocks.push_back({e, s});
    }
    return RegularPart(blocks);
}

} // namespace

TEST_CASE("invariants of elementary connections") {
    auto a = el(3, u(-2), RegularPart::trivial(2)).invariants();
    CHECK(a.slope == make_rational(2, 3));
    CHECK(a.irregularity == 4);
    CHECK(a.rank == 6);
    auto b = el(1, LaurentSeries(), RegularPart::trivial(3)).invariants();
    CHECK(b.slope == 0);
    CHECK(b.irregularity == 0);
    CHECK(b.rank == 3);
    auto c = el(2, u(-3)).invariants();
    CHECK(c.slope == make_rational(3, 2));
    CHECK(c.irregularity == 3);
    CHECK(c.rank == 2);
}

TEST_CASE("phi is stored as its principal part") {
    auto e = el(1, u(-2) + u(0, 5) + u(3));
    CHECK(e.phi() == u(-2));
    CHECK(e.q() == 2);
    CHECK_THROWS_AS(ElementaryConnection(RamificationMap(u(0) + u(1)), u(-1), RegularPart::trivial()),
                    DomainError);
    CHECK_THROWS_AS(el(1, u(-1), RegularPart()), DomainError);
}

TEST_CASE("normalize_ramification") {
    auto a = el(1, u(-3, 4));
    CHECK(normalize_ramification(a) == a);

    ElementaryConnection b(RamificationMap(u(1, 2)), u(-1), RegularPart::trivial());
    CHECK(normalize_ramification(b) == el(1, u(-1, 2)));

    // rho = u^2 (1 + u): check against lambda built independently.
    const LaurentSeries rho = u(2) + u(3);
    ElementaryConnection c(RamificationMap(rho), u(-1), RegularPart::trivial());
    const ElementaryConnection n = normalize_ramification(c);
    CHECK(n.p() == 2);
    const LaurentSeries lambda = rho.nth_root(2, 8).reversion(8);
    CHECK(compose(rho, lambda).agrees_with(u(2)));
    CHECK(n.phi() == compose(u(-1), lambda).principal_part());
    CHECK(n.phi() == u(-1) + u(0, 0));
    CHECK(n.reg() == RegularPart::trivial());

    // leading coefficient with a radical root: rho = 2u^3, phi = u^-2
    ElementaryConnection d(RamificationMap(u(3, 2)), u(-2), RegularPart::trivial());
    const ElementaryConnection nd = normalize_ramification(d);
    const FieldElement beta = FieldElement::root(FieldElement(2), 3);
    CHECK(nd.phi() == LaurentSeries::monomial(beta.pow(2), -2));
}

TEST_CASE("normalize with lower-order ramification terms") {
    // rho = u + u^2, phi = u^-2: lambda = v - v^2 + 2v^3 - ..., phi(lambda) = v^-2 + 2 v^-1 + ...
    ElementaryConnection c(RamificationMap(u(1) + u(2)), u(-2), RegularPart::trivial());
    CHECK(normalize_ramification(c).phi() == u(-2) + u(-1, 2));
}

TEST_CASE("reduce_minimal") {
    auto a = reduce_minimal(el(4, u(-2)));
    CHECK(a.p() == 2);
    CHECK(a.phi() == u(-1));
    CHECK(a.reg() == jordan({{FieldElement(1), 1}, {FieldElement(-1), 1}}));

    auto b = el(2, u(-1), jordan({{FieldElement::zeta(3), 2}}));
    CHECK(reduce_minimal(b) == b);

    auto c = reduce_minimal(el(6, u(-4) + u(-2)));
    CHECK(c.p() == 3);
    CHECK(c.phi() == u(-2) + u(-1));
    CHECK(c.reg().rank() == 2);

    auto r = reduce_minimal(el(3, LaurentSeries()));
    CHECK(r.p() == 1);
    CHECK(r.reg().rank() == 3);
    CHECK(r.reg() == jordan({{FieldElement(1), 1}, {FieldElement::zeta(3), 1}, {FieldElement::zeta(3, 2), 1}}));
    CHECK_THROWS_AS(reduce_minimal(ElementaryConnection(RamificationMap(u(1, 2)), u(-1), RegularPart::trivial())),
                    DomainError);
}

TEST_CASE("pullback_decompose") {
    auto a = pullback_decompose(el(2, u(-1)), 2);
    REQUIRE(a.summands.size() == 2);
    CHECK(a.summands[0] == el(1, u(-1)));
    CHECK(a.summands[1] == el(1, u(-1, -1)));

    auto e = el(3, u(-2), RegularPart::trivial(2));
    CHECK(pullback_decompose(e, 1).summands == std::vector<ElementaryConnection>{e});

    auto b = pullback_decompose(el(4, u(-1)), 2);
    REQUIRE(b.summands.size() == 2);
    CHECK(b.summands[0].p() == 2);
    CHECK(b.summands[0].phi() == u(-1));
    CHECK(b.summands[1].phi() == LaurentSeries::monomial(FieldElement::zeta(4, -1), -1));
    CHECK(is_isomorphic(b.summands[1], el(2, LaurentSeries::monomial(FieldElement::imaginary_unit(), -1))));
    CHECK_FALSE(is_isomorphic(b.summands[1], b.summands[0]));
    CHECK_THROWS_AS(pullback_decompose(e, 2), DomainError);
}

TEST_CASE("is_isomorphic_elementary") {
    auto r = jordan({{FieldElement::zeta(5), 1}});
    auto w = is_isomorphic_elementary(el(2, u(-1), r), el(2, u(-1, -1), r));
    CHECK(w.isomorphic);
    CHECK(*w.zeta == FieldElement(-1));
    CHECK_FALSE(is_isomorphic_elementary(el(2, u(-1), r), el(2, u(-1, 2), r)).isomorphic);
    auto self = is_isomorphic_elementary(el(3, u(-2) + u(-1), r), el(3, u(-2) + u(-1), r));
    CHECK(self.isomorphic);
    CHECK(self.zeta->is_one());
    CHECK_FALSE(is_isomorphic_elementary(el(2, u(-1), r), el(2, u(-1), RegularPart::trivial())).isomorphic);
}

TEST_CASE("canonicalize") {
    FormalConnection two{{el(1, u(-1)), el(1, u(-1))}};
    auto c = canonicalize(two);
    REQUIRE(c.summands.size() == 1);
    CHECK(c.summands[0].reg() == RegularPart::trivial(2));

    auto r1 = jordan({{FieldElement(2), 1}});
    auto r2 = jordan({{FieldElement(3), 2}});
    auto m = canonicalize(FormalConnection{{el(2, u(-1), r1), el(2, u(-1, -1), r2)}});
    REQUIRE(m.summands.size() == 1);
    CHECK(m.summands[0].reg() == r1 + r2);

    CHECK(canonicalize(m) == m);
    CHECK(is_isomorphic(m, canonicalize(m)));
    CHECK_FALSE(is_isomorphic(el(1, u(-1)), el(1, u(-2))));
    FormalConnection x{{el(1, u(-1)), el(2, u(-3)), el(1, LaurentSeries())}};
    FormalConnection y{{el(1, LaurentSeries()), el(2, u(-3)), el(1, u(-1))}};
    CHECK(is_isomorphic(x, y));
}

TEST_CASE("property: rotations are isomorphic, perturbations are not") {
    gen::Rng rng(17);
    for (int t = 0; t < 40; ++t) {
        const long p = rng.integer(1, 4);
        std::map<long, FieldElement> terms;
        const long q = rng.integer(1, 6);
        terms[-q] = rng.monomial();
        for (long k = 1; k < q; ++k) {
            if (rng.coin()) {
                terms[-k] = rng.cyclotomic(rng.coin() ? 3 : 4);
            }
        }
        auto e = el(p, LaurentSeries(terms), RegularPart::trivial(rng.integer(1, 3)));
        for (long k = 0; k < p; ++k) {
            auto rot = el(p, rotate(e.phi(), FieldElement::zeta(p, k)), e.reg());
            CHECK(is_isomorphic_elementary(e, rot).isomorphic);
        }
        auto pert = el(p, e.phi() + u(-q, 1) * FieldElement::root(FieldElement(2), 3), e.reg());
        CHECK_FALSE(is_isomorphic_elementary(e, pert).isomorphic);
    }
}

TEST_CASE("property: canonical form and reductions preserve invariants") {
    gen::Rng rng(19);
    for (int t = 0; t < 40; ++t) {
        const long p = rng.integer(1, 4);
        const long q = rng.integer(0, 6);
        std::map<long, FieldElement> terms;
        if (q > 0) {
            terms[-q] = rng.monomial();
            for (long k = 1; k < q; ++k) {
                if (rng.integer(0, 2) == 0) {
                    terms[-k] = rng.cyclotomic(3);
                }
            }
        }
        auto e = el(p, LaurentSeries(terms), RegularPart::trivial(rng.integer(1, 3)));
        auto red = reduce_minimal(e);
        CHECK(red.invariants().rank == e.invariants().rank);
        CHECK(red.invariants().irregularity == e.invariants().irregularity);
        CHECK(red.invariants().slope == e.invariants().slope);
        auto c = canonicalize(e);
        CHECK(canonicalize(c) == c);
        CHECK(c.rank() == e.invariants().rank);
        CHECK(c.irregularity() == e.invariants().irregularity);
        for (long d = 1; d <= p; ++d) {
            if (p % d == 0) {
                auto pb = pullback_decompose(e, d);
                CHECK(pb.rank() == e.invariants().rank);
                CHECK(pb.irregularity() == d * e.invariants().irregularity);
            }
        }
    }
}
