#include "doctest.h"
#include "gen.hpp"

#include "stphase/errors.hpp"
#include "stphase/fourier.hpp"
#include "stphase/structure.hpp"

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

RegularPart minus_one() { return jordan({{FieldElement(-1), 1}}); }

ElementaryConnection random_el(gen::Rng& rng, long q_min = 1, long q_max = 6, long p_max = 4) {
    const long p = rng.integer(1, p_max);
    const long q = rng.integer(q_min, q_max);
    std::map<long, FieldElement> terms;
    terms[-q] = rng.monomial();
    for (long k = 1; k < q; ++k) {
        if (rng.integer(0, 2) == 0) {
            terms[-k] = rng.cyclotomic(rng.coin() ? 3 : 4);
        }
    }
    std::vector<JordanBlock> blocks;
    const long r = rng.integer(1, 3);
    for (long i = 0; i < r;) {
        const long size = rng.integer(1, r - i);
        blocks.push_back({FieldElement::zeta(rng.integer(1, 4), rng.integer(0, 3)), size});
        i += size;
    }
    return el(p, LaurentSeries(terms), RegularPart(blocks));
}

} // namespace

TEST_CASE("fourier_0_inf on the exponential family") {
    // a = 1, q = 1: rho = -u^2, phi = 2/u, monodromy -1
    auto f = fourier_0_inf(el(1, u(-1)), Sign::minus);
    CHECK(f.rho() == RamificationMap(u(2, -1)));
    CHECK(f.phi() == u(-1, 2));
    CHECK(f.reg() == minus_one());

    for (long q = 1; q <= 5; ++q) {
        const Rational a = make_rational(3, 2);
        auto g = fourier_0_inf(el(1, u(-q, a)), Sign::minus);
        CHECK(g.rho() == RamificationMap(u(q + 1, -1 / (q * a))));
        CHECK(g.phi() == u(-q, (q + 1) * a));
        CHECK(g.reg() == (q % 2 ? minus_one() : RegularPart::trivial()));
    }

    auto h = fourier_0_inf(el(2, u(-3)), Sign::minus);
    CHECK(h.rho() == RamificationMap(u(5, make_rational(-2, 3))));
    CHECK(h.phi() == u(-3, make_rational(5, 2)));
    CHECK(h.reg() == minus_one());
    CHECK(h.p() == 5);
    CHECK(h.q() == 3);

    CHECK_THROWS_AS(fourier_0_inf(el(1, LaurentSeries()), Sign::minus), DomainError);
}

TEST_CASE("fourier_regular") {
    CHECK(fourier_regular({jordan({{FieldElement(1), 2}})}) == RegularPart::trivial());
    auto lam = FieldElement::zeta(5, 2);
    CHECK(fourier_regular({jordan({{lam, 3}})}) == jordan({{lam, 3}}));
    CHECK(fourier_regular({RegularPart::trivial()}).empty());
    CHECK(fourier_regular({RegularPart::trivial()}, true) == RegularPart::trivial());

    RegularGermData g{jordan({{FieldElement(1), 2}, {FieldElement(1), 1}, {lam, 2}})};
    CHECK(g.kappa() == 2);
    CHECK(g.phi().rank() == g.psi.rank() - g.kappa());
    CHECK(dim_centralizer(g.psi) - dim_centralizer(g.phi()) == g.kappa() * g.kappa());
}

TEST_CASE("fourier_inf_0 inverts fourier_0_inf on the exponential family") {
    for (long q = 1; q <= 5; ++q) {
        const Rational a = make_rational(-2, 5);
        auto e = el(1, u(-q, a));
        auto back = fourier_inf_0(fourier_0_inf(e, Sign::minus), Sign::plus);
        CHECK(back == e);
    }
    CHECK_THROWS_AS(fourier_inf_0(el(1, u(-1)), Sign::plus), DomainError);
    auto s = el(3, u(-2), RegularPart::trivial(2));
    auto t = fourier_inf_0(s, Sign::plus);
    CHECK(t.invariants().irregularity == s.invariants().irregularity);
    CHECK(t.invariants().rank == s.invariants().rank - s.invariants().irregularity);
    CHECK(t.invariants().slope == make_rational(2, 1));
}

TEST_CASE("fourier_inf_inf") {
    for (long q = 2; q <= 5; ++q) {
        const Rational a = make_rational(7, 3);
        auto f = fourier_inf_inf(el(1, u(-q, a)), Sign::plus);
        CHECK(f.rho() == RamificationMap(u(q - 1, -1 / (q * a))));
        CHECK(f.phi() == u(-q, (1 - q) * a));
        CHECK(f.reg() == (q % 2 ? minus_one() : RegularPart::trivial()));
        CHECK(fourier_inf_inf(f, Sign::minus) == el(1, u(-q, a)));
    }
    CHECK_THROWS_AS(fourier_inf_inf(el(1, u(-1)), Sign::plus), DomainError);
    CHECK_THROWS_AS(fourier_inf_inf(el(3, u(-2)), Sign::plus), DomainError);
}

TEST_CASE("fourier_s_inf") {
    auto e = el(2, u(-1) + u(-3));
    CHECK(fourier_s_inf(e, FieldElement(), Sign::minus) == fourier_0_inf(e, Sign::minus));
    RegularGermData g{jordan({{FieldElement::zeta(3), 1}})};
    CHECK(fourier_s_inf(g, FieldElement(), Sign::minus) ==
          FormalConnection(ElementaryConnection::regular(g.psi)));
    auto r = fourier_s_inf(g, FieldElement(1), Sign::minus);
    REQUIRE(r.summands.size() == 1);
    CHECK(r.summands[0] == el(1, u(-1, -1), g.psi));
    CHECK(r.summands[0].invariants().slope == 1);
    CHECK(fourier_s_inf(RegularGermData{RegularPart::trivial()}, FieldElement(1), Sign::minus).summands.empty());

    // q/(p+q) < 1, so the s-term dominates and the slope becomes one
    auto x = fourier_s_inf(e, FieldElement(2), Sign::plus);
    CHECK(x.invariants().slope == 1);
    CHECK(x.p() == 5);
    auto y = fourier_s_inf(el(1, u(-1)), FieldElement(make_rational(1, 2)), Sign::minus);
    // rho = -u^2, phi = 2/u - (1/2) / (-u^2)
    CHECK(y.phi() == u(-2, make_rational(1, 2)) + u(-1, 2));
}

TEST_CASE("property: conservation laws") {
    gen::Rng rng(31);
    for (int t = 0; t < 25; ++t) {
        const auto e = random_el(rng);
        const auto in = e.invariants();
        const auto f = fourier_0_inf(e, rng.coin() ? Sign::plus : Sign::minus);
        const auto out = f.invariants();
        CHECK(1 / out.slope == 1 + 1 / in.slope);
        CHECK(out.irregularity == in.irregularity);
        CHECK(out.rank == in.rank + in.irregularity);

        const auto g = random_el(rng, 2, 6, 1);
        if (g.q() > g.p()) {
            const auto h = fourier_inf_inf(g, Sign::plus);
            CHECK(1 / h.invariants().slope == 1 - 1 / g.invariants().slope);
            CHECK(h.invariants().irregularity == g.invariants().irregularity);
            CHECK(h.invariants().rank == g.invariants().irregularity - g.invariants().rank);
        }
    }
}

TEST_CASE("property: round trips, sign symmetry, determinant, well-definedness") {
    gen::Rng rng(37);
    for (int t = 0; t < 25; ++t) {
        const auto e = random_el(rng, 1, 6, 4);
        const auto f = fourier_0_inf(e, Sign::minus);
        CHECK(is_isomorphic(fourier_inf_0(f, Sign::plus), e));

        const ElementaryConnection flipped(-e.rho(), e.phi(), e.reg());
        CHECK(is_isomorphic(fourier_0_inf(e, Sign::plus), fourier_0_inf(flipped, Sign::minus)));

        CHECK(determinant(f).reg() == determinant(e).reg());

        if (e.q() > e.p()) {
            CHECK(is_isomorphic(fourier_inf_inf(fourier_inf_inf(e, Sign::plus), Sign::minus), e));
        }
    }
    for (int t = 0; t < 8; ++t) {
        // a non-standard ramification and its normalization transform to isomorphic objects
        const long q = rng.integer(1, 3);
        const LaurentSeries rho = u(2, rng.coin() ? 1 : 4) + u(3, rng.small_rational());
        const ElementaryConnection e(RamificationMap(rho), u(-q - 1) + u(-1, rng.small_rational()), RegularPart::trivial());
        const auto n = normalize_ramification(e);
        CHECK(is_isomorphic(fourier_0_inf(e, Sign::minus), fourier_0_inf(n, Sign::minus)));
    }
}

TEST_CASE("stationary_phase_at_infinity") {
    SingularityDatum origin;
    origin.location = FieldElement();
    origin.regular = RegularGermData{jordan({{FieldElement(1), 2}})};
    CHECK(stationary_phase_at_infinity({origin}, Sign::minus) ==
          FormalConnection(ElementaryConnection::regular(RegularPart::trivial())));
    CHECK(stationary_phase_at_infinity({origin}, Sign::minus, {}, false) ==
          FormalConnection(ElementaryConnection::regular(jordan({{FieldElement(1), 2}}))));

    SingularityDatum irr;
    irr.location = FieldElement();
    irr.summands = {el(1, u(-2))};
    CHECK(stationary_phase_at_infinity({irr}, Sign::minus) == canonicalize(fourier_0_inf(el(1, u(-2)), Sign::minus)));

    SingularityDatum shifted;
    shifted.location = FieldElement(3);
    shifted.regular = RegularGermData{jordan({{FieldElement(2), 1}})};
    auto out = stationary_phase_at_infinity({shifted}, Sign::minus);
    REQUIRE(out.summands.size() == 1);
    CHECK(out.summands[0].phi() == u(-1, -3));

    SingularityDatum inf;
    inf.slope_above = {el(1, u(-3))};
    inf.slope_below = {el(2, u(-1))};
    auto both = stationary_phase_at_infinity({shifted, inf}, Sign::minus);
    CHECK(both.rank() == 1 + 2);

    SingularityDatum bad;
    bad.summands = {el(1, u(-3))};
    CHECK_THROWS_AS(stationary_phase_at_infinity({bad}, Sign::minus), DomainError);
    SingularityDatum wrong;
    wrong.slope_above = {el(2, u(-1))};
    CHECK_THROWS_AS(stationary_phase_at_infinity({wrong}, Sign::minus), DomainError);
}
