#include "doctest.h"
#include "brute.hpp"
#include "gen.hpp"

#include "stphase/errors.hpp"
#include "stphase/structure.hpp"

#include <algorithm>

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

std::vector<long> sizes_of(const RegularPart& j) {
    std::vector<long> out;
    for (const auto& b : j.blocks()) {
        out.push_back(b.size);
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

bool bounded_by(const ElementaryConnection& s, const ElementaryConnection& a, const ElementaryConnection& b) {
    const auto sa = a.invariants(), sb = b.invariants(), ss = s.invariants();
    const Rational max_slope = std::max(sa.slope, sb.slope);
    const long max_irr = std::max(sa.irregularity * sb.rank, sb.irregularity * sa.rank);
    return ss.slope <= max_slope && ss.irregularity <= max_irr;
}

ElementaryConnection random_el(gen::Rng& rng) {
    const long p = rng.integer(1, 4);
    const long q = rng.integer(0, 5);
    std::map<long, FieldElement> terms;
    if (q > 0) {
        terms[-q] = rng.monomial();
        for (long k = 1; k < q; ++k) {
            if (rng.coin()) {
                terms[-k] = rng.cyclotomic(rng.coin() ? 3 : 4);
            }
        }
    }
    std::vector<JordanBlock> blocks;
    const long nb = rng.integer(1, 2);
    for (long i = 0; i < nb; ++i) {
        blocks.push_back({FieldElement::zeta(rng.integer(1, 6), 1) * FieldElement(rng.coin() ? 1 : 2),
                          rng.integer(1, 2)});
    }
    return el(p, LaurentSeries(terms), RegularPart(blocks));
}

} // namespace

TEST_CASE("jordan_tensor matches the brute-force Kronecker product") {
    for (long a = 1; a <= 4; ++a) {
        for (long b = 1; b <= 4; ++b) {
            const Rational lam = make_rational(2, 1), mu = make_rational(-1, 3);
            const brute::Matrix k = brute::kronecker(brute::jordan_block(lam, a), brute::jordan_block(mu, b));
            const RegularPart t = jordan_tensor(jordan({{FieldElement(lam), a}}), jordan({{FieldElement(mu), b}}));
            CHECK(sizes_of(t) == brute::block_sizes(k, lam * mu));
            for (const auto& blk : t.blocks()) {
                CHECK(blk.eigenvalue == FieldElement(lam * mu));
            }
        }
    }
    CHECK(jordan_tensor(jordan({{FieldElement(1), 2}}), jordan({{FieldElement(1), 2}})) ==
          jordan({{FieldElement(1), 3}, {FieldElement(1), 1}}));
    CHECK(jordan_tensor(jordan({{FieldElement(1), 2}}), jordan({{FieldElement::zeta(5), 1}})) ==
          jordan({{FieldElement::zeta(5), 2}}));
}

TEST_CASE("dual") {
    CHECK(dual(el(1, u(-1))) == el(1, u(-1, -1)));
    auto d = dual(el(2, u(-1), jordan({{FieldElement::zeta(3), 2}})));
    CHECK(d == el(2, u(-1, -1), jordan({{FieldElement::zeta(3, 2), 2}})));
    auto e = el(3, u(-2) + u(-1, 5), jordan({{FieldElement(2), 1}, {FieldElement::zeta(4), 3}}));
    CHECK(is_isomorphic(dual(dual(e)), e));
    CHECK(dual(e).invariants().rank == e.invariants().rank);
    CHECK(dual(e).invariants().slope == e.invariants().slope);
}

TEST_CASE("tensor") {
    auto a = tensor(el(1, u(-2)), el(1, u(-1, 3)));
    REQUIRE(a.summands.size() == 1);
    CHECK(a.summands[0] == el(1, u(-2) + u(-1, 3)));

    auto raw = tensor_summands(el(2, u(-1)), el(2, u(-1)));
    REQUIRE(raw.summands.size() == 2);
    CHECK(raw.summands[0] == el(2, u(-1, 2)));
    CHECK(raw.summands[1] == el(2, LaurentSeries()));
    CHECK(raw.rank() == 4);
    auto c = tensor(el(2, u(-1)), el(2, u(-1)));
    CHECK(c.rank() == 4);

    // non-standard ramification is normalized first and logged
    Provenance log;
    ElementaryConnection scaled(RamificationMap(u(1, 2)), u(-1), RegularPart::trivial());
    auto s = tensor(scaled, el(1, u(-1)), {}, &log);
    CHECK(s == FormalConnection(el(1, u(-1, 3))));
    CHECK_FALSE(log.empty());

    // coprime ramifications: one summand of degree p1 p2
    auto m = tensor_summands(el(2, u(-1)), el(3, u(-1)));
    REQUIRE(m.summands.size() == 1);
    CHECK(m.summands[0].p() == 6);
    CHECK(m.summands[0].phi() == u(-3) + u(-2));
}

TEST_CASE("hom") {
    auto a = hom(el(1, u(-2, 3)), el(1, u(-2, 3)));
    CHECK(a == FormalConnection(el(1, LaurentSeries())));
    CHECK(hom(el(1, u(-1)), el(1, u(-1, 2))) == FormalConnection(el(1, u(-1))));
    auto r = jordan({{FieldElement::zeta(3), 2}});
    auto e = el(2, u(-1), r);
    auto h = hom(e, e);
    long reg_rank = 0;
    for (const auto& s : h.summands) {
        if (s.is_regular()) {
            reg_rank += s.invariants().rank;
            CHECK(s.reg() == pushforward_monodromy(jordan_tensor(r.dual(), r), 2));
        }
    }
    CHECK(reg_rank == 2 * 4);
}

TEST_CASE("end_regular_part") {
    auto one = end_regular_part(el(2, u(-1)));
    REQUIRE(one.size() == 1);
    CHECK(one[0].rank() == 2);
    CHECK(one[0] == jordan({{FieldElement(1), 1}, {FieldElement(-1), 1}}));

    auto r = jordan({{FieldElement(2), 2}});
    auto reg = end_regular_part(ElementaryConnection::regular(r));
    REQUIRE(reg.size() == 1);
    CHECK(reg[0] == jordan_tensor(r.dual(), r));

    auto two = end_regular_part(FormalConnection{{el(1, u(-1)), el(1, u(-2))}});
    CHECK(two.size() == 2);
}

TEST_CASE("determinant") {
    auto r = jordan({{FieldElement(3), 1}, {FieldElement::zeta(5), 2}});
    auto d1 = determinant(el(1, u(-2) + u(-1, 5), r));
    CHECK(d1 == el(1, u(-2, 3) + u(-1, 15), jordan({{FieldElement(3) * FieldElement::zeta(5, 2), 1}})));

    auto lam = FieldElement::zeta(7, 3);
    auto d2 = determinant(el(2, u(-1, 4), jordan({{lam, 1}})));
    CHECK(d2 == ElementaryConnection::regular(jordan({{-lam, 1}})));

    // only exponents divisible by p survive, each carrying the factor p from the trace over conjugates
    auto d3 = determinant(el(2, u(-4) + u(-3) + u(-2, 5)));
    CHECK(d3.phi() == u(-2, 2) + u(-1, 10));
    CHECK(d3.reg() == jordan({{FieldElement(-1), 1}}));

    CHECK(determinant_residue(el(2, u(-1), jordan({{FieldElement::zeta(3), 1}}))) == make_rational(1, 3) + make_rational(1, 2));
    CHECK_FALSE(determinant_residue(el(1, u(-1), jordan({{FieldElement(2), 1}}))).has_value());
}

TEST_CASE("property: tensor, hom, dual, determinant") {
    gen::Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        const auto a = random_el(rng);
        const auto b = random_el(rng);
        const auto raw = tensor_summands(a, b);
        CHECK(raw.rank() == a.invariants().rank * b.invariants().rank);
        for (const auto& s : raw.summands) {
            CHECK(bounded_by(s, a, b));
        }
        CHECK(is_isomorphic(hom(a, b), tensor(dual(a), b)));
        CHECK(is_isomorphic(dual(dual(a)), a));
        CHECK(dual(a).invariants().irregularity == a.invariants().irregularity);

        const auto det = determinant(a);
        CHECK(det.invariants().rank == 1);
        const long pr = (a.p() - 1) * a.r();
        CHECK(det.reg().blocks().front().eigenvalue ==
              a.reg().determinant() * FieldElement(pr % 2 == 0 ? 1 : -1));
        if (a.q() < a.p()) {
            CHECK(det.is_regular());
        }
    }
}
