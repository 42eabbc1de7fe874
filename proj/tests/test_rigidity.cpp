#include "doctest.h"
#include "brute.hpp"
#include "gen.hpp"

#include "stphase/errors.hpp"
#include "stphase/rigidity.hpp"

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

SingularityDatum regular_point(const FieldElement& at, RegularPart psi) {
    SingularityDatum d;
    d.location = at;
    d.regular = RegularGermData{std::move(psi)};
    return d;
}

SingularityDatum infinity_regular(RegularPart r) {
    SingularityDatum d;
    d.slope_below = {ElementaryConnection::regular(std::move(r))};
    return d;
}

long brute_centralizer(const std::vector<std::pair<long, long>>& blocks) {
    std::vector<std::pair<Rational, long>> b;
    for (auto [e, s] : blocks) {
        b.push_back({Rational(e), s});
    }
    return brute::centralizer(brute::jordan_matrix(b));
}

} // namespace

TEST_CASE("dim_centralizer and dim_fixed") {
    CHECK(dim_centralizer(jordan({{FieldElement(1), 2}})) == 2);
    CHECK(dim_centralizer(jordan({{FieldElement(1), 2}, {FieldElement(1), 1}})) == 5);
    CHECK(dim_centralizer(jordan({{FieldElement(1), 1}, {FieldElement(2), 1}})) == 2);
    CHECK(dim_fixed(jordan({{FieldElement(1), 3}})) == 1);
    CHECK(dim_fixed(jordan({{FieldElement::zeta(3), 2}})) == 0);
    CHECK(dim_fixed(jordan({{FieldElement(1), 1}, {FieldElement(1), 2}, {FieldElement(2), 1}})) == 2);

    const std::vector<std::vector<std::pair<long, long>>> cases = {
        {{1, 2}, {1, 1}}, {{1, 3}, {1, 3}}, {{2, 2}, {1, 2}, {2, 1}}, {{1, 1}, {1, 1}, {1, 1}}, {{3, 4}}, {{1, 2}, {2, 3}}};
    for (const auto& c : cases) {
        std::vector<JordanBlock> blocks;
        for (auto [e, s] : c) {
            blocks.push_back({FieldElement(e), s});
        }
        CHECK(dim_centralizer(RegularPart(blocks)) == brute_centralizer(c));
    }
}

TEST_CASE("property: centralizer dimension is at least the rank") {
    gen::Rng rng(41);
    for (int t = 0; t < 100; ++t) {
        std::vector<JordanBlock> blocks;
        const long n = rng.integer(1, 4);
        for (long i = 0; i < n; ++i) {
            blocks.push_back({FieldElement(rng.integer(1, 3)), rng.integer(1, 3)});
        }
        const RegularPart j(blocks);
        CHECK(dim_centralizer(j) >= j.rank());
        // equality iff T is cyclic: one block per eigenvalue, of any size
        std::map<std::string, long> count;
        for (const auto& b : j.blocks()) {
            ++count[b.eigenvalue.to_string()];
        }
        bool cyclic = true;
        for (const auto& [e, c] : count) {
            cyclic = cyclic && c == 1;
        }
        CHECK((dim_centralizer(j) == j.rank()) == cyclic);
        const long p = rng.integer(1, 4);
        CHECK(pushforward_monodromy(j, p).rank() == p * j.rank());
    }
}

TEST_CASE("pushforward_monodromy") {
    CHECK(pushforward_monodromy(RegularPart::trivial(), 2) == jordan({{FieldElement(1), 1}, {FieldElement(-1), 1}}));
    const auto lam = jordan({{FieldElement::zeta(7, 2), 1}});
    CHECK(pushforward_monodromy(lam, 1) == lam);
    const auto p3 = pushforward_monodromy(jordan({{FieldElement(8), 2}}), 3);
    CHECK(p3 == jordan({{FieldElement(2), 2}, {FieldElement(2) * FieldElement::zeta(3), 2},
                        {FieldElement(2) * FieldElement::zeta(3, 2), 2}}));
}

TEST_CASE("zmin_defect, exhaustive over small psi data") {
    CHECK(zmin_defect({jordan({{FieldElement(1), 2}})}) == 1);
    CHECK(zmin_defect({RegularPart::trivial(2)}) == 4);
    CHECK(zmin_defect({jordan({{FieldElement::zeta(5), 3}})}) == 0);

    const FieldElement eig[] = {FieldElement(1), FieldElement(-1), FieldElement::zeta(3)};
    // all multisets of at most 4 blocks drawn from 3 eigenvalues x 4 sizes
    long checked = 0;
    std::vector<int> idx;
    auto rec = [&](auto&& self, int start) -> void {
        if (!idx.empty()) {
            std::vector<JordanBlock> blocks;
            for (int i : idx) {
                blocks.push_back({eig[i / 4], i % 4 + 1});
            }
            const RegularGermData g{RegularPart(blocks)};
            CHECK(zmin_defect(g) == g.kappa() * g.kappa());
            CHECK(g.phi().rank() == g.psi.rank() - g.kappa());
            ++checked;
        }
        if (idx.size() == 4) {
            return;
        }
        for (int i = start; i < 12; ++i) {
            idx.push_back(i);
            self(self, i);
            idx.pop_back();
        }
    };
    rec(rec, 0);
    CHECK(checked == 12 + 78 + 364 + 1365);
}

TEST_CASE("rigidity_index: rank one on P1") {
    for (long n = 2; n <= 4; ++n) {
        std::vector<SingularityDatum> data;
        for (long k = 0; k + 1 < n; ++k) {
            data.push_back(regular_point(FieldElement(k), jordan({{FieldElement::zeta(n + 1, k + 1), 1}})));
        }
        data.push_back(infinity_regular(jordan({{FieldElement(3), 1}})));
        CHECK(rigidity_index(data).index == 2);
        CHECK(rigidity_index(data, 0, IndexFormula::corrected).index == 2);
    }
    // irregular rank-one local data
    SingularityDatum zero;
    zero.location = FieldElement();
    zero.summands = {el(1, u(-2), jordan({{FieldElement::zeta(4), 1}}))};
    SingularityDatum inf;
    inf.slope_above = {el(1, u(-3))};
    CHECK(rigidity_index({zero, inf}).index == 2);
}

TEST_CASE("rigidity_index: regular rank two at three points") {
    const auto gen2 = [](long a, long b) {
        return jordan({{FieldElement::zeta(7, a), 1}, {FieldElement::zeta(7, b), 1}});
    };
    std::vector<SingularityDatum> data = {regular_point(FieldElement(0), gen2(1, 2)),
                                          regular_point(FieldElement(1), gen2(3, 4)), infinity_regular(gen2(5, 6))};
    const auto rep = rigidity_index(data);
    CHECK(rep.index == 2);
    CHECK(rep.euler_characteristic == -1);
    CHECK(rep.points.size() == 3);
    CHECK(rep.points[0].centralizer_term == 2);
}

TEST_CASE("rigidity_index: ramified data, as printed vs corrected") {
    // y'' = t y at infinity: El(u^2, (2/3) u^-3, [(-1:1)]), the only singular point
    SingularityDatum airy;
    airy.slope_above = {el(2, u(-3, make_rational(2, 3)), jordan({{FieldElement(-1), 1}}))};
    const auto printed = rigidity_index({airy});
    CHECK(printed.points[0].irregularity_end == 3);
    CHECK(printed.index == 9);
    CHECK(rigidity_index({airy}, 0, IndexFormula::corrected).index == 2);

    // its transform is rank one with a single slope-3 point: rigid as well
    SingularityDatum hat;
    hat.slope_above = {fourier_inf_inf(airy.slope_above[0], Sign::minus)};
    CHECK(hat.slope_above[0].invariants().rank == 1);
    CHECK(rigidity_index({hat}, 0, IndexFormula::corrected).index == 2);
    CHECK(rigidity_index({hat}).index == 2);

    SingularityDatum bad;
    bad.slope_above = {el(2, u(-4))};
    CHECK_THROWS_AS(rigidity_index({bad}), DomainError);
    CHECK_THROWS_AS(rigidity_index({regular_point(FieldElement(0), RegularPart::trivial(2)), infinity_regular(RegularPart::trivial())}),
                    DomainError);
}

TEST_CASE("z_zhat_discrepancy on transform-consistent data") {
    const Sign sign = Sign::minus;
    const Sign back = Sign::plus;
    for (long q = 1; q <= 4; ++q) {
        // M at finite distance
        SingularityDatum m0 = regular_point(FieldElement(0), jordan({{FieldElement(1), 2}}));
        m0.summands = {el(1, u(-q, make_rational(3, 2)))};
        SingularityDatum m1 = regular_point(FieldElement(1), jordan({{FieldElement(2), 1}, {FieldElement(1), 1}}));
        const ElementaryConnection above = el(1, u(-3), jordan({{FieldElement::zeta(3), 2}}));

        // FM at finite distance
        SingularityDatum h0 = regular_point(FieldElement(0), jordan({{FieldElement(1), 1}, {FieldElement(3), 2}}));
        SingularityDatum h2;
        h2.location = FieldElement(2);
        h2.summands = {el(2, u(-1))};

        SingularityDatum m_inf = split_by_slope(stationary_phase_at_infinity({h0, h2}, back));
        m_inf.slope_above = {above};
        SingularityDatum src_inf;
        src_inf.slope_above = {above};
        SingularityDatum h_inf = split_by_slope(stationary_phase_at_infinity({m0, m1, src_inf}, sign));

        const std::vector<SingularityDatum> data{m0, m1, m_inf};
        const std::vector<SingularityDatum> data_hat{h0, h2, h_inf};
        const Discrepancy d = z_zhat_discrepancy(data, data_hat, sign);
        CHECK(d.value() == 0);
        CHECK(d.z != d.z_hat);

        SingularityDatum wrong = h_inf;
        wrong.slope_above.clear();
        CHECK_THROWS_AS(z_zhat_discrepancy(data, {h0, h2, wrong}, sign), DomainError);
    }

    // purely regular: Z - Z_hat reduces to sum kappa^2 - sum kappa_hat^2
    SingularityDatum m0 = regular_point(FieldElement(0), RegularPart::trivial(2));
    SingularityDatum h1 = regular_point(FieldElement(1), jordan({{FieldElement(1), 3}}));
    SingularityDatum m_inf = split_by_slope(stationary_phase_at_infinity({h1}, back));
    SingularityDatum h_inf = split_by_slope(stationary_phase_at_infinity({m0}, sign));
    const Discrepancy d = z_zhat_discrepancy({m0, m_inf}, {h1, h_inf}, sign);
    CHECK(d.value() == 0);
    CHECK(d.rhs == 4 - 1);
}
