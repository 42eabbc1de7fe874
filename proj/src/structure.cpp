#include "stphase/structure.hpp"

#include "stphase/errors.hpp"

#include <numeric>

namespace stphase {

ElementaryConnection dual(const ElementaryConnection& el) {
    return ElementaryConnection(el.rho(), -el.phi(), el.reg().dual());
}

FormalConnection dual(const FormalConnection& m) {
    FormalConnection out;
    for (const auto& s : m.summands) {
        out.summands.push_back(dual(s));
    }
    return out;
}

namespace {

struct TensorSetting {
    long d, p1p, p2p, big_p;
};

TensorSetting setting(long p1, long p2) {
    const long d = std::gcd(p1, p2);
    return {d, p1 / d, p2 / d, p1 * p2 / d};
}

FormalConnection combine(const ElementaryConnection& a, const ElementaryConnection& b, bool hom_sign,
                         const Settings& s, Provenance* log) {
    const ElementaryConnection na = normalize_ramification(a, s, log);
    const ElementaryConnection nb = normalize_ramification(b, s, log);
    const auto [d, p1p, p2p, big_p] = setting(na.p(), nb.p());
    const LaurentSeries phi1 = na.phi().substitute_power(p2p);
    const LaurentSeries phi2 = nb.phi().substitute_power(p1p);
    const RegularPart r1 = (hom_sign ? na.reg().dual() : na.reg()).pullback(p2p);
    const RegularPart reg = jordan_tensor(r1, nb.reg().pullback(p1p));
    FormalConnection out;
    for (long k = 0; k < d; ++k) {
        const FieldElement zeta = FieldElement::zeta(big_p, k);
        const LaurentSeries phi = hom_sign ? phi2 - rotate(phi1, zeta) : phi1 + rotate(phi2, zeta);
        out.summands.emplace_back(RamificationMap::power(big_p), phi, reg);
    }
    return out;
}

} // namespace

FormalConnection tensor_summands(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s,
                                 Provenance* log) {
    return combine(a, b, false, s, log);
}

FormalConnection tensor(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s,
                        Provenance* log) {
    return canonicalize(tensor_summands(a, b, s, log), s, log);
}

FormalConnection hom_summands(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s,
                              Provenance* log) {
    return combine(a, b, true, s, log);
}

FormalConnection hom(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s,
                     Provenance* log) {
    return canonicalize(hom_summands(a, b, s, log), s, log);
}

FormalConnection tensor(const FormalConnection& a, const FormalConnection& b, const Settings& s) {
    FormalConnection out;
    for (const auto& x : a.summands) {
        for (const auto& y : b.summands) {
            out = out + tensor_summands(x, y, s);
        }
    }
    return canonicalize(out, s);
}

FormalConnection hom(const FormalConnection& a, const FormalConnection& b, const Settings& s) {
    FormalConnection out;
    for (const auto& x : a.summands) {
        for (const auto& y : b.summands) {
            out = out + hom_summands(x, y, s);
        }
    }
    return canonicalize(out, s);
}

std::vector<RegularPart> end_regular_part(const FormalConnection& m, const Settings& s) {
    std::vector<RegularPart> out;
    for (const auto& el : canonicalize(m, s).summands) {
        out.push_back(pushforward_monodromy(jordan_tensor(el.reg().dual(), el.reg()), el.p()));
    }
    return out;
}

ElementaryConnection determinant(const ElementaryConnection& el, const Settings& s) {
    const ElementaryConnection n = normalize_ramification(el, s);
    const long p = n.p();
    const long r = n.r();
    std::map<long, FieldElement> trace;
    for (const auto& [k, c] : n.phi().terms()) {
        if (k % p == 0) {
            trace.emplace(k / p, c * FieldElement(p * r));
        }
    }
    const FieldElement sign((p - 1) * r % 2 == 0 ? 1 : -1);
    return ElementaryConnection(RamificationMap(), LaurentSeries(std::move(trace)),
                                RegularPart({{n.reg().determinant() * sign, 1}}));
}

ElementaryConnection determinant(const FormalConnection& m, const Settings& s) {
    LaurentSeries phi;
    FieldElement eig(1);
    for (const auto& el : m.summands) {
        const ElementaryConnection d = determinant(el, s);
        phi = phi + d.phi();
        eig *= d.reg().blocks().front().eigenvalue;
    }
    return ElementaryConnection(RamificationMap(), phi, RegularPart({{eig, 1}}));
}

std::optional<Rational> determinant_residue(const ElementaryConnection& el, const Settings& s) {
    const ElementaryConnection n = normalize_ramification(el, s);
    Rational total = make_rational((n.p() - 1) * n.r(), 2);
    for (const auto& b : n.reg().blocks()) {
        auto ru = b.eigenvalue.root_of_unity();
        if (!ru) {
            return std::nullopt;
        }
        total += make_rational(ru->second * b.size, ru->first);
    }
    return total;
}

} // namespace stphase
