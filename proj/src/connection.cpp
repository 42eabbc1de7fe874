#include "stphase/connection.hpp"

#include "stphase/errors.hpp"

#include <algorithm>
#include <numeric>

namespace stphase {

long Settings::window(long p, long q) const {
    return precision.value_or(std::max(2 * (p + q) + 8, kDefaultWindow));
}

// ---------------------------------------------------------------- ramification

RamificationMap::RamificationMap(LaurentSeries num, LaurentSeries den) {
    if (!den.exact() || den.terms().empty()) {
        throw DomainError("ramification denominator must be a nonzero Laurent polynomial");
    }
    num = num.renamed("u");
    den = den.renamed("u");
    const long v = *den.valuation();
    const FieldElement c_inv = den.leading().inverse();
    num = num.shifted(-v).scaled(c_inv);
    den = den.shifted(-v).scaled(c_inv);
    if (!den.is_monomial() && num.exact()) {
        LaurentSeries q = divide(num, den);
        if (q.exact()) {
            num = q;
            den = LaurentSeries::constant(FieldElement(1));
        }
    }
    const auto val = num.valuation();
    if (!val) {
        throw DomainError("ramification must be nonzero");
    }
    if (*val < 1) {
        throw DomainError("ramification must have valuation >= 1, got " + std::to_string(*val));
    }
    num_ = std::move(num);
    den_ = std::move(den);
    degree_ = *val;
}

FieldElement RamificationMap::leading() const {
    return num_.leading();
}

bool RamificationMap::is_standard() const {
    return !is_ratio() && num_.is_monomial() && num_.leading().is_one();
}

LaurentSeries RamificationMap::expand(long extra) const {
    if (!is_ratio()) {
        return num_;
    }
    return divide(num_, den_, extra);
}

std::string RamificationMap::to_string() const {
    if (!is_ratio()) {
        return num_.to_string("u");
    }
    return "(" + num_.to_string("u") + ")/(" + den_.to_string("u") + ")";
}

// ---------------------------------------------------------------- elementary

ElementaryConnection::ElementaryConnection(RamificationMap rho, const LaurentSeries& phi, RegularPart reg)
    : rho_(std::move(rho)), phi_(phi.principal_part().renamed("u")), reg_(std::move(reg)) {
    if (reg_.empty()) {
        throw DomainError("an elementary connection needs a nonzero regular part");
    }
}

long ElementaryConnection::q() const {
    return phi_.terms().empty() ? 0 : -*phi_.valuation();
}

Invariants ElementaryConnection::invariants() const {
    Invariants out;
    out.slope = make_rational(q(), p());
    out.irregularity = q() * r();
    out.rank = p() * r();
    return out;
}

std::string ElementaryConnection::to_string() const {
    if (rho_.is_standard() && p() == 1 && is_regular()) {
        return "Reg(R=" + reg_.to_string() + ")";
    }
    return "El(rho=" + rho_.to_string() + ", phi=" + phi_.to_string("u") + ", R=" + reg_.to_string() + ")";
}

long FormalConnection::rank() const {
    long r = 0;
    for (const auto& s : summands) {
        r += s.invariants().rank;
    }
    return r;
}

long FormalConnection::irregularity() const {
    long r = 0;
    for (const auto& s : summands) {
        r += s.invariants().irregularity;
    }
    return r;
}

FormalConnection FormalConnection::operator+(const FormalConnection& o) const {
    FormalConnection out = *this;
    out.summands.insert(out.summands.end(), o.summands.begin(), o.summands.end());
    return out;
}

std::string FormalConnection::to_string() const {
    if (summands.empty()) {
        return "Reg(R=[])";
    }
    std::string out;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        out += (i ? " (+) " : "") + summands[i].to_string();
    }
    return out;
}

Invariants invariants(const ElementaryConnection& el) {
    return el.invariants();
}

// ---------------------------------------------------------------- normalization

ElementaryConnection normalize_ramification(const ElementaryConnection& el, const Settings&, Provenance* log) {
    if (el.rho().is_standard()) {
        return el;
    }
    const long p = el.p();
    const long q = el.q();
    if (q == 0) {
        if (log) {
            log->push_back("normalize: rho=" + el.rho().to_string() + " -> u^" + std::to_string(p) + " (phi = 0)");
        }
        return ElementaryConnection(RamificationMap::power(p), LaurentSeries(), el.reg());
    }
    const long extra = q + 2;
    const LaurentSeries rho = el.rho().expand(extra);
    const FieldElement c = rho.leading();
    // rho = c u^p g(u)^p with g(0) = 1; lambda(v) = mu(v / beta) where mu reverts u g(u), beta^p = c.
    const LaurentSeries unit = rho.scaled(c.inverse());
    const LaurentSeries root = unit.nth_root(p, extra);
    const LaurentSeries mu = root.reversion(extra);
    const FieldElement beta = FieldElement::root(c, p);
    const LaurentSeries psi = compose(el.phi(), mu, extra).principal_part();
    const LaurentSeries phi = psi.dilated(beta.inverse());
    if (log) {
        log->push_back("normalize: rho=" + el.rho().to_string() + " -> u^" + std::to_string(p) +
                       " via lambda(v) = mu(v/beta), beta = " + beta.to_string());
    }
    return ElementaryConnection(RamificationMap::power(p), phi, el.reg());
}

ElementaryConnection reduce_minimal(const ElementaryConnection& el, Provenance* log) {
    if (!el.rho().is_standard()) {
        throw DomainError("reduce_minimal needs a normalized ramification u^p");
    }
    const long p = el.p();
    long d = p;
    for (const auto& [k, c] : el.phi().terms()) {
        d = std::gcd(d, std::abs(k));
    }
    if (d == 1) {
        return el;
    }
    std::map<long, FieldElement> terms;
    for (const auto& [k, c] : el.phi().terms()) {
        terms.emplace(k / d, c);
    }
    if (log) {
        log->push_back("reduce: u^" + std::to_string(p) + " -> u^" + std::to_string(p / d) + " (d = " +
                       std::to_string(d) + ")");
    }
    return ElementaryConnection(RamificationMap::power(p / d), LaurentSeries(std::move(terms)),
                                pushforward_monodromy(el.reg(), d));
}

ElementaryConnection minimal_form(const ElementaryConnection& el, const Settings& s, Provenance* log) {
    return reduce_minimal(normalize_ramification(el, s, log), log);
}

LaurentSeries rotate(const LaurentSeries& phi, const FieldElement& zeta) {
    return phi.dilated(zeta);
}

FormalConnection pullback_decompose(const ElementaryConnection& el, long d) {
    if (!el.rho().is_standard()) {
        throw DomainError("pullback_decompose needs a normalized ramification u^p");
    }
    const long p = el.p();
    if (d < 1 || p % d != 0) {
        throw DomainError("pull-back degree " + std::to_string(d) + " does not divide " + std::to_string(p));
    }
    FormalConnection out;
    for (long k = 0; k < d; ++k) {
        out.summands.emplace_back(RamificationMap::power(p / d), rotate(el.phi(), FieldElement::zeta(p, k)), el.reg());
    }
    return out;
}

// ---------------------------------------------------------------- isomorphism

int compare_series(const LaurentSeries& a, const LaurentSeries& b) {
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() || ib != b.terms().end()) {
        if (ib == b.terms().end() || (ia != a.terms().end() && ia->first < ib->first)) {
            return FieldElement().compare(ia->second) * -1;
        }
        if (ia == a.terms().end() || ib->first < ia->first) {
            return FieldElement().compare(ib->second);
        }
        const int c = ia->second.compare(ib->second);
        if (c != 0) {
            return c;
        }
        ++ia;
        ++ib;
    }
    return 0;
}

IsoWitness is_isomorphic_elementary(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s) {
    const ElementaryConnection ma = minimal_form(a, s);
    const ElementaryConnection mb = minimal_form(b, s);
    if (ma.p() != mb.p() || ma.q() != mb.q() || ma.reg() != mb.reg()) {
        return {};
    }
    const long p = ma.p();
    for (long k = 0; k < p; ++k) {
        const FieldElement zeta = FieldElement::zeta(p, k);
        if (rotate(mb.phi(), zeta) == ma.phi()) {
            return {true, zeta};
        }
    }
    return {};
}

namespace {

LaurentSeries representative(const LaurentSeries& phi, long p) {
    LaurentSeries best = phi;
    for (long k = 1; k < p; ++k) {
        LaurentSeries cand = rotate(phi, FieldElement::zeta(p, k));
        if (compare_series(cand, best) < 0) {
            best = std::move(cand);
        }
    }
    return best;
}

} // namespace

FormalConnection canonicalize(const FormalConnection& m, const Settings& s, Provenance* log) {
    struct Group {
        long p;
        LaurentSeries phi;
        RegularPart reg;
    };
    std::vector<Group> groups;
    for (const auto& el : m.summands) {
        const ElementaryConnection mf = minimal_form(el, s, log);
        const LaurentSeries rep = representative(mf.phi(), mf.p());
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Group& g) { return g.p == mf.p() && g.phi == rep; });
        if (it == groups.end()) {
            groups.push_back({mf.p(), rep, mf.reg()});
        } else {
            it->reg = it->reg + mf.reg();
        }
    }
    std::sort(groups.begin(), groups.end(), [](const Group& x, const Group& y) {
        if (x.p != y.p) {
            return x.p < y.p;
        }
        const long qx = x.phi.terms().empty() ? 0 : -*x.phi.valuation();
        const long qy = y.phi.terms().empty() ? 0 : -*y.phi.valuation();
        if (qx != qy) {
            return qx < qy;
        }
        return compare_series(x.phi, y.phi) < 0;
    });
    FormalConnection out;
    for (auto& g : groups) {
        out.summands.emplace_back(RamificationMap::power(g.p), g.phi, std::move(g.reg));
    }
    return out;
}

bool is_isomorphic(const FormalConnection& a, const FormalConnection& b, const Settings& s) {
    return canonicalize(a, s) == canonicalize(b, s);
}

} // namespace stphase
