#include "stphase/fourier.hpp"

#include "stphase/errors.hpp"

namespace stphase {

std::string sign_name(Sign s) {
    return s == Sign::plus ? "plus" : "minus";
}

RegularPart RegularGermData::phi() const {
    std::vector<JordanBlock> out;
    for (const auto& b : psi.blocks()) {
        if (!b.eigenvalue.is_one()) {
            out.push_back(b);
        } else if (b.size > 1) {
            out.push_back({b.eigenvalue, b.size - 1});
        }
    }
    return RegularPart(std::move(out));
}

long RegularGermData::kappa() const {
    return dim_fixed(psi);
}

namespace {

// rho = num/den and the numerator of rho' = (num' den - num den') / den^2.
struct Ratio {
    LaurentSeries num, den, dnum;
};

Ratio split(const RamificationMap& rho) {
    const LaurentSeries& n = rho.numerator();
    const LaurentSeries& d = rho.denominator();
    return {n, d, n.derivative() * d - n * d.derivative()};
}

FieldElement sign_unit(bool positive) {
    return FieldElement(positive ? 1 : -1);
}

RegularPart twist_l(const RegularPart& r, long q) {
    return q % 2 == 0 ? r : r.twisted(FieldElement(-1));
}

// rho/rho' * phi', principal part.
LaurentSeries correction(const Ratio& r, const LaurentSeries& phi, long window) {
    return (divide(r.num * r.den, r.dnum, window) * phi.derivative()).principal_part();
}

void require_irregular(const ElementaryConnection& el, const char* what) {
    if (el.is_regular()) {
        throw DomainError(std::string(what) + " needs an irregular connection (phi has a pole)");
    }
}

} // namespace

ElementaryConnection fourier_0_inf(const ElementaryConnection& el, Sign sign, const Settings& s) {
    require_irregular(el, "fourier 0inf");
    const Ratio r = split(el.rho());
    const long window = s.window(el.p(), el.q());
    // minus: rho' / phi'; plus: -rho' / phi'
    const LaurentSeries num = r.dnum.scaled(sign_unit(sign == Sign::minus));
    const LaurentSeries den = r.den * r.den * el.phi().derivative();
    const LaurentSeries phi = el.phi() - correction(r, el.phi(), window);
    return ElementaryConnection(RamificationMap(num, den), phi, twist_l(el.reg(), el.q()));
}

RegularPart fourier_regular(const RegularGermData& g, bool plain) {
    return plain ? g.psi : g.phi();
}

ElementaryConnection fourier_inf_0(const ElementaryConnection& el, Sign sign, const Settings& s) {
    require_irregular(el, "fourier inf0");
    if (el.q() >= el.p()) {
        throw DomainError("fourier inf0 needs slope < 1, got " + rational_string(el.invariants().slope));
    }
    const Ratio r = split(el.rho());
    const long window = s.window(el.p(), el.q());
    const LaurentSeries num = (r.num * r.num * el.phi().derivative()).scaled(sign_unit(sign == Sign::plus));
    const LaurentSeries phi = el.phi() + correction(r, el.phi(), window);
    return ElementaryConnection(RamificationMap(num, r.dnum), phi, twist_l(el.reg(), el.q()));
}

ElementaryConnection fourier_inf_inf(const ElementaryConnection& el, Sign sign, const Settings& s) {
    if (el.q() <= el.p()) {
        throw DomainError("fourier infinf needs slope > 1, got " + rational_string(el.invariants().slope));
    }
    const Ratio r = split(el.rho());
    const long window = s.window(el.p(), el.q());
    const LaurentSeries num = r.dnum.scaled(sign_unit(sign == Sign::plus));
    const LaurentSeries den = el.phi().derivative() * r.num * r.num;
    const LaurentSeries phi = el.phi() + correction(r, el.phi(), window);
    return ElementaryConnection(RamificationMap(num, den), phi, twist_l(el.reg(), el.q()));
}

ElementaryConnection fourier_s_inf(const ElementaryConnection& el, const FieldElement& point, Sign sign,
                                   const Settings& s) {
    const ElementaryConnection base = fourier_0_inf(el, sign, s);
    if (point.is_zero()) {
        return base;
    }
    const RamificationMap& rho = base.rho();
    const LaurentSeries inv = divide(rho.denominator(), rho.numerator(), s.window(base.p(), base.q()));
    const FieldElement c = sign == Sign::plus ? point : -point;
    return ElementaryConnection(rho, base.phi() + inv.principal_part().scaled(c), base.reg());
}

FormalConnection fourier_s_inf(const RegularGermData& g, const FieldElement& point, Sign sign, bool plain) {
    const RegularPart reg = fourier_regular(g, plain);
    if (reg.empty()) {
        return {};
    }
    const FieldElement c = sign == Sign::plus ? point : -point;
    return FormalConnection(ElementaryConnection(RamificationMap(), LaurentSeries::monomial(c, -1), reg));
}

FormalConnection SingularityDatum::local() const {
    FormalConnection out(summands);
    if (regular && !regular->psi.empty()) {
        out.summands.push_back(ElementaryConnection::regular(regular->psi));
    }
    out.summands.insert(out.summands.end(), slope_above.begin(), slope_above.end());
    for (const auto& [c, el] : slope_one) {
        const ElementaryConnection n = normalize_ramification(el);
        out.summands.emplace_back(n.rho(), n.phi() + LaurentSeries::monomial(c, -n.p()), n.reg());
    }
    out.summands.insert(out.summands.end(), slope_below.begin(), slope_below.end());
    return out;
}

SingularityDatum split_by_slope(const FormalConnection& germ, const Settings& s) {
    SingularityDatum d;
    for (const auto& el : germ.summands) {
        const ElementaryConnection n = normalize_ramification(el, s);
        if (n.q() > n.p()) {
            d.slope_above.push_back(n);
        } else if (n.q() < n.p()) {
            d.slope_below.push_back(n);
        } else {
            const FieldElement c = n.phi().coeff(-n.p());
            const LaurentSeries residual = n.phi() - LaurentSeries::monomial(c, -n.p());
            d.slope_one.emplace_back(c, ElementaryConnection(n.rho(), residual, n.reg()));
        }
    }
    return d;
}

namespace {

void validate_infinity(const SingularityDatum& d) {
    if (!d.summands.empty() || d.regular) {
        throw DomainError("singularity at infinity must be given as a slope split (above / one / below)");
    }
    for (const auto& el : d.slope_above) {
        if (el.q() <= el.p()) {
            throw DomainError("slope > 1 part at infinity contains a summand of slope " +
                              rational_string(el.invariants().slope));
        }
    }
    for (const auto& [c, el] : d.slope_one) {
        if (c.is_zero() || el.q() >= el.p()) {
            throw DomainError("slope one part at infinity needs a nonzero coefficient and a residual of slope < 1");
        }
    }
    for (const auto& el : d.slope_below) {
        if (el.q() >= el.p()) {
            throw DomainError("slope < 1 part at infinity contains a summand of slope " +
                              rational_string(el.invariants().slope));
        }
    }
}

} // namespace

FormalConnection stationary_phase_at_infinity(const std::vector<SingularityDatum>& data, Sign sign,
                                              const Settings& s, bool minimal_extension) {
    FormalConnection out;
    bool seen_infinity = false;
    for (const auto& d : data) {
        if (d.at_infinity()) {
            if (seen_infinity) {
                throw DomainError("more than one datum at infinity");
            }
            seen_infinity = true;
            validate_infinity(d);
            for (const auto& el : d.slope_above) {
                out.summands.push_back(fourier_inf_inf(el, sign, s));
            }
            continue;
        }
        if (d.regular) {
            out = out + fourier_s_inf(*d.regular, *d.location, sign, !minimal_extension);
        }
        for (const auto& el : d.summands) {
            out.summands.push_back(fourier_s_inf(el, *d.location, sign, s));
        }
    }
    return canonicalize(out, s);
}

} // namespace stphase
