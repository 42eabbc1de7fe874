#pragma once

#include "stphase/regular.hpp"
#include "stphase/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stphase {

struct Settings {
    // Known terms past the valuation for genuinely infinite series; unset = max(2(p+q)+8, 16).
    std::optional<long> precision;

    long window(long p, long q) const;
};

// Ramification u -> rho(u) = num(u) / den(u). The denominator is an exact Laurent polynomial with
// valuation 0 and constant term 1, or exactly 1.
class RamificationMap {
public:
    RamificationMap() : RamificationMap(LaurentSeries::variable()) {}
    explicit RamificationMap(LaurentSeries num, LaurentSeries den = LaurentSeries::constant(FieldElement(1)));

    static RamificationMap power(long p) { return RamificationMap(LaurentSeries::monomial(FieldElement(1), p)); }

    const LaurentSeries& numerator() const { return num_; }
    const LaurentSeries& denominator() const { return den_; }
    bool is_ratio() const { return !(den_.is_monomial() && den_.terms().begin()->first == 0); }
    long degree() const { return degree_; }
    FieldElement leading() const;
    // rho = u^p exactly.
    bool is_standard() const;
    // Expansion known up to (excluding) u^{p + extra}.
    LaurentSeries expand(long extra) const;

    RamificationMap operator-() const { return RamificationMap(-num_, den_); }
    bool operator==(const RamificationMap& o) const { return num_ == o.num_ && den_ == o.den_; }

    std::string to_string() const;

private:
    LaurentSeries num_;
    LaurentSeries den_;
    long degree_ = 1;
};

struct Invariants {
    Rational slope;
    long irregularity = 0;
    long rank = 0;
};

// El(rho, phi, R); phi is stored as its principal part.
class ElementaryConnection {
public:
    ElementaryConnection(RamificationMap rho, const LaurentSeries& phi, RegularPart reg);

    static ElementaryConnection regular(RegularPart reg) {
        return ElementaryConnection(RamificationMap(), LaurentSeries(), std::move(reg));
    }

    const RamificationMap& rho() const { return rho_; }
    const LaurentSeries& phi() const { return phi_; }
    const RegularPart& reg() const { return reg_; }

    long p() const { return rho_.degree(); }
    long q() const;
    long r() const { return reg_.rank(); }
    Invariants invariants() const;
    bool is_regular() const { return phi_.terms().empty(); }

    bool operator==(const ElementaryConnection& o) const {
        return rho_ == o.rho_ && phi_ == o.phi_ && reg_ == o.reg_;
    }

    std::string to_string() const;

private:
    RamificationMap rho_;
    LaurentSeries phi_;
    RegularPart reg_;
};

struct FormalConnection {
    std::vector<ElementaryConnection> summands;

    FormalConnection() = default;
    explicit FormalConnection(std::vector<ElementaryConnection> s) : summands(std::move(s)) {}
    FormalConnection(const ElementaryConnection& el) : summands{el} {} // NOLINT(google-explicit-constructor)

    long rank() const;
    long irregularity() const;
    FormalConnection operator+(const FormalConnection& o) const;
    bool operator==(const FormalConnection& o) const { return summands == o.summands; }
    std::string to_string() const;
};

// Reparametrization records for callers that want to echo them.
using Provenance = std::vector<std::string>;

Invariants invariants(const ElementaryConnection& el);

ElementaryConnection normalize_ramification(const ElementaryConnection& el, const Settings& s = {},
                                            Provenance* log = nullptr);
ElementaryConnection reduce_minimal(const ElementaryConnection& el, Provenance* log = nullptr);
// normalize_ramification followed by reduce_minimal.
ElementaryConnection minimal_form(const ElementaryConnection& el, const Settings& s = {}, Provenance* log = nullptr);

FormalConnection pullback_decompose(const ElementaryConnection& el, long d);

// phi(zeta * u).
LaurentSeries rotate(const LaurentSeries& phi, const FieldElement& zeta);

struct IsoWitness {
    bool isomorphic = false;
    std::optional<FieldElement> zeta;
};

IsoWitness is_isomorphic_elementary(const ElementaryConnection& a, const ElementaryConnection& b,
                                    const Settings& s = {});
FormalConnection canonicalize(const FormalConnection& m, const Settings& s = {}, Provenance* log = nullptr);
bool is_isomorphic(const FormalConnection& a, const FormalConnection& b, const Settings& s = {});

// Total order on principal parts used for representatives and printing.
int compare_series(const LaurentSeries& a, const LaurentSeries& b);

} // namespace stphase
