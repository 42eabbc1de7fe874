#pragma once

#include "stphase/cyclotomic.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace stphase {

using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Positive real radical prod p^e_p with every e_p in (0, 1/2), sorted by prime.
// Half-integral exponents are folded into the cyclotomic part (sqrt(p) is a Gauss sum),
// which makes distinct keys linearly independent over Q(zeta_infinity).
using Radical = std::vector<std::pair<long, Rational>>;

// Decomposition of a nonzero "monomial" element as zeta_M^k * prod p^e_p (e_p rational, p prime)
// with k/M in lowest terms and the radical part real positive.
struct Monomial {
    long root_order = 1;
    long root_exp = 0;
    std::map<long, Rational> exponents;
    int sign = 1; // kept for convenience: +1 unless the root of unity is -1
};

class FieldElement {
public:
    FieldElement();
    FieldElement(long v); // NOLINT(google-explicit-constructor)
    FieldElement(const Rational& v); // NOLINT(google-explicit-constructor)

    static FieldElement zeta(long n, long k = 1);
    static FieldElement imaginary_unit() { return zeta(4); }
    // prod p^e over the given prime exponents, real positive.
    static FieldElement radical(const std::map<long, Rational>& exponents);
    // Canonical m-th root of a monomial element. Throws RootAdjunctionError otherwise.
    static FieldElement root(const FieldElement& gamma, long m);

    FieldElement operator-() const;
    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
    FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

    FieldElement pow(long e) const;
    FieldElement inverse() const;

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_rational() const;
    Rational to_rational() const; // precondition: is_rational()
    bool is_integer() const;
    std::optional<Monomial> as_monomial() const;
    // Root of unity exponent k/M (lowest terms) when the element is a root of unity.
    std::optional<std::pair<long, long>> root_of_unity() const;

    // Ambient cyclotomic order (not necessarily minimal).
    long order() const { return n_; }
    FieldElement lifted(long n) const; // precondition: order() divides n
    // Same value, every term expressed over its own conductor; ambient order = lcm of those.
    FieldElement canonical() const;
    // Total order on values (compares canonical forms).
    int compare(const FieldElement& o) const;

    bool operator==(const FieldElement& o) const { return (*this - o).is_zero(); }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    bool operator<(const FieldElement& o) const { return compare(o) < 0; }

    std::complex<double> to_complex() const;
    std::string to_string() const;

    const std::map<Radical, cyclo::Vec>& terms() const { return terms_; }

private:
    long n_ = 1;
    std::map<Radical, cyclo::Vec> terms_;

    void add_term(const Radical& key, const cyclo::Vec& v);
    static FieldElement from_terms(long n, std::map<Radical, cyclo::Vec> terms);
};

std::tuple<FieldElement, FieldElement, long> lift_to_common_field(const FieldElement& x, const FieldElement& y);

std::string rational_string(const Rational& r);

} // namespace stphase
