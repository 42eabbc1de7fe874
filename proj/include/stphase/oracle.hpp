#pragma once

#include "stphase/field.hpp"
#include "stphase/series.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stphase {

// Localized Weyl algebra element sum c x^m d^n, kept in normal order (x powers left of d powers).
class WeylOperator {
public:
    using Key = std::pair<long, long>; // (m, n)

    explicit WeylOperator(std::string var = "t") : var_(std::move(var)) {}

    static WeylOperator monomial(const FieldElement& c, long m, long n, std::string var = "t");
    static WeylOperator constant(const FieldElement& c, std::string var = "t") { return monomial(c, 0, 0, std::move(var)); }
    static WeylOperator x(long m = 1, std::string var = "t") { return monomial(FieldElement(1), m, 0, std::move(var)); }
    static WeylOperator d(long n = 1, std::string var = "t") { return monomial(FieldElement(1), 0, n, std::move(var)); }
    // x d
    static WeylOperator euler(std::string var = "t") { return monomial(FieldElement(1), 1, 1, std::move(var)); }

    const std::string& var() const { return var_; }
    const std::map<Key, FieldElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    FieldElement coeff(long m, long n) const;
    long order() const;

    WeylOperator operator+(const WeylOperator& o) const;
    WeylOperator operator-(const WeylOperator& o) const;
    WeylOperator operator-() const { return scaled(FieldElement(-1)); }
    WeylOperator operator*(const WeylOperator& o) const;
    WeylOperator scaled(const FieldElement& c) const;
    WeylOperator pow(long e) const;
    // Left multiplication by x^k.
    WeylOperator shifted(long k) const;

    bool operator==(const WeylOperator& o) const { return terms_ == o.terms_; }
    // o = c * this for some nonzero c; returns c.
    std::optional<FieldElement> proportional(const WeylOperator& o) const;

    std::string to_string() const;

private:
    std::string var_;
    std::map<Key, FieldElement> terms_;

    void add_term(long m, long n, const FieldElement& c);
};

WeylOperator weyl_mul(const WeylOperator& a, const WeylOperator& b);

struct LaplaceResult {
    // op = x^shift * (substituted operator); shift >= 0 clears negative powers.
    WeylOperator op;
    long shift = 0;
};

// t -> theta^2 d_theta, d_t -> theta^{-1} (kernel e^{-t/theta}).
LaplaceResult laplace_substitute(const WeylOperator& a, const std::string& var = "theta");

enum class Point { zero, infinity };

struct NewtonSlope {
    Rational slope;
    long length = 0;
};

// Convex hull of the points (n, m - n) (at 0) or (n, n - m) (at infinity) of the monomials x^m d^n, each
// extended by the quadrant {x <= 0, y >= 0}. Slopes of the lower boundary, with horizontal lengths; a
// horizontal part is reported as slope 0.
std::vector<NewtonSlope> newton_polygon_slopes(const WeylOperator& a, Point at = Point::zero);

// x = c y^k: x^j -> c^j y^{kj}, x d_x -> (1/k) y d_y.
WeylOperator ramify_operator(const WeylOperator& a, const FieldElement& c, long k, const std::string& var = "eta");

// Conjugation by E^{-phi}: d -> d + phi'.
WeylOperator twist_operator(const WeylOperator& a, const LaurentSeries& phi);

struct RegularResidue {
    FieldElement residue;            // root of the indicial polynomial
    FieldElement leading;            // coefficient of x d in the regular part
    std::optional<FieldElement> monodromy; // exp(2 pi i residue) when the residue is rational
    WeylOperator regular_part;
};

// Divide on the left by x^shift, keep the weight-zero part (m = n), read it as a degree-one
// indicial polynomial. DomainError when the division or the reading is impossible.
RegularResidue regular_residue(const WeylOperator& a, long shift);

struct OracleStage {
    std::string name;
    std::string expected;
    std::string actual;
    bool ok = false;
};

struct OracleReport {
    FieldElement a;
    long q = 0;
    std::vector<OracleStage> stages;

    bool passed() const;
    std::string to_string() const;
};

// Operator-level computation of the Laplace transform of E^{a/t^q}, compared stage by stage with
// fourier_0_inf(El(u, a u^-q, triv), minus).
OracleReport oracle_check(const FieldElement& a, long q);

} // namespace stphase
