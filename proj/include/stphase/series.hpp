#pragma once

#include "stphase/field.hpp"

#include <map>
#include <optional>
#include <string>

namespace stphase {

// Default number of known terms past the valuation when an operation produces an infinite series
// from exact data (quotients, roots, reversions).
inline constexpr long kDefaultWindow = 16;

enum class ZeroStatus { certified_zero, zero_to_precision, nonzero };

// Truncated formal Laurent series. Terms of degree >= precision are unknown; an empty precision
// means the series is an exactly known Laurent polynomial.
class LaurentSeries {
public:
    LaurentSeries() = default;
    explicit LaurentSeries(std::map<long, FieldElement> terms, std::optional<long> precision = std::nullopt,
                           std::string var = "u");

    static LaurentSeries monomial(const FieldElement& c, long k, std::string var = "u");
    static LaurentSeries constant(const FieldElement& c, std::string var = "u") { return monomial(c, 0, std::move(var)); }
    static LaurentSeries variable(std::string var = "u") { return monomial(FieldElement(1), 1, std::move(var)); }

    const std::string& var() const { return var_; }
    LaurentSeries renamed(std::string var) const;

    std::optional<long> precision() const { return precision_; }
    bool exact() const { return !precision_.has_value(); }
    std::optional<long> valuation() const;
    const FieldElement& leading() const; // precondition: nonzero
    FieldElement coeff(long k) const;    // PrecisionError if k is beyond the known terms
    const std::map<long, FieldElement>& terms() const { return terms_; }
    std::optional<long> max_degree() const;
    bool is_monomial() const { return exact() && terms_.size() == 1; }
    ZeroStatus zero_status() const;

    LaurentSeries truncated(long precision) const;
    LaurentSeries principal_part() const;
    LaurentSeries derivative() const;
    LaurentSeries scaled(const FieldElement& c) const;
    LaurentSeries shifted(long k) const; // multiply by u^k
    // f(c*u): coefficient of u^k multiplied by c^k.
    LaurentSeries dilated(const FieldElement& c) const;
    // f(u^k) for k >= 1.
    LaurentSeries substitute_power(long k) const;
    LaurentSeries pow(long e, long window = kDefaultWindow) const;

    // 1/f; exact when f is a monomial, otherwise `window` known terms past the valuation
    // (or the precision implied by f when f is truncated).
    LaurentSeries inverse(long window = kDefaultWindow) const;
    // f^(1/m) with the canonical branch of the leading coefficient.
    LaurentSeries nth_root(long m, long window = kDefaultWindow) const;
    // Compositional inverse of a valuation-1 series.
    LaurentSeries reversion(long window = kDefaultWindow) const;

    LaurentSeries operator-() const;
    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries operator*(const FieldElement& c) const { return scaled(c); }

    // Structural equality: same known terms and same precision (variable name ignored).
    bool operator==(const LaurentSeries& o) const;
    bool operator!=(const LaurentSeries& o) const { return !(*this == o); }
    // Equality of the overlapping known terms.
    bool agrees_with(const LaurentSeries& o) const;

    std::string to_string() const;
    std::string to_string(const std::string& var) const;

private:
    std::map<long, FieldElement> terms_;
    std::optional<long> precision_;
    std::string var_ = "u";

    void drop_unknown();
};

// f / g. Exact when the Laurent polynomial division is exact, otherwise `window` terms past the
// quotient's valuation.
LaurentSeries divide(const LaurentSeries& f, const LaurentSeries& g, long window = kDefaultWindow);

// f(g(u)). Requires valuation(g) >= 1.
LaurentSeries compose(const LaurentSeries& f, const LaurentSeries& g, long window = kDefaultWindow);

std::optional<long> min_precision(std::optional<long> a, std::optional<long> b);

} // namespace stphase
