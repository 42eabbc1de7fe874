#include "stphase/series.hpp"

#include "stphase/errors.hpp"

#include <algorithm>
#include <vector>

namespace stphase {

std::optional<long> min_precision(std::optional<long> a, std::optional<long> b) {
    if (!a) {
        return b;
    }
    if (!b) {
        return a;
    }
    return std::min(*a, *b);
}

namespace {

std::optional<long> add_precision(std::optional<long> a, long shift) {
    if (!a) {
        return std::nullopt;
    }
    return *a + shift;
}

// Coefficients y_0..y_{count-1} of (1 + h)^alpha where h_k = coefficient k of h (h_0 = 0).
std::vector<FieldElement> binomial_series(const std::map<long, FieldElement>& h, const Rational& alpha, long count) {
    std::vector<FieldElement> y(std::max(count, 1L));
    y[0] = FieldElement(1);
    for (long n = 1; n < count; ++n) {
        FieldElement acc;
        for (const auto& [k, hk] : h) {
            if (k > n) {
                break;
            }
            if (y[n - k].is_zero()) {
                continue;
            }
            const Rational factor = alpha * k - (n - k);
            if (sgn(factor) != 0) {
                acc += hk * y[n - k] * FieldElement(factor);
            }
        }
        y[n] = acc * FieldElement(make_rational(1, n));
    }
    return y;
}

// f = c u^v (1 + h): returns h as a map of positive exponents (relative to v).
std::map<long, FieldElement> unit_part(const LaurentSeries& f, long v, const FieldElement& c_inv) {
    std::map<long, FieldElement> h;
    for (const auto& [k, a] : f.terms()) {
        if (k != v) {
            h.emplace(k - v, a * c_inv);
        }
    }
    return h;
}

} // namespace

LaurentSeries::LaurentSeries(std::map<long, FieldElement> terms, std::optional<long> precision, std::string var)
    : terms_(std::move(terms)), precision_(precision), var_(std::move(var)) {
    drop_unknown();
}

void LaurentSeries::drop_unknown() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero() || (precision_ && it->first >= *precision_)) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

LaurentSeries LaurentSeries::monomial(const FieldElement& c, long k, std::string var) {
    return LaurentSeries({{k, c}}, std::nullopt, std::move(var));
}

LaurentSeries LaurentSeries::renamed(std::string var) const {
    LaurentSeries out = *this;
    out.var_ = std::move(var);
    return out;
}

std::optional<long> LaurentSeries::valuation() const {
    if (terms_.empty()) {
        return std::nullopt;
    }
    return terms_.begin()->first;
}

std::optional<long> LaurentSeries::max_degree() const {
    if (terms_.empty()) {
        return std::nullopt;
    }
    return terms_.rbegin()->first;
}

const FieldElement& LaurentSeries::leading() const {
    if (terms_.empty()) {
        throw DomainError("leading coefficient of a zero series");
    }
    return terms_.begin()->second;
}

FieldElement LaurentSeries::coeff(long k) const {
    if (precision_ && k >= *precision_) {
        throw PrecisionError("coefficient of " + var_ + "^" + std::to_string(k) + " is beyond the known precision " +
                             std::to_string(*precision_));
    }
    auto it = terms_.find(k);
    return it == terms_.end() ? FieldElement() : it->second;
}

ZeroStatus LaurentSeries::zero_status() const {
    if (!terms_.empty()) {
        return ZeroStatus::nonzero;
    }
    return exact() ? ZeroStatus::certified_zero : ZeroStatus::zero_to_precision;
}

LaurentSeries LaurentSeries::truncated(long precision) const {
    return LaurentSeries(terms_, min_precision(precision_, precision), var_);
}

LaurentSeries LaurentSeries::principal_part() const {
    if (precision_ && *precision_ < 0) {
        throw PrecisionError("principal part needs precision >= 0, have " + std::to_string(*precision_));
    }
    std::map<long, FieldElement> out;
    for (const auto& [k, c] : terms_) {
        if (k < 0) {
            out.emplace(k, c);
        }
    }
    return LaurentSeries(std::move(out), std::nullopt, var_);
}

LaurentSeries LaurentSeries::derivative() const {
    std::map<long, FieldElement> out;
    for (const auto& [k, c] : terms_) {
        if (k != 0) {
            out.emplace(k - 1, c * FieldElement(k));
        }
    }
    return LaurentSeries(std::move(out), add_precision(precision_, -1), var_);
}

LaurentSeries LaurentSeries::scaled(const FieldElement& c) const {
    if (c.is_zero()) {
        return LaurentSeries({}, precision_, var_);
    }
    std::map<long, FieldElement> out;
    for (const auto& [k, a] : terms_) {
        out.emplace(k, a * c);
    }
    return LaurentSeries(std::move(out), precision_, var_);
}

LaurentSeries LaurentSeries::shifted(long s) const {
    std::map<long, FieldElement> out;
    for (const auto& [k, a] : terms_) {
        out.emplace(k + s, a);
    }
    return LaurentSeries(std::move(out), add_precision(precision_, s), var_);
}

LaurentSeries LaurentSeries::dilated(const FieldElement& c) const {
    if (c.is_zero()) {
        throw DomainError("dilation by zero");
    }
    std::map<long, FieldElement> out;
    for (const auto& [k, a] : terms_) {
        out.emplace(k, a * c.pow(k));
    }
    return LaurentSeries(std::move(out), precision_, var_);
}

LaurentSeries LaurentSeries::substitute_power(long k) const {
    if (k < 1) {
        throw DomainError("substitute_power needs k >= 1");
    }
    std::map<long, FieldElement> out;
    for (const auto& [e, a] : terms_) {
        out.emplace(e * k, a);
    }
    return LaurentSeries(std::move(out), precision_ ? std::optional<long>(*precision_ * k) : std::nullopt, var_);
}

LaurentSeries LaurentSeries::operator-() const {
    return scaled(FieldElement(-1));
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    const auto prec = min_precision(precision_, o.precision_);
    std::map<long, FieldElement> out = terms_;
    for (const auto& [k, c] : o.terms_) {
        auto [it, inserted] = out.emplace(k, c);
        if (!inserted) {
            it->second += c;
        }
    }
    return LaurentSeries(std::move(out), prec, var_);
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
    return *this + (-o);
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    if (zero_status() == ZeroStatus::certified_zero || o.zero_status() == ZeroStatus::certified_zero) {
        return LaurentSeries({}, std::nullopt, var_);
    }
    const long vf = terms_.empty() ? *precision_ : terms_.begin()->first;
    const long vg = o.terms_.empty() ? *o.precision_ : o.terms_.begin()->first;
    const auto prec = min_precision(add_precision(o.precision_, vf), add_precision(precision_, vg));
    std::map<long, FieldElement> out;
    for (const auto& [i, a] : terms_) {
        if (prec && i + vg >= *prec) {
            break;
        }
        for (const auto& [j, b] : o.terms_) {
            if (prec && i + j >= *prec) {
                break;
            }
            auto [it, inserted] = out.emplace(i + j, a * b);
            if (!inserted) {
                it->second += a * b;
            }
        }
    }
    return LaurentSeries(std::move(out), prec, var_);
}

LaurentSeries LaurentSeries::pow(long e, long window) const {
    if (e < 0) {
        return inverse(window).pow(-e, window);
    }
    LaurentSeries result = constant(FieldElement(1), var_);
    LaurentSeries base = *this;
    while (e > 0) {
        if (e & 1) {
            result = result * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

LaurentSeries LaurentSeries::inverse(long window) const {
    if (terms_.empty()) {
        throw DivisionByZero("inverse of a zero series");
    }
    const long v = terms_.begin()->first;
    const FieldElement c_inv = terms_.begin()->second.inverse();
    if (is_monomial()) {
        return monomial(c_inv, -v, var_);
    }
    const long rel = precision_ ? *precision_ - v : window;
    const auto h = unit_part(*this, v, c_inv);
    std::vector<FieldElement> y(std::max(rel, 1L));
    y[0] = FieldElement(1);
    for (long n = 1; n < rel; ++n) {
        FieldElement acc;
        for (const auto& [k, hk] : h) {
            if (k > n) {
                break;
            }
            acc -= hk * y[n - k];
        }
        y[n] = acc;
    }
    std::map<long, FieldElement> out;
    for (long n = 0; n < rel; ++n) {
        out.emplace(n - v, y[n] * c_inv);
    }
    return LaurentSeries(std::move(out), rel - v, var_);
}

LaurentSeries LaurentSeries::nth_root(long m, long window) const {
    if (m < 1) {
        throw DomainError("root order must be positive");
    }
    if (terms_.empty()) {
        throw DomainError("root of a zero series");
    }
    const long v = terms_.begin()->first;
    if (v % m != 0) {
        throw DomainError("valuation " + std::to_string(v) + " is not divisible by " + std::to_string(m));
    }
    const FieldElement& c = terms_.begin()->second;
    const FieldElement r = FieldElement::root(c, m);
    if (m == 1) {
        return *this;
    }
    if (is_monomial()) {
        return monomial(r, v / m, var_);
    }
    const long rel = precision_ ? *precision_ - v : window;
    const auto h = unit_part(*this, v, c.inverse());
    const auto y = binomial_series(h, make_rational(1, m), rel);
    std::map<long, FieldElement> out;
    for (long n = 0; n < rel; ++n) {
        out.emplace(n + v / m, y[n] * r);
    }
    return LaurentSeries(std::move(out), rel + v / m, var_);
}

LaurentSeries LaurentSeries::reversion(long window) const {
    if (valuation() != 1) {
        throw DomainError("reversion needs valuation exactly 1");
    }
    const FieldElement c = terms_.begin()->second;
    if (is_monomial()) {
        return monomial(c.inverse(), 1, var_);
    }
    const long target = precision_ ? *precision_ : 1 + window;
    // Lagrange inversion: [u^n] g = (1/n) [u^{n-1}] (u / f)^n.
    const LaurentSeries h = shifted(-1).inverse(target - 1).truncated(target - 1);
    std::map<long, FieldElement> out;
    LaurentSeries hp = constant(FieldElement(1), var_);
    for (long n = 1; n < target; ++n) {
        hp = (hp * h).truncated(target - 1);
        out.emplace(n, hp.coeff(n - 1) * FieldElement(make_rational(1, n)));
    }
    return LaurentSeries(std::move(out), target, var_);
}

bool LaurentSeries::operator==(const LaurentSeries& o) const {
    if (precision_ != o.precision_ || terms_.size() != o.terms_.size()) {
        return false;
    }
    auto it = o.terms_.begin();
    for (const auto& [k, c] : terms_) {
        if (it->first != k || it->second != c) {
            return false;
        }
        ++it;
    }
    return true;
}

bool LaurentSeries::agrees_with(const LaurentSeries& o) const {
    const auto prec = min_precision(precision_, o.precision_);
    const LaurentSeries d = (*this - o);
    for (const auto& [k, c] : d.terms_) {
        if (!prec || k < *prec) {
            return false;
        }
    }
    return true;
}

std::string LaurentSeries::to_string() const {
    return to_string(var_);
}

std::string LaurentSeries::to_string(const std::string& var) const {
    std::string out;
    for (const auto& [k, c] : terms_) {
        if (!out.empty()) {
            out += " + ";
        }
        out += c.to_string();
        if (k != 0) {
            out += "*" + var + "^" + std::to_string(k);
        }
    }
    if (precision_) {
        out += (out.empty() ? "" : " + ") + std::string("O(") + var + "^" + std::to_string(*precision_) + ")";
    }
    return out.empty() ? "0/1" : out;
}

LaurentSeries divide(const LaurentSeries& f, const LaurentSeries& g, long window) {
    if (g.zero_status() != ZeroStatus::nonzero) {
        throw DivisionByZero("division by a zero series");
    }
    if (f.zero_status() == ZeroStatus::certified_zero) {
        return LaurentSeries({}, std::nullopt, f.var());
    }
    if (f.exact() && g.exact()) {
        const long vg = *g.valuation();
        const long dg = *g.max_degree() - vg;
        std::map<long, FieldElement> rem;
        for (const auto& [k, c] : f.terms()) {
            rem.emplace(k, c);
        }
        std::map<long, FieldElement> quot;
        const FieldElement lead_inv = g.terms().rbegin()->second.inverse();
        bool exact = true;
        while (!rem.empty()) {
            const long top = rem.rbegin()->first;
            if (top - rem.begin()->first < dg) {
                exact = false;
                break;
            }
            const long shift = top - *g.max_degree();
            const FieldElement t = rem.rbegin()->second * lead_inv;
            quot.emplace(shift, t);
            for (const auto& [k, c] : g.terms()) {
                auto [it, inserted] = rem.emplace(k + shift, -(c * t));
                if (!inserted) {
                    it->second -= c * t;
                }
                if (it->second.is_zero()) {
                    rem.erase(it);
                }
            }
        }
        if (exact) {
            return LaurentSeries(std::move(quot), std::nullopt, f.var());
        }
    }
    long w = window;
    if (!f.exact() && f.valuation()) {
        w = std::max(1L, *f.precision() - *f.valuation());
    }
    return f * g.inverse(w);
}

LaurentSeries compose(const LaurentSeries& f, const LaurentSeries& g, long window) {
    const auto vg_opt = g.valuation();
    if (!vg_opt || *vg_opt < 1) {
        throw DomainError("composition needs an inner series of valuation >= 1");
    }
    const long v = *vg_opt;
    if (f.terms().empty()) {
        return LaurentSeries({}, f.precision() ? std::optional<long>(*f.precision() * v) : std::nullopt, f.var());
    }
    std::optional<long> result_prec;
    if (f.precision()) {
        result_prec = *f.precision() * v;
    }
    const long kmin = f.terms().begin()->first;
    const bool has_negative = kmin < 0;
    const std::optional<long> pos_rel = g.exact() ? std::nullopt : std::optional<long>(*g.precision() - v);
    std::optional<long> neg_rel = pos_rel;
    if (g.exact() && !g.is_monomial()) {
        neg_rel = window;
    }
    if (has_negative) {
        result_prec = min_precision(result_prec, neg_rel ? std::optional<long>(kmin * v + *neg_rel) : std::nullopt);
    }
    long kmin_pos = -1;
    for (const auto& [k, c] : f.terms()) {
        if (k >= 0) {
            kmin_pos = k;
            break;
        }
    }
    if (kmin_pos >= 0 && pos_rel) {
        result_prec = min_precision(result_prec, kmin_pos * v + *pos_rel);
    }
    auto cut = [&](const LaurentSeries& s) { return result_prec ? s.truncated(*result_prec) : s; };

    LaurentSeries out({}, std::nullopt, f.var());
    if (has_negative) {
        long w = window;
        if (result_prec) {
            w = *result_prec - kmin * v;
        }
        const LaurentSeries ginv = g.inverse(std::max(w, 1L));
        LaurentSeries p = ginv;
        for (long k = -1; k >= kmin; --k) {
            auto it = f.terms().find(k);
            if (it != f.terms().end()) {
                out = out + cut(p.scaled(it->second));
            }
            if (k > kmin) {
                p = p * ginv;
            }
        }
    }
    if (kmin_pos >= 0) {
        LaurentSeries p = LaurentSeries::constant(FieldElement(1), f.var());
        long k = 0;
        for (const auto& [e, c] : f.terms()) {
            if (e < 0) {
                continue;
            }
            if (result_prec && e * v >= *result_prec) {
                break;
            }
            while (k < e) {
                p = cut(p * g);
                ++k;
            }
            out = out + cut(p.scaled(c));
        }
    }
    out = LaurentSeries(out.terms(), result_prec, f.var());
    return out;
}

} // namespace stphase
