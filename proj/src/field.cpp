#include "stphase/field.hpp"

#include "stphase/errors.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

namespace stphase {

namespace {

using cyclo::Vec;

long lcm(long a, long b) { return std::lcm(a, b); }

long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

const std::pair<long, Vec>& cached_sqrt_prime(long p) {
    static std::mutex m;
    static std::map<long, std::pair<long, Vec>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(p);
    if (it == cache.end()) {
        it = cache.emplace(p, cyclo::sqrt_prime(p)).first;
    }
    return it->second;
}

std::map<long, long> factor_integer(mpz_class n) {
    std::map<long, long> out;
    if (n < 0) {
        n = -n;
    }
    if (n == 0) {
        throw DomainError("cannot factor zero");
    }
    for (long p = 2; p <= 1000000 && n > 1; ++p) {
        if (p * p > n) {
            break;
        }
        while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
            n /= p;
            ++out[p];
        }
    }
    if (n > 1) {
        if (!n.fits_slong_p() || n > mpz_class(1000000) * 1000000) {
            throw RootAdjunctionError("radicand has a prime factor too large to certify");
        }
        ++out[n.get_si()];
    }
    return out;
}

std::map<long, Rational> factor_rational(const Rational& r) {
    std::map<long, Rational> out;
    for (auto [p, e] : factor_integer(r.get_num())) {
        out[p] += e;
    }
    for (auto [p, e] : factor_integer(r.get_den())) {
        out[p] -= e;
    }
    return out;
}

Rational pow_rational(long p, long e) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(mpz_class(1), v) : Rational(v);
}

long floor_rational(const Rational& r) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return f.get_si();
}

// prod p^e = factor * key, with factor in Q(zeta_order) and key normalized.
struct Normalized {
    long order = 1;
    Vec factor{Rational(1)};
    Radical key;
};

Normalized normalize(const std::map<long, Rational>& exps) {
    Normalized out;
    Rational scalar = 1;
    for (const auto& [p, e] : exps) {
        if (sgn(e) == 0) {
            continue;
        }
        const Rational twice = 2 * e;
        const long k = floor_rational(twice);
        const Rational f = e - make_rational(k, 2);
        const long half = k >= 0 ? k / 2 : -((-k + 1) / 2);
        scalar *= pow_rational(p, half);
        if (mod(k, 2) == 1) {
            const auto& [m, v] = cached_sqrt_prime(p);
            const long n = lcm(out.order, m);
            out.factor = cyclo::mul(n, cyclo::lift(out.order, n, out.factor), cyclo::lift(m, n, v));
            out.order = n;
        }
        if (sgn(f) != 0) {
            out.key.emplace_back(p, f);
        }
    }
    out.factor = cyclo::scale(out.factor, scalar);
    return out;
}

std::map<long, Rational> key_exponents(const Radical& key) {
    return {key.begin(), key.end()};
}

// v = r * zeta_M^k with r > 0 and M = lcm(n, 2).
std::optional<std::tuple<long, long, Rational>> rational_multiple(long n, const Vec& v) {
    const long m = lcm(n, 2);
    long nonzero = 0;
    long idx = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (sgn(v[j]) != 0) {
            ++nonzero;
            idx = static_cast<long>(j);
        }
    }
    if (nonzero == 0) {
        return std::nullopt;
    }
    if (nonzero == 1) {
        Rational r = v[idx];
        long k = idx * (m / n);
        if (sgn(r) < 0) {
            r = -r;
            k += m / 2;
        }
        return std::make_tuple(m, mod(k, m), r);
    }
    const Vec w = cyclo::lift(n, m, v);
    for (long k = 0; k < m; ++k) {
        const Vec t = cyclo::mul(m, w, cyclo::power(m, -k));
        if (cyclo::is_rational(t) && sgn(t[0]) > 0) {
            return std::make_tuple(m, k, t[0]);
        }
    }
    return std::nullopt;
}

std::pair<long, long> lowest_terms(long k, long m) {
    k = mod(k, m);
    const long g = std::gcd(k, m);
    if (k == 0) {
        return {1, 0};
    }
    return {m / g, k / g};
}

} // namespace

std::string rational_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

FieldElement::FieldElement() = default;

FieldElement::FieldElement(long v) : FieldElement(Rational(v)) {}

FieldElement::FieldElement(const Rational& v) {
    if (sgn(v) != 0) {
        Rational c = v;
        c.canonicalize();
        terms_[{}] = Vec{c};
    }
}

FieldElement FieldElement::from_terms(long n, std::map<Radical, Vec> terms) {
    FieldElement out;
    out.n_ = n;
    for (auto& [k, v] : terms) {
        if (!cyclo::is_zero(v)) {
            out.terms_.emplace(k, std::move(v));
        }
    }
    return out;
}

void FieldElement::add_term(const Radical& key, const Vec& v) {
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (!cyclo::is_zero(v)) {
            terms_.emplace(key, v);
        }
        return;
    }
    it->second = cyclo::add(it->second, v);
    if (cyclo::is_zero(it->second)) {
        terms_.erase(it);
    }
}

FieldElement FieldElement::zeta(long n, long k) {
    if (n < 1) {
        throw DomainError("zeta order must be positive");
    }
    return from_terms(n, {{Radical{}, cyclo::power(n, k)}});
}

FieldElement FieldElement::radical(const std::map<long, Rational>& exponents) {
    Normalized nz = normalize(exponents);
    return from_terms(nz.order, {{nz.key, nz.factor}});
}

FieldElement FieldElement::root(const FieldElement& gamma, long m) {
    if (m < 1) {
        throw DomainError("root order must be positive");
    }
    if (gamma.is_zero()) {
        throw DomainError("root of zero");
    }
    if (m == 1) {
        return gamma;
    }
    auto mono = gamma.as_monomial();
    if (!mono) {
        throw RootAdjunctionError("cannot adjoin a root of a non-monomial radicand: " + gamma.to_string());
    }
    std::map<long, Rational> exps;
    for (const auto& [p, e] : mono->exponents) {
        exps[p] = e / m;
    }
    return zeta(m * mono->root_order, mono->root_exp) * radical(exps);
}

FieldElement FieldElement::lifted(long n) const {
    if (n % n_ != 0) {
        throw InvariantError("lifted: target order is not a multiple");
    }
    FieldElement out;
    out.n_ = n;
    for (const auto& [k, v] : terms_) {
        out.terms_.emplace(k, cyclo::lift(n_, n, v));
    }
    return out;
}

std::tuple<FieldElement, FieldElement, long> lift_to_common_field(const FieldElement& x, const FieldElement& y) {
    const long n = lcm(x.order(), y.order());
    return {x.lifted(n), y.lifted(n), n};
}

FieldElement FieldElement::operator-() const {
    FieldElement out = *this;
    for (auto& [k, v] : out.terms_) {
        v = cyclo::neg(v);
    }
    return out;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    if (o.is_zero()) {
        return *this;
    }
    if (is_zero()) {
        return o;
    }
    auto [a, b, n] = lift_to_common_field(*this, o);
    for (const auto& [k, v] : b.terms_) {
        a.add_term(k, v);
    }
    return a;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    return *this + (-o);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    if (is_zero() || o.is_zero()) {
        return {};
    }
    if (o.is_rational()) {
        FieldElement out = *this;
        const Rational c = o.to_rational();
        for (auto& [k, v] : out.terms_) {
            v = cyclo::scale(v, c);
        }
        return out;
    }
    if (is_rational()) {
        return o * *this;
    }
    struct Piece {
        const Vec* a;
        const Vec* b;
        Normalized nz;
    };
    std::vector<Piece> pieces;
    long n = lcm(n_, o.n_);
    for (const auto& [ka, va] : terms_) {
        for (const auto& [kb, vb] : o.terms_) {
            Normalized nz;
            if (!ka.empty() || !kb.empty()) {
                auto exps = key_exponents(ka);
                for (const auto& [p, e] : kb) {
                    exps[p] += e;
                }
                nz = normalize(exps);
            }
            n = lcm(n, nz.order);
            pieces.push_back({&va, &vb, std::move(nz)});
        }
    }
    FieldElement out;
    out.n_ = n;
    for (const auto& pc : pieces) {
        Vec prod = cyclo::mul(n, cyclo::lift(n_, n, *pc.a), cyclo::lift(o.n_, n, *pc.b));
        if (pc.nz.order != 1 || !cyclo::is_rational(pc.nz.factor) || pc.nz.factor[0] != 1) {
            prod = cyclo::mul(n, prod, cyclo::lift(pc.nz.order, n, pc.nz.factor));
        }
        out.add_term(pc.nz.key, prod);
    }
    return out;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) {
        throw DivisionByZero();
    }
    if (terms_.size() == 1) {
        const auto& [key, v] = *terms_.begin();
        FieldElement out = from_terms(n_, {{Radical{}, cyclo::inverse(n_, v)}});
        if (key.empty()) {
            return out;
        }
        auto exps = key_exponents(key);
        for (auto& [p, e] : exps) {
            e = -e;
        }
        return out * radical(exps);
    }
    // Norm over the Kummer group: x^{-1} = prod_{chi != 1} sigma_chi(x) / N(x).
    std::map<long, long> denominators;
    for (const auto& [key, v] : terms_) {
        for (const auto& [p, e] : key) {
            const Rational twice = 2 * e;
            auto& d = denominators[p];
            d = std::lcm(std::max(d, 1L), twice.get_den().get_si());
        }
    }
    std::vector<std::pair<long, long>> comps(denominators.begin(), denominators.end());
    long group_size = 1;
    for (const auto& c : comps) {
        group_size *= c.second;
    }
    FieldElement conj_product(1);
    for (long idx = 1; idx < group_size; ++idx) {
        long rest = idx;
        std::vector<long> chi;
        for (const auto& c : comps) {
            chi.push_back(rest % c.second);
            rest /= c.second;
        }
        FieldElement sigma;
        for (const auto& [key, v] : terms_) {
            FieldElement term = from_terms(n_, {{key, v}});
            for (std::size_t i = 0; i < comps.size(); ++i) {
                for (const auto& [p, e] : key) {
                    if (p == comps[i].first) {
                        const Rational idx_in_group = 2 * e * comps[i].second;
                        term = term * zeta(comps[i].second, chi[i] * idx_in_group.get_num().get_si());
                    }
                }
            }
            sigma += term;
        }
        conj_product *= sigma;
    }
    const FieldElement norm = *this * conj_product;
    if (norm.terms_.size() != 1 || !norm.terms_.begin()->first.empty()) {
        throw InvariantError("Kummer norm left radicals behind");
    }
    return conj_product * from_terms(norm.n_, {{Radical{}, cyclo::inverse(norm.n_, norm.terms_.begin()->second)}});
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    if (o.is_zero()) {
        throw DivisionByZero();
    }
    return *this * o.inverse();
}

FieldElement FieldElement::pow(long e) const {
    if (e < 0) {
        return inverse().pow(-e);
    }
    FieldElement result(1);
    FieldElement base = *this;
    while (e > 0) {
        if (e & 1) {
            result *= base;
        }
        e >>= 1;
        if (e > 0) {
            base *= base;
        }
    }
    return result;
}

bool FieldElement::is_rational() const {
    if (terms_.empty()) {
        return true;
    }
    return terms_.size() == 1 && terms_.begin()->first.empty() && cyclo::is_rational(terms_.begin()->second);
}

Rational FieldElement::to_rational() const {
    if (!is_rational()) {
        throw DomainError("element is not rational: " + to_string());
    }
    return terms_.empty() ? Rational(0) : terms_.begin()->second[0];
}

bool FieldElement::is_one() const {
    return is_rational() && to_rational() == 1;
}

bool FieldElement::is_integer() const {
    return is_rational() && to_rational().get_den() == 1;
}

std::optional<Monomial> FieldElement::as_monomial() const {
    if (terms_.size() != 1) {
        return std::nullopt;
    }
    const auto& [key, v] = *terms_.begin();
    Monomial out;
    Rational c;
    long m = 1;
    long k = 0;
    if (auto rm = rational_multiple(n_, v)) {
        std::tie(m, k, c) = *rm;
    } else {
        const Vec sq = cyclo::mul(n_, v, v);
        auto rm2 = rational_multiple(n_, sq);
        if (!rm2) {
            return std::nullopt;
        }
        const Rational r = std::get<2>(*rm2);
        mpz_class ab = r.get_num() * r.get_den();
        mpz_class s = 1;
        for (auto [p, e] : factor_integer(ab)) {
            if (e % 2 == 1) {
                s *= p;
            }
        }
        mpz_class root_ab;
        mpz_sqrt(root_ab.get_mpz_t(), mpz_class(ab / s).get_mpz_t());
        c = Rational(root_ab, r.get_den());
        c.canonicalize();
        std::map<long, Rational> half;
        for (auto [p, e] : factor_integer(s)) {
            half[p] = Rational(1, 2);
        }
        FieldElement eps = from_terms(n_, {{Radical{}, v}}) / (FieldElement(c) * radical(half));
        if (eps.terms_.size() != 1 || !eps.terms_.begin()->first.empty()) {
            return std::nullopt;
        }
        auto re = rational_multiple(eps.n_, eps.terms_.begin()->second);
        if (!re || std::get<2>(*re) != 1) {
            return std::nullopt;
        }
        m = std::get<0>(*re);
        k = std::get<1>(*re);
        out.exponents = half;
    }
    for (const auto& [p, e] : factor_rational(c)) {
        out.exponents[p] += e;
    }
    for (const auto& [p, e] : key) {
        out.exponents[p] += e;
    }
    for (auto it = out.exponents.begin(); it != out.exponents.end();) {
        it = sgn(it->second) == 0 ? out.exponents.erase(it) : std::next(it);
    }
    std::tie(out.root_order, out.root_exp) = lowest_terms(k, m);
    out.sign = (out.root_order == 2) ? -1 : 1;
    return out;
}

std::optional<std::pair<long, long>> FieldElement::root_of_unity() const {
    auto mono = as_monomial();
    if (!mono || !mono->exponents.empty()) {
        return std::nullopt;
    }
    return std::make_pair(mono->root_order, mono->root_exp);
}

FieldElement FieldElement::canonical() const {
    std::map<Radical, std::pair<long, Vec>> reduced;
    long n = 1;
    for (const auto& [k, v] : terms_) {
        auto c = cyclo::conductor(n_, v);
        n = lcm(n, c.first);
        reduced.emplace(k, std::move(c));
    }
    FieldElement out;
    out.n_ = n;
    for (auto& [k, c] : reduced) {
        out.terms_.emplace(k, cyclo::lift(c.first, n, c.second));
    }
    return out;
}

int FieldElement::compare(const FieldElement& o) const {
    if (*this == o) {
        return 0;
    }
    auto ia = terms_.begin();
    auto ib = o.terms_.begin();
    for (; ia != terms_.end() && ib != o.terms_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) {
            return ia->first < ib->first ? -1 : 1;
        }
        auto ca = cyclo::conductor(n_, ia->second);
        auto cb = cyclo::conductor(o.n_, ib->second);
        if (ca.first != cb.first) {
            return ca.first < cb.first ? -1 : 1;
        }
        for (std::size_t j = 0; j < ca.second.size(); ++j) {
            if (ca.second[j] != cb.second[j]) {
                return ca.second[j] < cb.second[j] ? -1 : 1;
            }
        }
    }
    if (ia == terms_.end() && ib == o.terms_.end()) {
        return 0;
    }
    return ia == terms_.end() ? -1 : 1;
}

std::complex<double> FieldElement::to_complex() const {
    std::complex<double> total = 0;
    const double two_pi = 2 * std::acos(-1.0);
    for (const auto& [k, v] : terms_) {
        std::complex<double> cyc = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (sgn(v[j]) != 0) {
                cyc += v[j].get_d() * std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(n_));
            }
        }
        double rad = 1;
        for (const auto& [p, e] : k) {
            rad *= std::pow(static_cast<double>(p), e.get_d());
        }
        total += cyc * rad;
    }
    return total;
}

std::string FieldElement::to_string() const {
    if (terms_.empty()) {
        return "0/1";
    }
    if (is_rational()) {
        return rational_string(to_rational());
    }
    std::vector<std::string> parts;
    for (const auto& [key, v] : terms_) {
        auto [n, w] = cyclo::conductor(n_, v);
        std::string radical_suffix;
        if (!key.empty()) {
            mpz_class den = 1;
            for (const auto& [p, e] : key) {
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.get_den_mpz_t());
            }
            mpz_class radicand = 1;
            for (const auto& [p, e] : key) {
                const Rational scaled = e * Rational(den);
                mpz_class f;
                mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(p), scaled.get_num().get_ui());
                radicand *= f;
            }
            radical_suffix = "*root(" + radicand.get_str() + "/1," + den.get_str() + ")";
        }
        if (cyclo::is_rational(w)) {
            parts.push_back(rational_string(w[0]) + radical_suffix);
            continue;
        }
        bool found = false;
        if (auto rm = rational_multiple(n, w)) {
            auto [m, k, r] = *rm;
            auto [order, e] = lowest_terms(k, m);
            parts.push_back(rational_string(r) + "*zeta(" + std::to_string(order) + ")^" + std::to_string(e) +
                            radical_suffix);
            found = true;
        }
        if (found) {
            continue;
        }
        std::vector<std::string> inner;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (sgn(w[j]) == 0) {
                continue;
            }
            inner.push_back(j == 0 ? rational_string(w[j])
                                   : rational_string(w[j]) + "*zeta(" + std::to_string(n) + ")^" + std::to_string(j));
        }
        std::string joined;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            joined += (i ? " + " : "") + inner[i];
        }
        if (radical_suffix.empty()) {
            parts.push_back(joined);
        } else {
            parts.push_back("(" + joined + ")" + radical_suffix);
        }
    }
    if (parts.size() == 1 && parts[0].find(" + ") == std::string::npos) {
        return parts[0];
    }
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? " + " : "") + parts[i];
    }
    return out + ")";
}

} // namespace stphase
