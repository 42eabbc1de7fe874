#include "stphase/cyclotomic.hpp"

#include "stphase/errors.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace stphase::cyclo {

namespace {

std::mutex cache_mutex;

long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

// Divide a polynomial (lowest degree first, any length) by the monic Phi_n in place; keeps the remainder.
Vec reduce_poly(long n, std::vector<Rational> poly) {
    const auto& phi_poly = cyclotomic_poly(n);
    const long deg = static_cast<long>(phi_poly.size()) - 1;
    for (long i = static_cast<long>(poly.size()) - 1; i >= deg; --i) {
        if (sgn(poly[i]) == 0) {
            continue;
        }
        const Rational c = poly[i];
        for (long j = 0; j <= deg; ++j) {
            if (phi_poly[j] != 0) {
                poly[i - deg + j] -= c * static_cast<long>(phi_poly[j]);
            }
        }
    }
    poly.resize(deg);
    return poly;
}

using Poly = std::vector<Rational>;

void trim(Poly& p) {
    while (!p.empty() && sgn(p.back()) == 0) {
        p.pop_back();
    }
}

// Polynomial division over Q. Precondition: b nonzero and trimmed.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    trim(a);
    if (a.size() < b.size()) {
        return {Poly{}, a};
    }
    Poly q(a.size() - b.size() + 1);
    const Rational lead = b.back();
    for (long i = static_cast<long>(a.size()) - 1; i >= static_cast<long>(b.size()) - 1; --i) {
        if (sgn(a[i]) == 0) {
            continue;
        }
        const Rational c = a[i] / lead;
        const long shift = i - (static_cast<long>(b.size()) - 1);
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) {
            a[shift + j] -= c * b[j];
        }
    }
    trim(a);
    return {q, a};
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) {
        return {};
    }
    Poly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (sgn(b[j]) != 0) {
                r[i + j] += a[i] * b[j];
            }
        }
    }
    trim(r);
    return r;
}

Poly poly_sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) {
        a.resize(b.size());
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] -= b[i];
    }
    trim(a);
    return a;
}

long legendre(long a, long p) {
    long result = 1;
    long base = mod(a, p);
    long e = (p - 1) / 2;
    while (e > 0) {
        if (e & 1) {
            result = (result * base) % p;
        }
        base = (base * base) % p;
        e >>= 1;
    }
    return result == 1 ? 1 : -1;
}

} // namespace

long euler_phi(long n) {
    long result = n;
    for (long p : prime_factors(n)) {
        result = result / p * (p - 1);
    }
    return result;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> out;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) {
                n /= p;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

const std::vector<long long>& cyclotomic_poly(long n) {
    static std::map<long, std::vector<long long>> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(n);
        if (it != cache.end()) {
            return it->second;
        }
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    std::vector<long long> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) {
            continue;
        }
        const auto& den = cyclotomic_poly(d);
        const long dd = static_cast<long>(den.size()) - 1;
        const long nd = static_cast<long>(num.size()) - 1;
        std::vector<long long> q(nd - dd + 1, 0);
        for (long i = nd; i >= dd; --i) {
            const long long c = num[i];
            if (c == 0) {
                continue;
            }
            q[i - dd] = c;
            for (long j = 0; j <= dd; ++j) {
                num[i - dd + j] -= c * den[j];
            }
        }
        num = q;
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.emplace(n, num).first->second;
}

Vec zero(long n) {
    return Vec(euler_phi(n));
}

Vec constant(long n, const Rational& c) {
    Vec v = zero(n);
    v[0] = c;
    return v;
}

Vec power(long n, long k, const Rational& c) {
    std::vector<Rational> poly(n);
    poly[mod(k, n)] = c;
    return reduce_poly(n, std::move(poly));
}

bool is_zero(const Vec& v) {
    for (const auto& c : v) {
        if (sgn(c) != 0) {
            return false;
        }
    }
    return true;
}

bool is_rational(const Vec& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (sgn(v[i]) != 0) {
            return false;
        }
    }
    return true;
}

Vec add(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] += b[i];
    }
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= b[i];
    }
    return r;
}

Vec neg(const Vec& a) {
    Vec r = a;
    for (auto& c : r) {
        c = -c;
    }
    return r;
}

Vec scale(const Vec& a, const Rational& c) {
    Vec r = a;
    for (auto& x : r) {
        x *= c;
    }
    return r;
}

Vec mul(long n, const Vec& a, const Vec& b) {
    if (a.size() == 1) {
        return {a[0] * b[0]};
    }
    if (is_rational(a)) {
        return scale(b, a[0]);
    }
    if (is_rational(b)) {
        return scale(a, b[0]);
    }
    std::vector<Rational> poly(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (sgn(b[j]) != 0) {
                poly[i + j] += a[i] * b[j];
            }
        }
    }
    return reduce_poly(n, std::move(poly));
}

Vec inverse(long n, const Vec& a) {
    if (is_zero(a)) {
        throw DivisionByZero();
    }
    if (is_rational(a)) {
        return constant(n, 1 / a[0]);
    }
    // Extended Euclid: s * a + t * Phi_n = 1.
    const auto& phi_coeffs = cyclotomic_poly(n);
    Poly r0;
    for (const long long c : phi_coeffs) {
        r0.emplace_back(static_cast<long>(c));
    }
    Poly r1 = a;
    trim(r1);
    Poly s0{};
    Poly s1{Rational(1)};
    while (!(r1.size() == 1)) {
        auto [q, r] = divmod(r0, r1);
        Poly s = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
        if (r1.empty()) {
            throw InvariantError("cyclotomic inverse: element shares a factor with Phi_n");
        }
    }
    const Rational c = r1[0];
    std::vector<Rational> out(s1.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        out[i] = s1[i] / c;
    }
    if (out.size() < a.size()) {
        out.resize(a.size());
    }
    return reduce_poly(n, std::move(out));
}

Vec galois(long n, long k, const Vec& a) {
    std::vector<Rational> poly(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0) {
            poly[mod(static_cast<long>(i) * k, n)] += a[i];
        }
    }
    return reduce_poly(n, std::move(poly));
}

Vec lift(long from, long to, const Vec& a) {
    if (from == to) {
        return a;
    }
    if (is_rational(a)) {
        return constant(to, a[0]);
    }
    const long step = to / from;
    std::vector<Rational> poly(to);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0) {
            poly[static_cast<long>(i) * step] = a[i];
        }
    }
    return reduce_poly(to, std::move(poly));
}

std::optional<Vec> descend(long from, long to, const Vec& a) {
    if (from == to) {
        return a;
    }
    if (is_rational(a)) {
        return constant(to, a[0]);
    }
    const long step = from / to;
    const long cols = euler_phi(to);
    const long rows = static_cast<long>(a.size());
    if (from % (step * step) == 0 || (step > 1 && to % step == 0)) {
        // Phi_from(x) = Phi_to(x^step) when every prime of step already divides `to`:
        // the subfield is spanned by the basis powers divisible by step.
        bool aligned = true;
        for (const long p : prime_factors(step)) {
            if (to % p != 0) {
                aligned = false;
            }
        }
        if (aligned) {
            Vec out(cols);
            for (long i = 0; i < rows; ++i) {
                if (sgn(a[i]) == 0) {
                    continue;
                }
                if (i % step != 0) {
                    return std::nullopt;
                }
                out[i / step] = a[i];
            }
            return out;
        }
    }
    // General case: solve sum_j x_j lift(zeta_to^j) = a by Gaussian elimination over Q.
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
    for (long j = 0; j < cols; ++j) {
        const Vec col = lift(to, from, power(to, j));
        for (long i = 0; i < rows; ++i) {
            m[i][j] = col[i];
        }
    }
    for (long i = 0; i < rows; ++i) {
        m[i][cols] = a[i];
    }
    long row = 0;
    std::vector<long> pivot_col;
    for (long c = 0; c < cols && row < rows; ++c) {
        long piv = -1;
        for (long i = row; i < rows; ++i) {
            if (sgn(m[i][c]) != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) {
            continue;
        }
        std::swap(m[piv], m[row]);
        const Rational inv = 1 / m[row][c];
        for (long k = c; k <= cols; ++k) {
            m[row][k] *= inv;
        }
        for (long i = 0; i < rows; ++i) {
            if (i != row && sgn(m[i][c]) != 0) {
                const Rational f = m[i][c];
                for (long k = c; k <= cols; ++k) {
                    m[i][k] -= f * m[row][k];
                }
            }
        }
        pivot_col.push_back(c);
        ++row;
    }
    for (long i = row; i < rows; ++i) {
        if (sgn(m[i][cols]) != 0) {
            return std::nullopt;
        }
    }
    Vec out(cols);
    for (long i = 0; i < row; ++i) {
        out[pivot_col[i]] = m[i][cols];
    }
    return out;
}

std::pair<long, Vec> conductor(long n, const Vec& a) {
    if (is_rational(a)) {
        return {1, constant(1, a[0])};
    }
    long cur = n;
    Vec v = a;
    bool progress = true;
    while (progress) {
        progress = false;
        for (const long p : prime_factors(cur)) {
            if (auto d = descend(cur, cur / p, v)) {
                cur /= p;
                v = std::move(*d);
                progress = true;
                break;
            }
        }
    }
    if (cur % 4 == 2) {
        auto d = descend(cur, cur / 2, v);
        if (!d) {
            throw InvariantError("Q(zeta_2m) = Q(zeta_m) descent failed");
        }
        cur /= 2;
        v = std::move(*d);
    }
    return {cur, v};
}

std::pair<long, Vec> sqrt_prime(long p) {
    if (p == 2) {
        // zeta_8 + zeta_8^-1
        return {8, add(power(8, 1), power(8, 7))};
    }
    Vec g = zero(p);
    for (long a = 1; a < p; ++a) {
        g = add(g, power(p, a, Rational(legendre(a, p))));
    }
    if (p % 4 == 1) {
        return {p, g};
    }
    // Gauss sum is i*sqrt(p) when p = 3 mod 4.
    const long m = 4 * p;
    return {m, mul(m, power(m, 3 * p), lift(p, m, g))};
}

} // namespace stphase::cyclo
