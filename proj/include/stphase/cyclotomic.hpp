#pragma once

// Dense arithmetic in Q(zeta_n), zeta_n = exp(2 pi i / n), power basis 1, z, ..., z^{phi(n)-1}.
// Vectors always have length phi(n).

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace stphase::cyclo {

using Rational = mpq_class;
using Vec = std::vector<Rational>;

long euler_phi(long n);
std::vector<long> prime_factors(long n);

// Coefficients of the n-th cyclotomic polynomial, lowest degree first. Cached.
const std::vector<long long>& cyclotomic_poly(long n);

Vec zero(long n);
Vec constant(long n, const Rational& c);
// c * zeta_n^k for any integer k.
Vec power(long n, long k, const Rational& c = Rational(1));

bool is_zero(const Vec& v);
bool is_rational(const Vec& v);

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec neg(const Vec& a);
Vec scale(const Vec& a, const Rational& c);
Vec mul(long n, const Vec& a, const Vec& b);
// Inverse in Q(zeta_n). Precondition: a != 0.
Vec inverse(long n, const Vec& a);

// sigma_k : zeta_n -> zeta_n^k, gcd(k, n) = 1.
Vec galois(long n, long k, const Vec& a);

// Embedding Q(zeta_from) -> Q(zeta_to), from | to.
Vec lift(long from, long to, const Vec& a);
// Preimage of a under lift(to, from, .) when a lies in the subfield, to | from.
std::optional<Vec> descend(long from, long to, const Vec& a);

// Smallest m | n (never 2 mod 4) with a in Q(zeta_m), together with the coordinates.
std::pair<long, Vec> conductor(long n, const Vec& a);

// sqrt(p) for a prime p as an element of Q(zeta_m): returns (m, coordinates).
std::pair<long, Vec> sqrt_prime(long p);

} // namespace stphase::cyclo
