#include "stphase/oracle.hpp"

#include "stphase/connection.hpp"
#include "stphase/errors.hpp"
#include "stphase/fourier.hpp"

#include <algorithm>
#include <numeric>

namespace stphase {

// ---------------------------------------------------------------- Weyl algebra

WeylOperator WeylOperator::monomial(const FieldElement& c, long m, long n, std::string var) {
    WeylOperator out(std::move(var));
    out.add_term(m, n, c);
    return out;
}

void WeylOperator::add_term(long m, long n, const FieldElement& c) {
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.emplace(Key{m, n}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

FieldElement WeylOperator::coeff(long m, long n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? FieldElement() : it->second;
}

long WeylOperator::order() const {
    long n = 0;
    for (const auto& [k, c] : terms_) {
        n = std::max(n, k.second);
    }
    return n;
}

WeylOperator WeylOperator::operator+(const WeylOperator& o) const {
    WeylOperator out = *this;
    for (const auto& [k, c] : o.terms_) {
        out.add_term(k.first, k.second, c);
    }
    return out;
}

WeylOperator WeylOperator::operator-(const WeylOperator& o) const {
    return *this + (-o);
}

WeylOperator WeylOperator::scaled(const FieldElement& c) const {
    WeylOperator out(var_);
    for (const auto& [k, v] : terms_) {
        out.add_term(k.first, k.second, v * c);
    }
    return out;
}

WeylOperator WeylOperator::shifted(long k) const {
    WeylOperator out(var_);
    for (const auto& [key, v] : terms_) {
        out.add_term(key.first + k, key.second, v);
    }
    return out;
}

WeylOperator weyl_mul(const WeylOperator& a, const WeylOperator& b) {
    WeylOperator out(a.var());
    for (const auto& [ka, ca] : a.terms()) {
        const auto [m, n] = ka;
        for (const auto& [kb, cb] : b.terms()) {
            const auto [k, l] = kb;
            // d^n x^k = sum_j C(n, j) k (k-1) ... (k-j+1) x^{k-j} d^{n-j}
            Rational binom = 1;
            Rational falling = 1;
            for (long j = 0; j <= n; ++j) {
                if (falling == 0) {
                    break;
                }
                out = out + WeylOperator::monomial(ca * cb * FieldElement(Rational(binom * falling)), m + k - j,
                                                   n - j + l, a.var());
                binom = binom * (n - j) / (j + 1);
                falling *= k - j;
            }
        }
    }
    return out;
}

WeylOperator WeylOperator::operator*(const WeylOperator& o) const {
    return weyl_mul(*this, o);
}

WeylOperator WeylOperator::pow(long e) const {
    WeylOperator out = constant(FieldElement(1), var_);
    for (long i = 0; i < e; ++i) {
        out = out * *this;
    }
    return out;
}

std::optional<FieldElement> WeylOperator::proportional(const WeylOperator& o) const {
    if (terms_.size() != o.terms_.size() || terms_.empty()) {
        return std::nullopt;
    }
    std::optional<FieldElement> ratio;
    for (const auto& [k, c] : terms_) {
        auto it = o.terms_.find(k);
        if (it == o.terms_.end()) {
            return std::nullopt;
        }
        const FieldElement r = it->second * c.inverse();
        if (ratio && *ratio != r) {
            return std::nullopt;
        }
        ratio = r;
    }
    return ratio;
}

std::string WeylOperator::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto [m, n] = it->first;
        std::string term = it->second.to_string();
        if (m != 0) {
            term += "*" + var_ + (m == 1 ? "" : "^" + std::to_string(m));
        }
        if (n != 0) {
            term += "*d" + var_ + (n == 1 ? "" : "^" + std::to_string(n));
        }
        out += (out.empty() ? "" : " + ") + term;
    }
    return out;
}

// ---------------------------------------------------------------- pipeline stages

LaplaceResult laplace_substitute(const WeylOperator& a, const std::string& var) {
    const WeylOperator t_image = WeylOperator::monomial(FieldElement(1), 2, 1, var);
    const WeylOperator d_image = WeylOperator::x(-1, var);
    WeylOperator out(var);
    for (const auto& [k, c] : a.terms()) {
        out = out + (t_image.pow(k.first) * d_image.pow(k.second)).scaled(c);
    }
    long low = 0;
    for (const auto& [k, c] : out.terms()) {
        low = std::min(low, k.first);
    }
    return {out.shifted(-low), -low};
}

std::vector<NewtonSlope> newton_polygon_slopes(const WeylOperator& a, Point at) {
    if (a.is_zero()) {
        throw DomainError("Newton polygon of the zero operator");
    }
    std::map<long, long> lowest; // n -> min height
    for (const auto& [k, c] : a.terms()) {
        const long h = at == Point::zero ? k.first - k.second : k.second - k.first;
        auto it = lowest.find(k.second);
        if (it == lowest.end() || h < it->second) {
            lowest[k.second] = h;
        }
    }
    long ymin = lowest.begin()->second;
    for (const auto& [x, y] : lowest) {
        ymin = std::min(ymin, y);
    }
    long xstar = 0;
    for (const auto& [x, y] : lowest) {
        if (y == ymin) {
            xstar = x;
        }
    }
    std::vector<NewtonSlope> out;
    if (xstar > lowest.begin()->first) {
        out.push_back({Rational(0), xstar - lowest.begin()->first});
    }
    // lower hull of the points right of xstar
    std::vector<std::pair<long, long>> hull;
    for (auto it = lowest.find(xstar); it != lowest.end(); ++it) {
        const std::pair<long, long> p = *it;
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& b = hull.back();
            const long cross = (b.first - o.first) * (p.second - o.second) - (b.second - o.second) * (p.first - o.first);
            if (cross > 0) {
                break;
            }
            hull.pop_back();
        }
        hull.push_back(p);
    }
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const long dx = hull[i].first - hull[i - 1].first;
        out.push_back({make_rational(hull[i].second - hull[i - 1].second, dx), dx});
    }
    return out;
}

WeylOperator ramify_operator(const WeylOperator& a, const FieldElement& c, long k, const std::string& var) {
    if (c.is_zero() || k < 1) {
        throw DomainError("ramification x = c y^k needs c != 0 and k >= 1");
    }
    const WeylOperator theta = WeylOperator::euler(var).scaled(FieldElement(make_rational(1, k)));
    WeylOperator out(var);
    for (const auto& [key, v] : a.terms()) {
        const auto [m, n] = key;
        // x^m d^n = x^{m-n} theta (theta - 1) ... (theta - n + 1)
        WeylOperator term = WeylOperator::monomial(v * c.pow(m - n), k * (m - n), 0, var);
        for (long i = 0; i < n; ++i) {
            term = term * (theta - WeylOperator::constant(FieldElement(i), var));
        }
        out = out + term;
    }
    return out;
}

WeylOperator twist_operator(const WeylOperator& a, const LaurentSeries& phi) {
    WeylOperator shifted_d = WeylOperator::d(1, a.var());
    const LaurentSeries dphi = phi.derivative();
    for (const auto& [k, c] : dphi.terms()) {
        shifted_d = shifted_d + WeylOperator::monomial(c, k, 0, a.var());
    }
    WeylOperator out(a.var());
    for (const auto& [key, v] : a.terms()) {
        out = out + WeylOperator::monomial(v, key.first, 0, a.var()) * shifted_d.pow(key.second);
    }
    return out;
}

RegularResidue regular_residue(const WeylOperator& a, long shift) {
    WeylOperator weight_zero(a.var());
    for (const auto& [key, v] : a.terms()) {
        const long m = key.first - shift;
        if (m < 0) {
            throw DomainError("operator is not divisible by " + a.var() + "^" + std::to_string(shift) +
                              " (term of degree " + std::to_string(key.first) + ")");
        }
        if (m < key.second) {
            throw DomainError("operator still has an irregular part after the twist");
        }
        if (m == key.second) {
            weight_zero = weight_zero + WeylOperator::monomial(v, m, key.second, a.var());
        }
    }
    // x^n d^n = theta (theta - 1) ... (theta - n + 1), as coefficients of theta^0..theta^n
    std::vector<FieldElement> poly(1, FieldElement());
    for (const auto& [key, v] : weight_zero.terms()) {
        std::vector<FieldElement> falling{FieldElement(1)};
        for (long i = 0; i < key.second; ++i) {
            std::vector<FieldElement> next(falling.size() + 1);
            for (std::size_t j = 0; j < falling.size(); ++j) {
                next[j + 1] += falling[j];
                next[j] -= falling[j] * FieldElement(i);
            }
            falling = std::move(next);
        }
        if (poly.size() < falling.size()) {
            poly.resize(falling.size());
        }
        for (std::size_t j = 0; j < falling.size(); ++j) {
            poly[j] += falling[j] * v;
        }
    }
    while (poly.size() > 1 && poly.back().is_zero()) {
        poly.pop_back();
    }
    if (poly.size() != 2) {
        throw DomainError("indicial polynomial has degree " + std::to_string(poly.size() - 1) + ", expected 1");
    }
    RegularResidue out;
    out.leading = poly[1];
    out.residue = -poly[0] * poly[1].inverse();
    out.regular_part = weight_zero;
    if (out.residue.is_rational()) {
        const Rational r = out.residue.to_rational();
        const long den = r.get_den().get_si();
        long num = r.get_num().get_si() % den;
        if (num < 0) {
            num += den;
        }
        out.monodromy = FieldElement::zeta(den, num);
    }
    return out;
}

// ---------------------------------------------------------------- oracle

bool OracleReport::passed() const {
    return !stages.empty() && std::all_of(stages.begin(), stages.end(), [](const OracleStage& s) { return s.ok; });
}

std::string OracleReport::to_string() const {
    std::string out = "oracle a=" + a.to_string() + " q=" + std::to_string(q) + ": " + (passed() ? "PASS" : "FAIL") + "\n";
    for (const auto& s : stages) {
        out += "  " + s.name + ": " + (s.ok ? "ok" : "MISMATCH") + "  expected " + s.expected + "  got " + s.actual +
               "\n";
    }
    return out;
}

namespace {

std::string slopes_string(const std::vector<NewtonSlope>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + rational_string(v[i].slope) + " x" + std::to_string(v[i].length);
    }
    return out + "]";
}

bool same_slopes(const std::vector<NewtonSlope>& a, const std::vector<NewtonSlope>& b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(),
                      [](const NewtonSlope& x, const NewtonSlope& y) { return x.slope == y.slope && x.length == y.length; });
}

} // namespace

OracleReport oracle_check(const FieldElement& a, long q) {
    if (a.is_zero() || q < 1) {
        throw DomainError("oracle needs a != 0 and q >= 1");
    }
    OracleReport rep;
    rep.a = a;
    rep.q = q;
    const FieldElement qa = a * FieldElement(q);
    const ElementaryConnection closed = fourier_0_inf(
        ElementaryConnection(RamificationMap(), LaurentSeries::monomial(a, -q), RegularPart::trivial()), Sign::minus);
    auto stage = [&](std::string name, std::string expected, std::string actual, bool ok) {
        rep.stages.push_back({std::move(name), std::move(expected), std::move(actual), ok});
        return ok;
    };

    // t^q t d_t + q a
    const WeylOperator op = WeylOperator::monomial(FieldElement(1), q + 1, 1, "t") + WeylOperator::constant(qa, "t");
    const LaplaceResult lap = laplace_substitute(op);
    const WeylOperator t2d = WeylOperator::monomial(FieldElement(1), 2, 1, "theta");
    const WeylOperator reference = t2d.pow(q) * (WeylOperator::euler("theta") - WeylOperator::constant(FieldElement(1), "theta")) +
                                   WeylOperator::constant(qa, "theta");
    if (!stage("laplace", reference.to_string(), lap.op.to_string(), lap.shift == 0 && lap.op == reference)) {
        return rep;
    }

    const auto slopes = newton_polygon_slopes(lap.op);
    const std::vector<NewtonSlope> expected_slopes{{make_rational(closed.q(), closed.p()), closed.p() * closed.r()}};
    if (!stage("newton slope", slopes_string(expected_slopes), slopes_string(slopes), same_slopes(slopes, expected_slopes))) {
        return rep;
    }
    const long order = slopes.front().slope.get_den().get_si();
    if (!stage("ramification order", std::to_string(closed.p()), std::to_string(order), order == closed.p())) {
        return rep;
    }

    // theta = c eta^{q+1} with c the leading coefficient of the closed-form rho_hat
    const FieldElement c = closed.rho().leading();
    const WeylOperator ramified = ramify_operator(lap.op, c, order);
    WeylOperator product = WeylOperator::constant(FieldElement(1), "eta");
    for (long k = 1; k <= q + 1; ++k) {
        product = product * (WeylOperator::monomial(FieldElement(1), q + 1, 1, "eta") -
                             WeylOperator::monomial(FieldElement(k), q, 0, "eta"));
    }
    const FieldElement constant = FieldElement(q % 2 ? -1 : 1) * (qa * FieldElement(q + 1)).pow(q + 1);
    const WeylOperator displayed = product + WeylOperator::constant(constant, "eta");
    const auto multiplier = displayed.proportional(ramified);
    const auto ramified_slopes = newton_polygon_slopes(ramified);
    const bool integral = ramified_slopes.size() == 1 && ramified_slopes[0].slope == q;
    if (!stage("ramified operator", displayed.to_string() + " up to a constant, slope " + std::to_string(q),
               multiplier ? "multiplier " + multiplier->to_string() + ", slopes " + slopes_string(ramified_slopes)
                          : ramified.to_string(),
               multiplier.has_value() && integral)) {
        return rep;
    }
    const WeylOperator normalized = ramified.scaled(multiplier->inverse());

    // lambda^{q+1} forced by the vanishing of the constant term after the twist
    const FieldElement lambda = closed.phi().coeff(-q);
    const FieldElement forced = -normalized.coeff(0, 0) * FieldElement(-q).pow(q + 1).inverse();
    stage("twist coefficient", "lambda^" + std::to_string(q + 1) + " = " + lambda.pow(q + 1).to_string(), forced.to_string(),
          forced == lambda.pow(q + 1));
    const WeylOperator twisted = twist_operator(normalized, LaurentSeries::monomial(lambda, -q, "eta"));
    if (!stage("twisted constant term", "0", twisted.coeff(0, 0).to_string(), twisted.coeff(0, 0).is_zero())) {
        return rep;
    }

    RegularResidue res;
    try {
        res = regular_residue(twisted, q);
    } catch (const DomainError& e) {
        stage("regular part", "first-order operator after dividing by eta^" + std::to_string(q), e.what(), false);
        return rep;
    }
    const FieldElement lead = (-qa * FieldElement(q + 1)).pow(q) * FieldElement(q + 1);
    stage("regular part", lead.to_string() + "*(eta*deta - " + rational_string(make_rational(q + 2, 2)) + ")",
          res.leading.to_string() + "*(eta*deta - " + res.residue.to_string() + ")",
          res.leading == lead && res.residue == FieldElement(make_rational(q + 2, 2)));
    const FieldElement mono = closed.reg().blocks().front().eigenvalue;
    stage("monodromy", eigenvalue_string(mono), res.monodromy ? eigenvalue_string(*res.monodromy) : "irrational residue",
          res.monodromy && *res.monodromy == mono);
    return rep;
}

} // namespace stphase
