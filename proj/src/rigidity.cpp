#include "stphase/rigidity.hpp"

#include "stphase/errors.hpp"
#include "stphase/structure.hpp"

#include <algorithm>
#include <tuple>

namespace stphase {

long zmin_defect(const RegularGermData& g) {
    const long defect = dim_centralizer(g.psi) - dim_centralizer(g.phi());
    const long kappa = g.kappa();
    if (defect != kappa * kappa) {
        throw InvariantError("centralizer defect " + std::to_string(defect) + " differs from kappa^2 = " +
                             std::to_string(kappa * kappa));
    }
    return defect;
}

namespace {

std::string label(const SingularityDatum& d) {
    return d.at_infinity() ? "inf" : d.location->to_string();
}

void require_minimal(const FormalConnection& local, const std::string& where, const Settings& s) {
    for (const auto& el : local.summands) {
        if (minimal_form(el, s).p() != el.p()) {
            throw DomainError("non-minimal local data at " + where + ": " + el.to_string());
        }
    }
}

long dz(const ElementaryConnection& el) {
    return dim_centralizer(el.reg());
}

} // namespace

RigidityReport rigidity_index(const std::vector<SingularityDatum>& data, long genus, IndexFormula formula,
                              const Settings& s) {
    if (data.empty()) {
        throw DomainError("rigidity index needs at least one singular point");
    }
    RigidityReport out;
    out.euler_characteristic = 2 - 2 * genus - static_cast<long>(data.size());
    long total = 0;
    for (const auto& d : data) {
        PointTerms t;
        t.label = label(d);
        const FormalConnection local = d.local();
        require_minimal(local, t.label, s);
        t.rank = local.rank();
        if (&d == &data.front()) {
            out.rank = t.rank;
        } else if (t.rank != out.rank) {
            throw DomainError("rank " + std::to_string(t.rank) + " at " + t.label + " differs from rank " +
                              std::to_string(out.rank) + " at " + out.points.front().label);
        }
        t.irregularity_end = hom(local, local, s).irregularity();
        for (const auto& el : canonicalize(local, s).summands) {
            if (formula == IndexFormula::as_printed) {
                t.centralizer_term += el.p() * dz(el);
            } else {
                t.centralizer_term +=
                    dim_fixed(pushforward_monodromy(jordan_tensor(el.reg().dual(), el.reg()), el.p()));
            }
        }
        const long irr = formula == IndexFormula::as_printed ? t.irregularity_end : -t.irregularity_end;
        total += irr + t.centralizer_term;
        out.points.push_back(std::move(t));
    }
    out.index = out.rank * out.rank * out.euler_characteristic + total;
    return out;
}

namespace {

struct Sides {
    std::vector<SingularityDatum> finite;
    SingularityDatum infinity;
};

Sides split_points(const std::vector<SingularityDatum>& data, const char* which) {
    Sides out;
    bool seen = false;
    for (const auto& d : data) {
        if (!d.at_infinity()) {
            out.finite.push_back(d);
        } else if (seen) {
            throw DomainError(std::string("more than one point at infinity in ") + which);
        } else {
            seen = true;
            out.infinity = d;
        }
    }
    return out;
}

// Sum over all points of sum_i p_i dim Z(T_i).
long centralizer_sum(const std::vector<SingularityDatum>& data, const Settings& s) {
    long z = 0;
    for (const auto& d : data) {
        for (const auto& el : canonicalize(d.local(), s).summands) {
            z += el.p() * dz(el);
        }
    }
    return z;
}

// kappa^2 - sum_i q_i dim Z(T_i) over finite points.
long finite_terms(const std::vector<SingularityDatum>& finite, const Settings& s) {
    long out = 0;
    for (const auto& d : finite) {
        if (d.regular) {
            const long k = d.regular->kappa();
            out += k * k;
        }
        for (const auto& el : canonicalize(FormalConnection(d.summands), s).summands) {
            out -= el.q() * dz(el);
        }
    }
    return out;
}

using Shape = std::tuple<long, long, std::vector<long>>;

std::vector<Shape> shapes(const FormalConnection& m, const Settings& s) {
    std::vector<Shape> out;
    for (const auto& el : canonicalize(m, s).summands) {
        std::vector<long> sizes;
        for (const auto& b : el.reg().blocks()) {
            sizes.push_back(b.size);
        }
        std::sort(sizes.begin(), sizes.end());
        out.emplace_back(el.p(), el.q(), std::move(sizes));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SingularityDatum> sources(const Sides& side) {
    std::vector<SingularityDatum> out = side.finite;
    SingularityDatum inf;
    inf.slope_above = side.infinity.slope_above;
    out.push_back(inf);
    return out;
}

} // namespace

Discrepancy z_zhat_discrepancy(const std::vector<SingularityDatum>& data, const std::vector<SingularityDatum>& data_hat,
                               Sign sign, const Settings& s) {
    const Sides m = split_points(data, "data");
    const Sides fm = split_points(data_hat, "transformed data");

    const FormalConnection expected = stationary_phase_at_infinity(sources(m), sign, s);
    if (!is_isomorphic(expected, fm.infinity.local(), s)) {
        throw DomainError("slope bookkeeping mismatch: germ at infinity of the transform is not " +
                          expected.to_string());
    }
    const Sign back = sign == Sign::plus ? Sign::minus : Sign::plus;
    const FormalConnection returned = stationary_phase_at_infinity(sources(fm), back, s);
    if (shapes(returned, s) != shapes(m.infinity.local(), s)) {
        throw DomainError("slope bookkeeping mismatch: germ at infinity does not match the transformed finite data");
    }

    Discrepancy out;
    out.z = centralizer_sum(data, s);
    out.z_hat = centralizer_sum(data_hat, s);
    out.rhs = finite_terms(m.finite, s) - finite_terms(fm.finite, s);
    for (const auto& el : canonicalize(FormalConnection(m.infinity.slope_above), s).summands) {
        out.rhs += (2 * el.p() - el.q()) * dz(el);
    }
    return out;
}

} // namespace stphase
