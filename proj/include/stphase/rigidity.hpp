#pragma once

#include "stphase/fourier.hpp"

#include <string>
#include <vector>

namespace stphase {

// dim Z(psiT) - dim Z(phiT); InvariantError if it differs from kappa^2.
long zmin_defect(const RegularGermData& g);

enum class IndexFormula {
    // r^2 chi + sum irr End + sum_i p_i dim Z(T_i), term by term as printed.
    as_printed,
    // r^2 chi - sum irr End + sum_i dim ker(rho_{i,+} Ad(T_i) - Id).
    corrected,
};

struct PointTerms {
    std::string label;
    long rank = 0;
    long irregularity_end = 0;
    long centralizer_term = 0;
};

struct RigidityReport {
    long index = 0;
    long rank = 0;
    long euler_characteristic = 0;
    std::vector<PointTerms> points;
};

// Global index of End on a curve of genus `genus` minus the given points. Local data must be minimal.
RigidityReport rigidity_index(const std::vector<SingularityDatum>& data, long genus = 0,
                              IndexFormula formula = IndexFormula::as_printed, const Settings& s = {});

struct Discrepancy {
    long z = 0;
    long z_hat = 0;
    long rhs = 0;

    long value() const { return z - z_hat - rhs; }
};

// Z - Z_hat computed from centralizer sums of both sides, against the closed form in kappa, q and dim Z.
// `data_hat` describes the Laplace transform of `data` under `sign`; the germs at infinity are checked
// against the stationary-phase assembly (DomainError on a mismatch).
Discrepancy z_zhat_discrepancy(const std::vector<SingularityDatum>& data, const std::vector<SingularityDatum>& data_hat,
                               Sign sign, const Settings& s = {});

} // namespace stphase
