#pragma once

#include "stphase/connection.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace stphase {

enum class Sign { plus, minus };

std::string sign_name(Sign s);

// Nearby-cycle data (psi, automorphism psiT) of a regular germ at a finite point.
struct RegularGermData {
    RegularPart psi;

    // Vanishing cycles with the induced automorphism: eigenvalue-1 blocks shrink by one.
    RegularPart phi() const;
    // dim ker(psiT - Id).
    long kappa() const;
};

struct SingularityDatum {
    // Empty location means the point at infinity.
    std::optional<FieldElement> location;

    // Finite points: irregular elementary summands and the regular germ.
    std::vector<ElementaryConnection> summands;
    std::optional<RegularGermData> regular;

    // Infinity: the slope decomposition, slope measured as q/p of each summand. A slope-one summand
    // El(u^p, c u^{-p} + residual, R) is recorded as (c, El(u^p, residual, R)) with residual of slope < 1.
    std::vector<ElementaryConnection> slope_above;
    std::vector<std::pair<FieldElement, ElementaryConnection>> slope_one;
    std::vector<ElementaryConnection> slope_below;

    bool at_infinity() const { return !location.has_value(); }
    // All local summands (the regular germ as an El with p = 1, slope-one pairs reassembled).
    FormalConnection local() const;
};

// Point-at-infinity datum from a germ: summands are normalized and sorted by slope.
SingularityDatum split_by_slope(const FormalConnection& germ, const Settings& s = {});

ElementaryConnection fourier_0_inf(const ElementaryConnection& el, Sign sign, const Settings& s = {});
// `plain` treats the germ as a plain regular connection (transform = psi) instead of a minimal extension.
RegularPart fourier_regular(const RegularGermData& g, bool plain = false);
ElementaryConnection fourier_inf_0(const ElementaryConnection& el, Sign sign, const Settings& s = {});
ElementaryConnection fourier_inf_inf(const ElementaryConnection& el, Sign sign, const Settings& s = {});

ElementaryConnection fourier_s_inf(const ElementaryConnection& el, const FieldElement& point, Sign sign,
                                   const Settings& s = {});
// Empty when the transformed regular part vanishes.
FormalConnection fourier_s_inf(const RegularGermData& g, const FieldElement& point, Sign sign, bool plain = false);

// Germ at infinity of the Laplace transform, from the finite singular points and the slope > 1 part at
// infinity. `minimal_extension` = false transforms regular germs in plain mode.
FormalConnection stationary_phase_at_infinity(const std::vector<SingularityDatum>& data, Sign sign,
                                              const Settings& s = {}, bool minimal_extension = true);

} // namespace stphase
