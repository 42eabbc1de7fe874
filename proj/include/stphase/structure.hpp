#pragma once

#include "stphase/connection.hpp"

#include <vector>

namespace stphase {

ElementaryConnection dual(const ElementaryConnection& el);

// The d = gcd(p1, p2) summands El(w^{p1 p2/d}, phi^(k), R) before canonicalization.
// Inputs are normalized first; reparametrizations are appended to `log`.
FormalConnection tensor_summands(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s = {},
                                 Provenance* log = nullptr);
FormalConnection tensor(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s = {},
                        Provenance* log = nullptr);

FormalConnection hom_summands(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s = {},
                              Provenance* log = nullptr);
FormalConnection hom(const ElementaryConnection& a, const ElementaryConnection& b, const Settings& s = {},
                     Provenance* log = nullptr);

// Distributes over direct sums.
FormalConnection tensor(const FormalConnection& a, const FormalConnection& b, const Settings& s = {});
FormalConnection hom(const FormalConnection& a, const FormalConnection& b, const Settings& s = {});
FormalConnection dual(const FormalConnection& m);

// One entry per summand of the canonical form: the monodromy of rho_+ End(R).
std::vector<RegularPart> end_regular_part(const FormalConnection& m, const Settings& s = {});

// Rank-one connection over t: exponential factor r * Tr(phi), monodromy det(R) (-1)^{(p-1) r}.
ElementaryConnection determinant(const ElementaryConnection& el, const Settings& s = {});
ElementaryConnection determinant(const FormalConnection& m, const Settings& s = {});

// Residue-level form of the determinant's regular part when every eigenvalue is exp(2 pi i a) with
// rational a: sum of residues + (p-1) r / 2, as a rational. Empty when some eigenvalue is not of that form.
std::optional<Rational> determinant_residue(const ElementaryConnection& el, const Settings& s = {});

} // namespace stphase
