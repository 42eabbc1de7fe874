#pragma once

#include "stphase/field.hpp"

#include <string>
#include <vector>

namespace stphase {

struct JordanBlock {
    FieldElement eigenvalue;
    long size = 1;
};

// Jordan data of a formal monodromy. Blocks are kept in a canonical order, so == is multiset equality.
class RegularPart {
public:
    RegularPart() = default;
    explicit RegularPart(std::vector<JordanBlock> blocks);

    static RegularPart trivial(long rank = 1);

    const std::vector<JordanBlock>& blocks() const { return blocks_; }
    long rank() const;
    bool empty() const { return blocks_.empty(); }

    RegularPart dual() const;
    // Eigenvalues raised to the d-th power (pull-back along a degree-d ramification of the base).
    RegularPart pullback(long d) const;
    // Eigenvalues multiplied by c.
    RegularPart twisted(const FieldElement& c) const;
    FieldElement determinant() const;

    RegularPart operator+(const RegularPart& o) const;
    bool operator==(const RegularPart& o) const;
    bool operator!=(const RegularPart& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    std::vector<JordanBlock> blocks_;
};

// Jordan form of the Kronecker product.
RegularPart jordan_tensor(const RegularPart& a, const RegularPart& b);
// Monodromy of the push-forward along u -> u^p: T^{1/p} (x) cyclic permutation.
RegularPart pushforward_monodromy(const RegularPart& j, long p);
// dim of the commutant of T.
long dim_centralizer(const RegularPart& j);
// dim ker(T - Id).
long dim_fixed(const RegularPart& j);

std::string eigenvalue_string(const FieldElement& e);

} // namespace stphase
