#include "stphase/regular.hpp"

#include "stphase/errors.hpp"

#include <algorithm>

namespace stphase {

RegularPart::RegularPart(std::vector<JordanBlock> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_) {
        if (b.eigenvalue.is_zero()) {
            throw DomainError("monodromy eigenvalues must be nonzero");
        }
        if (b.size < 1) {
            throw DomainError("Jordan block sizes must be positive");
        }
    }
    std::sort(blocks_.begin(), blocks_.end(), [](const JordanBlock& x, const JordanBlock& y) {
        const int c = x.eigenvalue.compare(y.eigenvalue);
        if (c != 0) {
            return c < 0;
        }
        return x.size > y.size;
    });
}

RegularPart RegularPart::trivial(long rank) {
    return RegularPart(std::vector<JordanBlock>(rank, JordanBlock{FieldElement(1), 1}));
}

long RegularPart::rank() const {
    long r = 0;
    for (const auto& b : blocks_) {
        r += b.size;
    }
    return r;
}

RegularPart RegularPart::dual() const {
    std::vector<JordanBlock> out;
    for (const auto& b : blocks_) {
        out.push_back({b.eigenvalue.inverse(), b.size});
    }
    return RegularPart(std::move(out));
}

RegularPart RegularPart::pullback(long d) const {
    std::vector<JordanBlock> out;
    for (const auto& b : blocks_) {
        out.push_back({b.eigenvalue.pow(d), b.size});
    }
    return RegularPart(std::move(out));
}

RegularPart RegularPart::twisted(const FieldElement& c) const {
    std::vector<JordanBlock> out;
    for (const auto& b : blocks_) {
        out.push_back({b.eigenvalue * c, b.size});
    }
    return RegularPart(std::move(out));
}

FieldElement RegularPart::determinant() const {
    FieldElement d(1);
    for (const auto& b : blocks_) {
        d *= b.eigenvalue.pow(b.size);
    }
    return d;
}

RegularPart RegularPart::operator+(const RegularPart& o) const {
    std::vector<JordanBlock> out = blocks_;
    out.insert(out.end(), o.blocks_.begin(), o.blocks_.end());
    return RegularPart(std::move(out));
}

bool RegularPart::operator==(const RegularPart& o) const {
    if (blocks_.size() != o.blocks_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].size != o.blocks_[i].size || blocks_[i].eigenvalue != o.blocks_[i].eigenvalue) {
            return false;
        }
    }
    return true;
}

std::string eigenvalue_string(const FieldElement& e) {
    if (e.is_integer()) {
        return e.to_rational().get_num().get_str();
    }
    return e.to_string();
}

std::string RegularPart::to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        out += (i ? ", (" : "(") + eigenvalue_string(blocks_[i].eigenvalue) + ":" + std::to_string(blocks_[i].size) + ")";
    }
    return out + "]";
}

RegularPart jordan_tensor(const RegularPart& a, const RegularPart& b) {
    std::vector<JordanBlock> out;
    for (const auto& x : a.blocks()) {
        for (const auto& y : b.blocks()) {
            const FieldElement prod = x.eigenvalue * y.eigenvalue;
            for (long k = 1; k <= std::min(x.size, y.size); ++k) {
                out.push_back({prod, x.size + y.size + 1 - 2 * k});
            }
        }
    }
    return RegularPart(std::move(out));
}

RegularPart pushforward_monodromy(const RegularPart& j, long p) {
    if (p < 1) {
        throw DomainError("push-forward degree must be positive");
    }
    if (p == 1) {
        return j;
    }
    std::vector<JordanBlock> out;
    for (const auto& b : j.blocks()) {
        const FieldElement root = FieldElement::root(b.eigenvalue, p);
        for (long k = 0; k < p; ++k) {
            out.push_back({root * FieldElement::zeta(p, k), b.size});
        }
    }
    return RegularPart(std::move(out));
}

long dim_centralizer(const RegularPart& j) {
    long total = 0;
    const auto& bl = j.blocks();
    for (std::size_t i = 0; i < bl.size(); ++i) {
        for (std::size_t k = 0; k < bl.size(); ++k) {
            if (bl[i].eigenvalue == bl[k].eigenvalue) {
                total += std::min(bl[i].size, bl[k].size);
            }
        }
    }
    return total;
}

long dim_fixed(const RegularPart& j) {
    long n = 0;
    for (const auto& b : j.blocks()) {
        if (b.eigenvalue.is_one()) {
            ++n;
        }
    }
    return n;
}

} // namespace stphase
