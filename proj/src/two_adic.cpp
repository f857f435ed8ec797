#include "arbor/two_adic.hpp"

#include <algorithm>
#include <stdexcept>

namespace arbor {

namespace {

std::uint64_t mask_for(int m) {
    return m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
}

}  // namespace

TwoAdic::TwoAdic(std::int64_t value, int precision) : precision_(precision) {
    if (precision < 1 || precision > kMaxPrecision)
        throw std::invalid_argument("TwoAdic precision must be in [1, 64]");
    residue_ = static_cast<std::uint64_t>(value) & mask_for(precision);
}

std::uint64_t TwoAdic::residue_mod(int m) const {
    if (m > precision_) throw std::domain_error("TwoAdic: requested bits exceed precision");
    return residue_ & mask_for(m);
}

TwoAdic TwoAdic::reduce(int m) const {
    TwoAdic t;
    t.precision_ = std::min(m, precision_);
    if (t.precision_ < 1) throw std::invalid_argument("TwoAdic precision must be positive");
    t.residue_ = residue_ & mask_for(t.precision_);
    return t;
}

TwoAdic TwoAdic::operator+(const TwoAdic& o) const {
    TwoAdic t;
    t.precision_ = std::min(precision_, o.precision_);
    t.residue_ = (residue_ + o.residue_) & mask_for(t.precision_);
    return t;
}

TwoAdic TwoAdic::operator-() const {
    TwoAdic t;
    t.precision_ = precision_;
    t.residue_ = (~residue_ + 1) & mask_for(precision_);
    return t;
}

TwoAdic TwoAdic::operator-(const TwoAdic& o) const { return *this + (-o); }

TwoAdic TwoAdic::operator*(const TwoAdic& o) const {
    TwoAdic t;
    t.precision_ = std::min(precision_, o.precision_);
    t.residue_ = (residue_ * o.residue_) & mask_for(t.precision_);
    return t;
}

TwoAdic TwoAdic::inverse() const {
    if (!is_unit()) throw std::domain_error("TwoAdic inverse requires an odd residue");
    // Newton iteration x <- x(2 - kx) doubles correct bits each step.
    std::uint64_t x = residue_;
    for (int i = 0; i < 6; ++i) x *= 2 - residue_ * x;
    TwoAdic t;
    t.precision_ = precision_;
    t.residue_ = x & mask_for(precision_);
    return t;
}

TwoAdic TwoAdic::half_pred() const {
    if (!is_unit()) throw std::domain_error("(k-1)/2 requires odd k");
    if (precision_ < 2) throw std::domain_error("(k-1)/2 needs precision >= 2");
    TwoAdic t;
    t.precision_ = precision_ - 1;
    t.residue_ = (residue_ >> 1) & mask_for(t.precision_);
    return t;
}

std::string TwoAdic::str() const {
    return std::to_string(residue_) + " mod 2^" + std::to_string(precision_);
}

TwoAdic mul(const TwoAdic& a, const TwoAdic& b) { return a * b; }
TwoAdic inverse(const TwoAdic& a) { return a.inverse(); }

int theta1(const TwoAdic& k) {
    if (!k.is_unit()) throw std::domain_error("theta1 requires odd k");
    if (k.precision() < 2) throw std::domain_error("theta1 needs precision >= 2");
    return static_cast<int>((k.residue_mod(2) >> 1) & 1u);
}

int theta2(const TwoAdic& k) {
    if (!k.is_unit()) throw std::domain_error("theta2 requires odd k");
    if (k.precision() < 3) throw std::domain_error("theta2 needs precision >= 3");
    std::uint64_t r = k.residue_mod(3);
    return static_cast<int>(((r * r - 1) >> 3) & 1u);
}

}  // namespace arbor
