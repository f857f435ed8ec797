#ifndef ARBOR_TWO_ADIC_HPP
#define ARBOR_TWO_ADIC_HPP

#include <cstdint>
#include <string>

namespace arbor {

// Truncated 2-adic integer: residue mod 2^precision, 1 <= precision <= 64.
class TwoAdic {
public:
    static constexpr int kDefaultPrecision = 16;
    static constexpr int kMaxPrecision = 64;

    TwoAdic() = default;
    TwoAdic(std::int64_t value, int precision);

    static TwoAdic make(std::int64_t value, int precision = kDefaultPrecision) { return {value, precision}; }
    // Exact integer exponent: full 64-bit precision.
    static TwoAdic integer(std::int64_t value) { return {value, kMaxPrecision}; }

    int precision() const { return precision_; }
    std::uint64_t residue() const { return residue_; }
    bool is_unit() const { return (residue_ & 1u) != 0; }
    bool is_zero() const { return residue_ == 0; }

    // Residue mod 2^m for m <= precision.
    std::uint64_t residue_mod(int m) const;
    // Same value at lower precision.
    TwoAdic reduce(int m) const;

    TwoAdic operator+(const TwoAdic& o) const;
    TwoAdic operator-(const TwoAdic& o) const;
    TwoAdic operator-() const;
    TwoAdic operator*(const TwoAdic& o) const;
    bool operator==(const TwoAdic& o) const = default;

    TwoAdic inverse() const;
    // (k - 1) / 2, one bit of precision lost.
    TwoAdic half_pred() const;

    std::string str() const;

private:
    std::uint64_t residue_ = 0;
    int precision_ = kMaxPrecision;
};

TwoAdic mul(const TwoAdic& a, const TwoAdic& b);
TwoAdic inverse(const TwoAdic& a);
int theta1(const TwoAdic& k);
int theta2(const TwoAdic& k);

}  // namespace arbor

#endif
