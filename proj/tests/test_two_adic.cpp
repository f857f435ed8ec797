#include <random>

#include "arbor/two_adic.hpp"
#include "doctest.h"

using arbor::TwoAdic;

TEST_SUITE("two_adic") {

TEST_CASE("reduction and precision") {
    TwoAdic a = TwoAdic::make(-1, 8);
    CHECK(a.residue() == 255);
    CHECK(a.precision() == 8);
    CHECK(a.is_unit());
    CHECK(TwoAdic::make(16, 4).is_zero());
    CHECK(a.residue_mod(3) == 7);
    CHECK_THROWS(a.residue_mod(9));
    CHECK_THROWS(TwoAdic(1, 0));
    CHECK_THROWS(TwoAdic(1, 65));
}

TEST_CASE("arithmetic takes the lower precision") {
    TwoAdic a = TwoAdic::make(13, 10), b = TwoAdic::make(7, 6);
    CHECK((a * b).precision() == 6);
    CHECK((a * b).residue() == (13 * 7) % 64);
    CHECK((a + b).residue() == 20);
    CHECK((a - b).residue() == 6);
    CHECK((-TwoAdic::make(1, 5)).residue() == 31);
}

TEST_CASE("inverse") {
    CHECK((TwoAdic::make(3, 10) * TwoAdic::make(3, 10).inverse()).residue() == 1);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 1000; ++t) {
        int m = 1 + static_cast<int>(rng() % 64);
        TwoAdic k = TwoAdic::make(static_cast<std::int64_t>(rng() | 1), m);
        CHECK((k * k.inverse()).residue() == 1);
    }
    CHECK_THROWS(TwoAdic::make(4, 8).inverse());
}

TEST_CASE("theta maps") {
    CHECK(arbor::theta1(TwoAdic::make(3)) == 1);
    CHECK(arbor::theta1(TwoAdic::make(5)) == 0);
    CHECK(arbor::theta2(TwoAdic::make(7)) == 0);
    CHECK(arbor::theta2(TwoAdic::make(3)) == 1);
    CHECK_THROWS(arbor::theta1(TwoAdic::make(2)));
    CHECK_THROWS(arbor::theta2(TwoAdic::make(3, 2)));
    // Both are homomorphisms to F2; compare with direct integer formulas.
    for (std::int64_t k = 1; k < 256; k += 2) {
        TwoAdic t = TwoAdic::make(k, 8);
        CHECK(arbor::theta1(t) == ((k - 1) / 2) % 2);
        CHECK(arbor::theta2(t) == ((k * k - 1) / 8) % 2);
        for (std::int64_t j = 1; j < 32; j += 2) {
            TwoAdic u = TwoAdic::make(j, 8);
            CHECK(arbor::theta1(t * u) == (arbor::theta1(t) ^ arbor::theta1(u)));
            CHECK(arbor::theta2(t * u) == (arbor::theta2(t) ^ arbor::theta2(u)));
        }
    }
}

TEST_CASE("half predecessor") {
    TwoAdic l = TwoAdic::make(11, 8).half_pred();
    CHECK(l.residue() == 5);
    CHECK(l.precision() == 7);
    CHECK_THROWS(TwoAdic::make(10, 8).half_pred());
}

}
