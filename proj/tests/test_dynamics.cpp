#include <map>
#include <random>

#include "arbor/conjugacy.hpp"
#include "arbor/dynamics.hpp"
#include "doctest.h"

using namespace arbor;

namespace {

// Naive oracle: walk p_1 = c, p_{i+1} = p_i^2 + c mod p, remembering every value.
std::pair<int, int> naive_mod_p(std::uint64_t c, std::uint64_t p) {
    std::map<std::uint64_t, int> seen;
    std::uint64_t x = c % p;
    for (int i = 1;; ++i) {
        auto it = seen.find(x);
        if (it != seen.end()) return {it->second - 1, i - 1};
        seen[x] = i;
        x = (x * x + c) % p;
    }
}

Rational f(const Rational& x, const Rational& c) { return x * x + c; }

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("fields") {
    CHECK(FieldSpec::parse("Q").rational);
    CHECK(FieldSpec::parse("F_7").p == 7);
    CHECK(FieldSpec::parse("F7").p == 7);
    CHECK(*FieldSpec::PrimeField(3, 9).q == 9);
    CHECK_THROWS(FieldSpec::PrimeField(2));
    CHECK_THROWS(FieldSpec::PrimeField(9));
    CHECK_THROWS(FieldSpec::PrimeField(3, 12));
    CHECK_THROWS(FieldSpec::parse("R"));
    CHECK_THROWS(FieldSpec::parse("Q", 9));
}

TEST_CASE("classification examples") {
    OrbitClass o = critical_orbit("0", FieldSpec::Rationals());
    CHECK(o.kind == OrbitKind::Periodic);
    CHECK(o.r == 1);
    o = critical_orbit("-1", FieldSpec::Rationals());
    CHECK(o.kind == OrbitKind::Periodic);
    CHECK(o.r == 2);
    CHECK(o.orbit == std::vector<std::string>{"-1", "0"});
    o = critical_orbit("-2", FieldSpec::Rationals());
    CHECK(o.kind == OrbitKind::StrictlyPrePeriodic);
    CHECK((o.s == 1 && o.r == 2));
    o = critical_orbit("1", FieldSpec::PrimeField(3));
    CHECK(o.kind == OrbitKind::StrictlyPrePeriodic);
    CHECK((o.s == 1 && o.r == 2));
    CHECK(critical_orbit("1 mod 3", FieldSpec::PrimeField(3)).r == 2);
    CHECK_THROWS(critical_orbit("1 mod 5", FieldSpec::PrimeField(3)));
    CHECK_THROWS(critical_orbit("1 mod 3", FieldSpec::Rationals()));
    o = critical_orbit("1", FieldSpec::Rationals());
    CHECK(o.kind == OrbitKind::InfiniteCertified);
    CHECK(o.escape_index == 3);  // 1, 2, 5: 5 >= 1 + 2
    CHECK(o.kind_name() == "infinite");
    CHECK_FALSE(o.group_case().has_value());
    CHECK(critical_orbit("-2", FieldSpec::Rationals()).group_case() == GroupCase::PrePeriodic(1, 2));
    CHECK(critical_orbit("1/4", FieldSpec::Rationals(), 8).kind == OrbitKind::Unresolved);
    CHECK_THROWS(critical_orbit("1/0", FieldSpec::Rationals()));
    CHECK_THROWS(critical_orbit("x", FieldSpec::Rationals()));
    CHECK(critical_orbit("1/2", FieldSpec::PrimeField(5)).kind != OrbitKind::Unresolved);
}

TEST_CASE("orbits satisfy their recurrences over Q") {
    for (int num = -40; num <= 40; ++num)
        for (int den : {1, 2, 3, 4, 16}) {
            Rational c(num, den);
            OrbitClass o = critical_orbit_rational(c, 40);
            if (o.kind == OrbitKind::Periodic || o.kind == OrbitKind::StrictlyPrePeriodic) {
                std::vector<Rational> p = {c};
                for (int i = 1; i <= o.r; ++i) p.push_back(f(p.back(), c));
                CHECK(p[o.r] == p[o.s]);  // p_{r+1} = p_{s+1}
                for (int i = 0; i < o.r; ++i)
                    for (int j = i + 1; j < o.r; ++j) CHECK(p[i] != p[j]);
            }
            if (o.kind == OrbitKind::InfiniteCertified) {
                Rational x = c;
                for (int i = 1; i < o.escape_index; ++i) x = f(x, c);
                for (int j = 0; j <= 5; ++j) {
                    Rational y = f(x, c);
                    CHECK(abs(y) > abs(x));
                    x = y;
                }
            }
        }
}

TEST_CASE("F_p classification matches the naive walk") {
    std::mt19937_64 rng(40);
    for (std::uint64_t p : {3, 5, 7, 11, 13, 101, 1009, 65537}) {
        for (int t = 0; t < 40; ++t) {
            std::uint64_t c = rng() % p;
            OrbitClass o = critical_orbit_mod_p(c, p);
            auto [s, r] = naive_mod_p(c, p);
            CHECK(o.s == s);
            CHECK(o.r == r);
            CHECK(o.kind == (s == 0 ? OrbitKind::Periodic : OrbitKind::StrictlyPrePeriodic));
        }
    }
    // Large prime: Brent needs no table.
    OrbitClass big = critical_orbit_mod_p(5, 1000000007);
    CHECK(big.r > big.s);
}

TEST_CASE("normal form") {
    // 2x^2 + 4x + 1 is conjugate to x^2 + (2 + 2 - 4) = x^2.
    CHECK(normalize_quadratic(2, 4, 1) == 0);
    CHECK(normalize_quadratic(1, 0, Rational(-3, 4)) == Rational(-3, 4));
    CHECK_THROWS(normalize_quadratic(0, 1, 1));
}

TEST_CASE("model generators and b_infinity") {
    OrbitClass p2 = critical_orbit("-1", FieldSpec::Rationals());
    auto m = model_generators(p2);
    CHECK(m.generator_portraits(6) == periodic_generators(2).generator_portraits(6));
    OrbitClass o13;
    o13.kind = OrbitKind::StrictlyPrePeriodic;
    o13.s = 1;
    o13.r = 3;
    CHECK(model_generators(o13).generator_portraits(6) == preperiodic_generators(1, 3).generator_portraits(6));
    OrbitClass inf = critical_orbit("1", FieldSpec::Rationals());
    auto chain = model_generators(inf, 6).generator_portraits(6);
    for (int n = 1; n <= 6; ++n) CHECK(sign_image_is_full(chain, n));
    CHECK(is_odometer_to_level(b_infinity(p2, 8)));
    OrbitClass p1 = critical_orbit("0", FieldSpec::Rationals());
    CHECK(b_infinity(p1, 5) == invert(standard_odometer().eval("a", 5)));
    OrbitClass o23;
    o23.kind = OrbitKind::StrictlyPrePeriodic;
    o23.s = 2;
    o23.r = 3;
    CHECK(is_odometer_to_level(b_infinity(o23, 8)));
    OrbitClass un;
    CHECK_THROWS(model_generators(un));
    CHECK_THROWS(b_infinity(un, 3));
    CHECK_THROWS(b_infinity(inf, 3));
}

TEST_CASE("periodic labels") {
    CHECK(periodic_coset_label(3, TwoAdic::make(1)).is_identity());
    CosetLabel l = periodic_coset_label(3, TwoAdic::make(5));
    REQUIRE(l.diagonal.size() == 3);
    for (const auto& k : l.diagonal) CHECK(k.residue() == 5);
    CHECK_THROWS(periodic_coset_label(2, TwoAdic::make(4)));
    std::mt19937_64 rng(41);
    for (int t = 0; t < 100; ++t) {
        TwoAdic a = TwoAdic::make(static_cast<std::int64_t>(rng() | 1)), b = TwoAdic::make(static_cast<std::int64_t>(rng() | 1));
        CHECK(periodic_coset_label(2, a) * periodic_coset_label(2, b) == periodic_coset_label(2, a * b));
    }
}

TEST_CASE("pre-periodic labels") {
    CosetLabel l24 = prep_coset_label(2, 4, TwoAdic::make(3));
    CHECK(l24.tail == 1);
    CHECK_FALSE(l24.is_identity());
    CHECK(prep_coset_label(1, 3, TwoAdic::make(7)).is_identity());
    CosetLabel l23 = prep_coset_label(2, 3, TwoAdic::make(3));
    CHECK(l23.head == std::vector<int>{1});
    CHECK(l23.tail == 1);
    CHECK(prep_coset_label(1, 2, TwoAdic::make(-1)).is_identity());
    CHECK_THROWS(prep_coset_label(2, 3, TwoAdic::make(4)));
    CHECK_THROWS(prep_coset_label(2, 3, TwoAdic::make(3, 2)));
    CHECK_THROWS(prep_coset_label(3, 3, TwoAdic::make(3)));
    // Kernels, exhaustively mod 16.
    for (int k = 1; k < 16; k += 2) {
        TwoAdic t = TwoAdic::make(k, 4);
        CHECK(prep_coset_label(2, 4, t).is_identity() == (k % 4 == 1));
        CHECK(prep_coset_label(3, 6, t).is_identity() == (k % 4 == 1));
        CHECK(prep_coset_label(1, 3, t).is_identity() == (k % 8 == 1 || k % 8 == 7));
        CHECK(prep_coset_label(1, 5, t).is_identity() == (k % 8 == 1 || k % 8 == 7));
        CHECK(prep_coset_label(2, 3, t).is_identity() == (k % 8 == 1));
    }
    std::mt19937_64 rng(42);
    for (auto [s, r] : std::vector<std::pair<int, int>>{{2, 4}, {1, 3}, {2, 3}, {1, 2}})
        for (int t = 0; t < 100; ++t) {
            TwoAdic a = TwoAdic::make(static_cast<std::int64_t>(rng() | 1)), b = TwoAdic::make(static_cast<std::int64_t>(rng() | 1));
            CHECK(prep_coset_label(s, r, a) * prep_coset_label(s, r, b) == prep_coset_label(s, r, a * b));
        }
}

TEST_CASE("arithmetic reports") {
    OrbitClass o12 = critical_orbit("-2", FieldSpec::Rationals());
    ArithReport r = arith_description(o12, FieldSpec::PrimeField(7, 49));
    CHECK(r.structure == "Z2^x/{+-1}");
    REQUIRE(r.label.has_value());
    CHECK(r.label->kind == CosetLabel::Kind::Dihedral);
    CHECK(r.label->dihedral.residue() == 49);
    OrbitClass o23;
    o23.kind = OrbitKind::StrictlyPrePeriodic;
    o23.s = 2;
    o23.r = 3;
    ArithReport r23 = arith_description(o23, FieldSpec::PrimeField(3, 9));
    CHECK(r23.label->is_identity());
    CHECK(r23.quotient_order == 1);
    CHECK(r23.index_bound == "divides 4");
    CHECK(arith_description(o23, FieldSpec::Rationals()).quotient_order == 4);
    ArithReport ri = arith_description(critical_orbit("1", FieldSpec::Rationals()), FieldSpec::Rationals());
    CHECK(ri.structure == "full W");
    OrbitClass o13;
    o13.kind = OrbitKind::StrictlyPrePeriodic;
    o13.s = 1;
    o13.r = 3;
    CHECK(arith_description(o13, FieldSpec::PrimeField(7)).quotient_order == 1);
    CHECK(arith_description(o13, FieldSpec::PrimeField(5)).quotient_order == 2);
    CHECK_THROWS(arith_description(OrbitClass{}, FieldSpec::Rationals()));
}

}
