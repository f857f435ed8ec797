#include <cmath>
#include <random>
#include <set>

#include "arbor/catalog.hpp"
#include "arbor/portrait.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace arbor;

TEST_SUITE("tree_core") {

TEST_CASE("identity and sigma") {
    CHECK(Portrait::identity(0).bit_count() == 0);
    CHECK(encode(Portrait::identity(0)) == "0:");
    CHECK(encode(Portrait::identity(3)) == "3:00");
    CHECK(encode(Portrait::identity(4)) == "4:0000");
    CHECK(encode(Portrait::sigma(3)) == "3:01");
    CHECK_THROWS(Portrait::sigma(0));
    CHECK_THROWS(Portrait::identity(-1));
    CHECK_THROWS(Portrait::identity(kMaxLevel + 1));
    for (int n = 1; n <= 8; ++n) {
        Portrait s = Portrait::sigma(n);
        CHECK(compose(s, s) == Portrait::identity(n));
        CHECK(invert(s) == s);
        for (int m = 1; m <= n; ++m) CHECK(sign(s, m) == (m == 1 ? -1 : 1));
    }
    std::mt19937_64 rng(1);
    Portrait p = random_element(4, rng);
    CHECK(compose(Portrait::identity(4), p) == p);
    CHECK(compose(p, Portrait::identity(4)) == p);
}

TEST_CASE("pair and decompose") {
    CHECK(Portrait::pair(Portrait::identity(0), Portrait::identity(0), true) == Portrait::sigma(1));
    CHECK(encode(Portrait::pair(Portrait::sigma(1), Portrait::identity(1), false)) == "2:02");
    CHECK_THROWS(Portrait::pair(Portrait::identity(1), Portrait::identity(2), false));
    CHECK_THROWS(Portrait::identity(0).decompose());
    std::mt19937_64 rng(2);
    for (int n = 1; n <= 9; ++n)
        for (int t = 0; t < 50; ++t) {
            Portrait u = random_element(n - 1, rng), v = random_element(n - 1, rng);
            bool b = rng() & 1;
            auto [u2, v2, b2] = Portrait::pair(u, v, b).decompose();
            CHECK(u2 == u);
            CHECK(v2 == v);
            CHECK(b2 == b);
            Portrait p = random_element(n, rng);
            auto [x, y, c] = p.decompose();
            CHECK(Portrait::pair(x, y, c) == p);
        }
}

TEST_CASE("composition rule") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 9; ++n)
        for (int t = 0; t < 40; ++t) {
            Portrait p = random_element(n, rng), q = random_element(n, rng);
            auto [p0, p1, b] = p.decompose();
            auto [q0, q1, c] = q.decompose();
            Portrait want = Portrait::pair(compose(p0, b ? q1 : q0), compose(p1, b ? q0 : q1), b != c);
            CHECK(compose(p, q) == want);
            Portrait u = random_element(n - 1, rng), v = random_element(n - 1, rng);
            Portrait s = Portrait::pair(u, v, true);
            CHECK(compose(s, s) == Portrait::pair(compose(u, v), compose(v, u), false));
        }
}

TEST_CASE("composition matches permutation composition") {
    std::mt19937_64 rng(4);
    for (int n = 0; n <= 8; ++n)
        for (int t = 0; t < 30; ++t) {
            Portrait p = random_element(n, rng), q = random_element(n, rng);
            CHECK(oracle::leaf_perm(compose(p, q)) == oracle::perm_compose(oracle::leaf_perm(p), oracle::leaf_perm(q)));
            CHECK(oracle::leaf_perm(invert(p)) ==
                  [&] {
                      auto f = oracle::leaf_perm(p);
                      std::vector<std::uint64_t> g(f.size());
                      for (std::size_t i = 0; i < f.size(); ++i) g[f[i]] = i;
                      return g;
                  }());
        }
}

TEST_CASE("group laws") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 1000; ++t) {
        Portrait a = random_element(6, rng), b = random_element(6, rng), c = random_element(6, rng);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        CHECK(compose(a, invert(a)).is_identity());
        CHECK(invert(invert(a)) == a);
    }
    for (int n : {7, 9, 12})
        for (int t = 0; t < 30; ++t) {
            Portrait a = random_element(n, rng), b = random_element(n, rng), c = random_element(n, rng);
            CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
            CHECK(compose(invert(a), a).is_identity());
        }
    CHECK(invert(Portrait::identity(5)) == Portrait::identity(5));
}

TEST_CASE("apply") {
    CHECK(apply(Portrait::sigma(2), {0, 1}) == std::vector<int>{1, 1});
    CHECK_THROWS(apply(Portrait::sigma(2), {0}));
    std::mt19937_64 rng(6);
    Portrait p = random_element(8, rng);
    std::set<std::uint64_t> img;
    for (std::uint64_t j = 0; j < 256; ++j) img.insert(apply_index(p, j));
    CHECK(img.size() == 256);
    // Standard odometer adds one with the first letter least significant.
    Portrait a = standard_odometer().eval("a", 10);
    for (std::uint64_t j = 0; j < 1024; ++j) CHECK(apply_index(a, j) == (j + 1) % 1024);
    for (int t = 0; t < 200; ++t) {
        Portrait x = random_element(7, rng), y = random_element(7, rng);
        std::uint64_t w = rng() % 128;
        CHECK(apply_index(compose(x, y), w) == apply_index(x, apply_index(y, w)));
        std::vector<int> leaf(7);
        for (int i = 0; i < 7; ++i) leaf[i] = (w >> i) & 1;
        auto out = arbor::apply(x, leaf);
        std::uint64_t packed = 0;
        for (int i = 0; i < 7; ++i) packed |= std::uint64_t(out[i]) << i;
        CHECK(packed == apply_index(x, w));
    }
}

TEST_CASE("truncate and sections") {
    std::mt19937_64 rng(7);
    CHECK(truncate(random_element(5, rng), 0) == Portrait::identity(0));
    CHECK_THROWS(truncate(Portrait::identity(3), 4));
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng() % 9);
        int m = static_cast<int>(rng() % (n + 1));
        Portrait p = random_element(n, rng), q = random_element(n, rng);
        CHECK(truncate(compose(p, q), m) == compose(truncate(p, m), truncate(q, m)));
    }
    Portrait p = random_element(6, rng);
    auto [u, v, b] = p.decompose();
    CHECK(section(p, {0}) == u);
    CHECK(section(p, {1}) == v);
    CHECK(section(p, {}) == p);
    auto [u0, u1, c] = u.decompose();
    CHECK(section(p, {0, 1}) == u1);
    // Generator a_i of the periodic systems is trivial below level i.
    auto cat = periodic_generators(4);
    for (int i = 1; i <= 4; ++i)
        for (int n = i; n <= 8; ++n) {
            Portrait ai = cat.eval("a" + std::to_string(i), n);
            CHECK(truncate(ai, i - 1).is_identity());
            CHECK_FALSE(truncate(ai, i).is_identity());
        }
}

TEST_CASE("signs") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng() % 8);
        Portrait p = random_element(n, rng), q = random_element(n, rng);
        int m = 1 + static_cast<int>(rng() % n);
        CHECK(sign(compose(p, q), m) == sign(p, m) * sign(q, m));
        CHECK(sign(p, m) == oracle::perm_sign(oracle::leaf_perm(p, m)));
    }
    CHECK_THROWS(sign(Portrait::identity(3), 0));
    CHECK_THROWS(sign(Portrait::identity(3), 4));
    auto chain = infinite_chain(8);
    for (int i = 1; i <= 8; ++i) {
        Portrait b = chain.eval("b" + std::to_string(i), 8);
        for (int n = 1; n <= 8; ++n) CHECK(sign(b, n) == (n == i ? -1 : 1));
    }
    auto per = periodic_generators(2);
    for (int n = 1; n <= 10; ++n) CHECK(sign(per.eval("a1", 10), n) == (n % 2 == 1 ? -1 : 1));
    CHECK(sign_vector(Portrait::sigma(3)) == std::vector<int>{-1, 1, 1});
}

TEST_CASE("powers and orders") {
    std::mt19937_64 rng(9);
    Portrait p = random_element(6, rng);
    CHECK(power(p, 0).is_identity());
    CHECK(power(p, 1) == p);
    CHECK(power(p, -1) == invert(p));
    CHECK(power(Portrait::sigma(5), TwoAdic::make(3, 4)) == Portrait::sigma(5));
    Portrait a5 = standard_odometer().eval("a", 5);
    CHECK(power(a5, 32).is_identity());
    CHECK(order_log2(a5) == 5);
    CHECK(order_log2(Portrait::identity(4)) == 0);
    CHECK(order_log2(periodic_generators(2).eval("a1", 4)) == 2);
    CHECK_THROWS(power(a5, TwoAdic::make(3, 4)));
    for (int t = 0; t < 200; ++t) {
        Portrait x = random_element(1 + static_cast<int>(rng() % 8), rng);
        int e = order_log2(x);
        // Oracle: the order of the leaf permutation.
        auto f = oracle::leaf_perm(x);
        auto g = f;
        std::uint64_t ord = 1;
        auto id = oracle::leaf_perm(Portrait::identity(x.level()));
        while (g != id) {
            g = oracle::perm_compose(f, g);
            ++ord;
        }
        CHECK(ord == (std::uint64_t{1} << e));
        std::int64_t k = static_cast<std::int64_t>(rng() % 1000) - 500;
        CHECK(power(x, k) == power(x, TwoAdic::make(k, 16)));
        CHECK(compose(power(x, k), power(x, 3)) == power(x, k + 3));
    }
}

TEST_CASE("encoding") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 1000; ++t) {
        Portrait p = random_element(static_cast<int>(rng() % 11), rng);
        CHECK(decode(encode(p)) == p);
    }
    CHECK(decode("3:01") == Portrait::sigma(3));
    CHECK(decode("3:0A") == decode("3:0a"));
    CHECK_THROWS(decode("3"));
    CHECK_THROWS(decode("3:0"));
    CHECK_THROWS(decode("3:0g"));
    CHECK_THROWS(decode("3:80"));  // padding bit set
    CHECK_THROWS(decode("x:00"));
    // Bijection at level 3: all 128 bit strings decode to distinct portraits.
    std::set<Portrait> seen;
    const char* hex = "0123456789abcdef";
    for (int i = 0; i < 128; ++i) seen.insert(decode(std::string("3:") + hex[i >> 4] + hex[i & 15]));
    CHECK(seen.size() == 128);
}

TEST_CASE("random elements") {
    CHECK(random_element(7, 42) == random_element(7, 42));
    CHECK(random_element(7, 42) != random_element(7, 43));
    std::mt19937_64 rng(11);
    int neg = 0, trans = 0;
    const int samples = 10000;
    for (int t = 0; t < samples; ++t) {
        Portrait p = random_element(6, rng);
        neg += sign(p, 1) < 0;
        trans += oracle::cycle_of_zero(oracle::leaf_perm(p)) == 64;
    }
    // 5 sigma bands around 1/2 and 2^-6.
    CHECK(std::abs(neg - samples / 2) < 5 * 50);
    double pt = 1.0 / 64, sd = std::sqrt(samples * pt * (1 - pt));
    CHECK(std::abs(trans - samples * pt) < 5 * sd);
    // Exact proportion of transitive elements in W_3 is 2^-3.
    int full = 0;
    for (int i = 0; i < 128; ++i) {
        Portrait p = Portrait::identity(3);
        for (int v = 0; v < 7; ++v) p.set_bit(v, (i >> v) & 1);
        full += oracle::cycle_of_zero(oracle::leaf_perm(p)) == 8;
    }
    CHECK(full == 16);
}

}
