#include <algorithm>
#include <random>
#include <set>

#include "arbor/catalog.hpp"
#include "arbor/level_groups.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace arbor;

namespace {

std::vector<Portrait> gens(const GroupCase& c, int n) { return c.catalog().generator_portraits(n); }

GroupTable group(const GroupCase& c, int n, bool words = false) {
    EnumerateOptions o;
    o.track_words = words;
    return enumerate(gens(c, n), o, n);
}

int log2_size(const GroupTable& t) {
    int e = 0;
    while ((std::size_t{1} << e) < t.size()) ++e;
    return e;
}

std::set<Portrait> as_set(const GroupTable& t) {
    auto e = t.elements();
    return {e.begin(), e.end()};
}

// Orbit of leaf 0 under the whole table: the naive transitivity oracle.
bool transitive_by_table(const GroupTable& t) {
    std::set<std::uint64_t> img;
    for (const auto& e : t.elements()) img.insert(apply_index(e, 0));
    return img.size() == (std::size_t{1} << t.level());
}

}  // namespace

TEST_SUITE("level_groups") {

TEST_CASE("group case parsing") {
    CHECK(GroupCase::parse("periodic:3") == GroupCase::Periodic(3));
    CHECK(GroupCase::parse("prep:2,3") == GroupCase::PrePeriodic(2, 3));
    CHECK(GroupCase::parse("prep:2,3").str() == "prep:2,3");
    CHECK_THROWS(GroupCase::parse("prep:3,3"));
    CHECK_THROWS(GroupCase::parse("periodic:0"));
    CHECK_THROWS(GroupCase::parse("cyclic:2"));
}

TEST_CASE("enumerate") {
    CHECK(enumerate(vertex_swap_generators(4)).size() == 32768);
    CHECK(group(GroupCase::Periodic(2), 4).size() == 4096);
    CHECK(group(GroupCase::PrePeriodic(1, 2), 5).size() == 64);
    GroupTable triv = enumerate({}, {}, 3);
    CHECK(triv.size() == 1);
    CHECK(triv.element(0).is_identity());
    CHECK_THROWS(enumerate({}));
    CHECK_THROWS(enumerate({Portrait::sigma(2), Portrait::sigma(3)}));
}

TEST_CASE("closed form orders agree with BFS") {
    struct Row {
        GroupCase c;
        int nmax;
    };
    const std::vector<Row> rows = {{GroupCase::Periodic(1), 6},       {GroupCase::Periodic(2), 5},
                                   {GroupCase::Periodic(3), 4},       {GroupCase::PrePeriodic(1, 2), 8},
                                   {GroupCase::PrePeriodic(1, 3), 4}, {GroupCase::PrePeriodic(2, 3), 4},
                                   {GroupCase::PrePeriodic(2, 4), 4}};
    for (const auto& row : rows)
        for (int n = 0; n <= row.nmax; ++n) {
            GroupTable t = group(row.c, n);
            CHECK_MESSAGE(log2_size(t) == closed_form_log2_order(row.c, n), row.c.str(), " n=", n);
            CHECK(t.order_log2() == log2_size(t));
            CHECK(t.size() == (std::size_t{1} << log2_size(t)));
        }
    CHECK(closed_form_log2_order(GroupCase::Periodic(2), 5) == 23);
    CHECK(closed_form_log2_order(GroupCase::PrePeriodic(1, 3), 5) == 22);
    CHECK(closed_form_log2_order(GroupCase::PrePeriodic(2, 3), 4) == 13);
}

TEST_CASE("hausdorff") {
    using R = boost::rational<std::int64_t>;
    CHECK(hausdorff_exact(GroupCase::Periodic(2)) == R(2, 3));
    CHECK(hausdorff_exact(GroupCase::PrePeriodic(2, 3)) == R(11, 16));
    CHECK(hausdorff_exact(GroupCase::PrePeriodic(1, 2)) == R(0));
    CHECK(hausdorff_exact(GroupCase::PrePeriodic(1, 3)) == R(5, 8));
    CHECK(hausdorff_partial(GroupCase::Periodic(2), 3) == R(6, 7));
    CHECK_THROWS(hausdorff_partial(GroupCase::Periodic(2), 0));
}

TEST_CASE("table invariants") {
    std::mt19937_64 rng(20);
    GroupTable t = group(GroupCase::PrePeriodic(2, 3), 4);
    auto g = t.generators();
    for (std::size_t i = 0; i < t.size(); i += 97)
        for (const auto& x : g) {
            CHECK(*t.contains(compose(t.element(i), x)));
            CHECK(*t.contains(compose(t.element(i), invert(x))));
        }
    auto lines = t.export_lines();
    CHECK(lines.size() == t.size());
    CHECK(std::is_sorted(lines.begin(), lines.end()));
    CHECK(decode(lines.front()).level() == 4);
    CHECK(t.index_of(Portrait::identity(4)).has_value());
}

TEST_CASE("cap truncates") {
    EnumerateOptions o;
    o.cap = 1000;
    GroupTable t = enumerate(vertex_swap_generators(4), o);
    CHECK(t.truncated());
    CHECK(t.size() >= 1000);
    CHECK_FALSE(t.order_log2().has_value());
    bool saw_unknown = false;
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100 && !saw_unknown; ++i) saw_unknown = !t.contains(random_element(4, rng)).has_value();
    CHECK(saw_unknown);
    CHECK_THROWS(count_transitive(t));
}

TEST_CASE("threads give the same set") {
    EnumerateOptions o;
    o.threads = 4;
    for (const auto& c : {GroupCase::Periodic(2), GroupCase::PrePeriodic(2, 3), GroupCase::PrePeriodic(1, 3)}) {
        GroupTable a = enumerate(gens(c, 4), o);
        GroupTable b = group(c, 4);
        CHECK(a.size() == b.size());
        CHECK(a.export_lines() == b.export_lines());
    }
}

TEST_CASE("words") {
    std::mt19937_64 rng(22);
    GroupCase c = GroupCase::Periodic(2);
    GroupTable t = group(c, 5, true);
    CHECK(t.express(Portrait::identity(5))->empty());
    for (int k = 0; k < 200; ++k) {
        std::size_t i = rng() % t.size();
        auto w = t.express(t.element(i));
        REQUIRE(w.has_value());
        CHECK(evaluate_gen_word(t.generators(), *w, 5) == t.element(i));
    }
    for (int k = 0; k < 50; ++k) {
        Portrait x = random_element(5, rng);
        if (!*t.contains(x)) CHECK_FALSE(t.express(x).has_value());
    }
    CHECK_THROWS(group(c, 3).express(Portrait::identity(3)));
    auto g = gens(c, 5);
    GenWord w = {1, -2, 2, 1};
    CHECK(evaluate_gen_word(g, w, 5) == compose(g[0], g[0]));
    CHECK(evaluate_gen_word(g, inverse_gen_word(w), 5) == invert(evaluate_gen_word(g, w, 5)));
}

TEST_CASE("contains") {
    GroupTable g = group(GroupCase::PrePeriodic(2, 3), 4);
    CHECK_FALSE(*g.contains(prep_w0().eval("w0", 4)));
    CHECK(*g.contains(prep_w_chain(2, 3, 1).eval("w1", 4)));
}

TEST_CASE("transitivity") {
    for (int m = 1; m <= 8; ++m) {
        CHECK(is_transitive(gens(GroupCase::Periodic(3), 8), m));
        CHECK(is_transitive(gens(GroupCase::PrePeriodic(1, 3), 8), m));
    }
    CHECK_FALSE(is_transitive({gens(GroupCase::Periodic(2), 3)[1]}, 1));
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        std::vector<Portrait> gs = {random_element(4, rng)};
        if (rng() & 1) gs.push_back(random_element(4, rng));
        CHECK(is_transitive(gs, 4) == transitive_by_table(enumerate(gs)));
    }
}

TEST_CASE("normal closures and subgroup lattice") {
    // H for (2,3): normal closure of a1.
    for (auto [n, want] : std::vector<std::pair<int, int>>{{3, 4}, {4, 8}}) {
        auto a = gens(GroupCase::PrePeriodic(2, 3), n);
        GroupTable g = enumerate(a);
        GroupTable h = normal_closure(a, {a[0]});
        CHECK(is_subset(h, g));
        CHECK(index(g, h) == static_cast<std::uint64_t>(want));
    }
    CHECK(normal_closure(gens(GroupCase::Periodic(2), 3), {}, {}, 3).size() == 1);
    // Periodic r=2: G_4 = H^(i)_4 x| <a_i> with trivial intersection.
    auto a = gens(GroupCase::Periodic(2), 4);
    GroupTable g = enumerate(a);
    for (int i = 0; i < 2; ++i) {
        GroupTable hi = normal_closure(a, {a[1 - i]});
        GroupTable ci = enumerate({a[i]});
        CHECK(intersect(hi, ci).size() == 1);
        CHECK(hi.size() * ci.size() == g.size());
    }
    CHECK(index(g, g) == 1);
    CHECK(commutator_subgroup(group(GroupCase::Periodic(1), 6)).size() == 1);
    // K for (1,2) is the kernel of sgn1 sgn2 on G_4.
    auto b = gens(GroupCase::PrePeriodic(1, 2), 4);
    GroupTable g12 = enumerate(b);
    GroupTable k = enumerate({compose(b[0], b[1])});
    std::set<Portrait> ker;
    for (const auto& e : g12.elements())
        if (sign(e, 1) * sign(e, 2) == 1) ker.insert(e);
    CHECK(as_set(k) == ker);
    CHECK(index(g12, k) == 2);
    CHECK_THROWS(index(k, g12));
}

TEST_CASE("index doubling") {
    for (auto [s, r, nmax] : std::vector<std::tuple<int, int, int>>{{1, 3, 4}, {2, 3, 3}}) {
        GroupCase c = GroupCase::PrePeriodic(s, r);
        for (int n = 3; n <= nmax; ++n) {
            auto a = gens(c, n);
            std::vector<Portrait> hgen;
            for (int i = 1; i <= r; ++i)
                if (i != s && i != r) hgen.push_back(a[i - 1]);
            GroupTable g = enumerate(a);
            GroupTable h = normal_closure(a, hgen);
            GroupTable g1 = group(c, n + 1);
            Portrait one = Portrait::identity(n);
            for (const auto& x : h.elements()) {
                CHECK(*g1.contains(Portrait::pair(x, one, false)));
                CHECK(*g1.contains(Portrait::pair(one, x, false)));
            }
            CHECK(g1.size() == 2 * (g.size() / h.size()) * h.size() * h.size());
        }
    }
}

TEST_CASE("commutator subgroup") {
    auto a = gens(GroupCase::Periodic(2), 4);
    GroupTable g = enumerate(a);
    GroupTable c = commutator_subgroup(g);
    CHECK(same_elements(c, intersect(normal_closure(a, {a[1]}), normal_closure(a, {a[0]}))));
    // Oracle: closure of all commutators of element pairs.
    std::vector<Portrait> comms;
    auto els = g.elements();
    for (std::size_t i = 0; i < els.size(); i += 61)
        for (std::size_t j = 0; j < els.size(); j += 67) comms.push_back(commutator(els[i], els[j]));
    CHECK(is_subset(enumerate(comms), c));
}

TEST_CASE("sign image") {
    auto p3 = GroupCase::Periodic(3);
    for (int m = 1; m <= 4; ++m) CHECK(sign_image_is_full(gens(p3, 4), m) == (m <= 3));
    auto q = GroupCase::PrePeriodic(1, 3);
    for (int m = 1; m <= 4; ++m) CHECK(sign_image_is_full(gens(q, 4), m) == (m <= 3));
    auto chain = infinite_chain(8).generator_portraits(8);
    for (int m = 1; m <= 8; ++m) CHECK(sign_image_is_full(chain, m));
    // Oracle: G_n = W_n exactly when the sign image is full.
    for (int n = 1; n <= 4; ++n)
        for (const auto& c : {p3, q, GroupCase::Periodic(2), GroupCase::PrePeriodic(2, 3)})
            CHECK(sign_image_is_full(gens(c, n), n) == (group(c, n).size() == (std::size_t{1} << ((1 << n) - 1))));
}

TEST_CASE("transitive counts") {
    CHECK(count_transitive(group(GroupCase::Periodic(2), 4)) == 1024);
    CHECK(count_transitive(group(GroupCase::PrePeriodic(1, 3), 4)) == 512);
    CHECK(count_transitive(enumerate(vertex_swap_generators(3))) == 16);
    GroupTable t = group(GroupCase::Periodic(3), 4);
    std::uint64_t brute = 0;
    for (const auto& e : t.elements()) brute += oracle::cycle_of_zero(oracle::leaf_perm(e)) == 16;
    CHECK(count_transitive(t) == brute);
}

TEST_CASE("normalizer and centralizer") {
    for (int n = 1; n <= 4; ++n) CHECK(centralizer_in_Wn(group(GroupCase::Periodic(2), n)).size() == 2);
    GroupTable w3 = enumerate(vertex_swap_generators(3));
    CHECK(normalizer_in_Wn(w3).size() == 128);
    GroupTable g = group(GroupCase::PrePeriodic(2, 3), 4);
    GroupTable nz = normalizer_in_Wn(g);
    Portrait w0 = prep_w0().eval("w0", 4);
    std::set<Portrait> want;
    for (const auto& e : g.elements()) {
        want.insert(e);
        want.insert(compose(e, w0));
    }
    CHECK(as_set(nz) == want);
    // Centralizer of one element, checked against direct commutation.
    Portrait a = standard_odometer().eval("a", 3);
    GroupTable ca = centralizer_in_Wn(a);
    std::size_t brute = 0;
    for (std::uint64_t i = 0; i < 128; ++i) {
        Portrait x = wn_element(3, i);
        brute += compose(x, a) == compose(a, x);
    }
    CHECK(ca.size() == brute);
    CHECK_THROWS(normalizer_in_Wn(group(GroupCase::Periodic(2), 5)));
}

TEST_CASE("sign matrices") {
    auto a = gens(GroupCase::PrePeriodic(2, 3), 3);
    SignMatrixClass m = sign_matrix_class(Portrait::pair(a[1], a[2], false), 2, 3);
    CHECK(m.m[0][0] == -1);
    CHECK(m.m[0][1] == 1);
    CHECK(m.m[1][0] == 1);
    CHECK(m.m[1][1] == -1);
    CHECK_FALSE(m.swap);
    CHECK(in_Grplus1_by_signs(Portrait::pair(a[1], a[2], false), 2, 3));
    Portrait w0 = prep_w0().eval("w0", 4);
    SignMatrixClass mw = sign_matrix_class(w0, 2, 3);
    CHECK((mw.m[0][0] == -1 && mw.m[0][1] == 1 && mw.m[1][0] == -1 && mw.m[1][1] == 1));
    CHECK_FALSE(in_Grplus1_by_signs(w0, 2, 3));
    CHECK(in_Grplus1_by_signs(Portrait::identity(4), 2, 3));
    CHECK_THROWS(sign_matrix_class(Portrait::identity(4), 1, 3));
    CHECK_THROWS(sign_matrix_class(Portrait::identity(3), 2, 3));
    // Exhaustive for (2,3): p = (u,v) s^l with u, v in G_3 lies in G_4 iff the sign test passes.
    GroupTable g3 = group(GroupCase::PrePeriodic(2, 3), 3), g4 = group(GroupCase::PrePeriodic(2, 3), 4);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < g3.size(); ++i)
        for (std::size_t j = 0; j < g3.size(); ++j)
            for (bool l : {false, true}) {
                Portrait p = Portrait::pair(g3.element(i), g3.element(j), l);
                bool by_signs = in_Grplus1_by_signs(p, 2, 3);
                hits += by_signs;
                if (by_signs != *g4.contains(p)) FAIL("sign test disagrees with the table");
            }
    CHECK(hits == g4.size());
    // (2,4): elements of G_5 built from random words pass the test.
    auto g = gens(GroupCase::PrePeriodic(2, 4), 5);
    std::mt19937_64 rng(24);
    for (int t = 0; t < 500; ++t) {
        GenWord w;
        for (int j = 0; j < 12; ++j) w.push_back(1 + static_cast<int>(rng() % 4));
        CHECK(in_Grplus1_by_signs(evaluate_gen_word(g, w, 5), 2, 4));
    }
}

TEST_CASE("lifts into G^1") {
    std::mt19937_64 rng(25);
    GroupCase p2 = GroupCase::Periodic(2);
    auto g4 = gens(p2, 4), g3 = gens(p2, 3);
    CHECK(evaluate_gen_word(g4, lift_to_G1(p2, {2}), 4) == Portrait::pair(g3[1], g3[1], false));
    CHECK(evaluate_gen_word(g4, lift_to_G1(p2, {1}), 4) == g4[1]);
    CHECK(lift_to_G1(p2, {}).empty());
    for (const auto& c : {GroupCase::Periodic(1), p2, GroupCase::Periodic(3), GroupCase::PrePeriodic(1, 3),
                          GroupCase::PrePeriodic(2, 3), GroupCase::PrePeriodic(2, 4)}) {
        for (int n = 1; n <= 7; ++n) {
            auto gn = gens(c, n), gm = gens(c, n - 1);
            for (int t = 0; t < 20; ++t) {
                GenWord x;
                int len = static_cast<int>(rng() % 8);
                for (int j = 0; j < len; ++j) {
                    int i = 1 + static_cast<int>(rng() % c.r);
                    x.push_back(rng() & 1 ? i : -i);
                }
                Portrait lift = evaluate_gen_word(gn, lift_to_G1(c, x), n);
                auto [u, v, b] = lift.decompose();
                CHECK_FALSE(b);
                CHECK(u == evaluate_gen_word(gm, x, n - 1));
                for (int letter : {0, 1})
                    CHECK(evaluate_gen_word(gm, section_word(c, x, letter), n - 1) ==
                          section(evaluate_gen_word(gn, x, n), {letter}));
            }
        }
    }
    CHECK_THROWS(lift_to_G1(p2, {3}));
}

TEST_CASE("subgroup from elements") {
    GroupTable g = group(GroupCase::Periodic(2), 3);
    GroupTable h = subgroup_from_elements(3, g.elements());
    CHECK(same_elements(g, h));
    CHECK_THROWS(subgroup_from_elements(3, {Portrait::identity(3), Portrait::sigma(3), standard_odometer().eval("a", 3)}));
}

}
