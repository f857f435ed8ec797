#include "arbor/catalog.hpp"

#include <stdexcept>

namespace arbor {

namespace {

std::string a(int i) { return "a" + std::to_string(i); }

Token sym(const std::vector<std::string>& names, const std::string& n, TwoAdic e = TwoAdic::integer(1)) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == n) return Token::sym(static_cast<int>(i), e);
    throw std::logic_error("catalog: missing symbol " + n);
}

// Builder that lets equations reference symbols declared later.
struct Builder {
    std::vector<std::string> names;
    std::vector<std::pair<SymbolWord, SymbolWord>> rhs;
    std::vector<bool> nus;

    void declare(const std::string& n) {
        names.push_back(n);
        rhs.emplace_back();
        nus.push_back(false);
    }
    int idx(const std::string& n) const { return sym(names, n).symbol; }
    Token t(const std::string& n, TwoAdic e = TwoAdic::integer(1)) const { return sym(names, n, e); }
    Token t(const std::string& n, std::int64_t e) const { return sym(names, n, TwoAdic::integer(e)); }
    void set(const std::string& n, SymbolWord l, SymbolWord r, bool nu) {
        int i = idx(n);
        rhs[i] = {std::move(l), std::move(r)};
        nus[i] = nu;
    }
    RecursionSystem build() const {
        std::vector<Equation> eqs;
        for (std::size_t i = 0; i < names.size(); ++i) eqs.push_back({names[i], rhs[i].first, rhs[i].second, nus[i]});
        return define_system(std::move(eqs));
    }
};

void check_periodic(int r) {
    if (r < 1) throw std::invalid_argument("periodic case needs r >= 1");
}

void check_prep(int s, int r) {
    if (s < 1 || s >= r) throw std::invalid_argument("pre-periodic case needs 1 <= s < r");
}

void add_periodic(Builder& b, int r) {
    for (int i = 1; i <= r; ++i) b.declare(a(i));
    b.set(a(1), {b.t(a(r))}, {}, true);
    for (int i = 2; i <= r; ++i) b.set(a(i), {b.t(a(i - 1))}, {}, false);
}

void add_prep(Builder& b, int s, int r) {
    for (int i = 1; i <= r; ++i) b.declare(a(i));
    b.set(a(1), {}, {}, true);
    for (int i = 2; i <= r; ++i) {
        if (i == s + 1)
            b.set(a(i), {b.t(a(s))}, {b.t(a(r))}, false);
        else
            b.set(a(i), {b.t(a(i - 1))}, {}, false);
    }
}

std::vector<int> gens_of(const Builder& b, int r) {
    std::vector<int> g;
    for (int i = 1; i <= r; ++i) g.push_back(b.idx(a(i)));
    return g;
}

void require_odd(const TwoAdic& k) {
    if (!k.is_unit()) throw std::invalid_argument("k must be odd");
}

}  // namespace

SymbolWord Catalog::word(std::string_view name) const {
    for (const auto& [n, w] : words)
        if (n == name) return w;
    return {Token::sym(system.index_of(name))};
}

Portrait Catalog::eval(std::string_view name, int n) const { return system.evaluate_word(word(name), n); }

std::vector<Portrait> Catalog::generator_portraits(int n) const {
    std::vector<Portrait> out;
    for (int g : generators) out.push_back(system.evaluate(g, n));
    return out;
}

Catalog standard_odometer() {
    Builder b;
    b.declare("a");
    b.set("a", {b.t("a")}, {}, true);
    return {b.build(), {0}, {}};
}

Catalog odometer_zk(const TwoAdic& k) {
    require_odd(k);
    Builder b;
    b.declare("a");
    b.declare("z");
    b.set("a", {b.t("a")}, {}, true);
    b.set("z", {b.t("z")}, {b.t("a", k.half_pred()), b.t("z")}, false);
    return {b.build(), {0}, {}};
}

Catalog periodic_generators(int r) {
    check_periodic(r);
    Builder b;
    add_periodic(b, r);
    Catalog c{b.build(), gens_of(b, r), {}};
    SymbolWord a0;
    for (int i = 1; i <= r; ++i) a0.push_back(b.t(a(i)));
    c.words.emplace_back("a0", a0);
    return c;
}

Catalog preperiodic_generators(int s, int r) {
    check_prep(s, r);
    Builder b;
    add_prep(b, s, r);
    return {b.build(), gens_of(b, r), {}};
}

Catalog infinite_chain(int count) {
    if (count < 1) throw std::invalid_argument("chain needs at least one element");
    Builder b;
    for (int i = 1; i <= count; ++i) b.declare("b" + std::to_string(i));
    b.set("b1", {}, {}, true);
    for (int i = 2; i <= count; ++i) b.set("b" + std::to_string(i), {b.t("b" + std::to_string(i - 1))}, {}, false);
    std::vector<int> g;
    for (int i = 0; i < count; ++i) g.push_back(i);
    return {b.build(), g, {}};
}

Catalog periodic_normalizer(int r, const std::vector<TwoAdic>& ks) {
    check_periodic(r);
    if (static_cast<int>(ks.size()) != r) throw std::invalid_argument("need exactly r exponents");
    for (const auto& k : ks) require_odd(k);
    auto mod = [r](int i) { return ((i - 1) % r + r) % r + 1; };
    Builder b;
    add_periodic(b, r);
    for (int i = 1; i <= r; ++i) b.declare("w" + std::to_string(i));
    for (int i = 1; i <= r; ++i) {
        std::string prev = "w" + std::to_string(mod(i - 1));
        TwoAdic l = ks[mod(1 - i) - 1].half_pred();
        b.set("w" + std::to_string(i), {b.t(prev)}, {b.t(a(r), l), b.t(prev)}, false);
    }
    Catalog c{b.build(), gens_of(b, r), {}};
    SymbolWord a0;
    for (int i = 1; i <= r; ++i) a0.push_back(b.t(a(i)));
    c.words.emplace_back("a0", a0);
    return c;
}

Catalog prep_w_chain(int s, int r, int count) {
    check_prep(s, r);
    if (s == 1 && r == 2) throw std::invalid_argument("w chain is not defined for the case (1,2)");
    if (count < 1) throw std::invalid_argument("chain needs at least one element");
    Builder b;
    add_prep(b, s, r);
    for (int i = 1; i <= count; ++i) b.declare("w" + std::to_string(i));
    if (s >= 2 && r >= 4) {
        b.set("w1", {b.t(a(s))}, {b.t(a(s))}, false);
    } else {
        b.set("w1", {}, {b.t(a(s)), b.t(a(r)), b.t(a(s)), b.t(a(r))}, false);
    }
    for (int i = 2; i <= count; ++i) {
        std::string prev = "w" + std::to_string(i - 1);
        b.set("w" + std::to_string(i), {b.t(prev)}, {b.t(prev)}, false);
    }
    return {b.build(), gens_of(b, r), {}};
}

Catalog prep_w0() {
    Builder b;
    add_prep(b, 2, 3);
    b.declare("w0");
    b.set("w0", {b.t("a2"), b.t("w0")}, {b.t("a3"), b.t("w0")}, false);
    return {b.build(), gens_of(b, 3), {}};
}

Catalog dihedral_vw(const TwoAdic& k) {
    require_odd(k);
    Builder b;
    add_prep(b, 1, 2);
    b.declare("a0");
    b.declare("v");
    b.set("a0", {b.t("a2")}, {b.t("a1")}, true);
    TwoAdic e = -k.half_pred();
    b.set("v", {b.t("a0", e), b.t("v")}, {b.t("v")}, false);
    Catalog c{b.build(), gens_of(b, 2), {}};
    c.words.emplace_back("w", SymbolWord{b.t("a0", e), b.t("v")});
    return c;
}

}  // namespace arbor
