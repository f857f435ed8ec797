#include "arbor/conjugacy.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace arbor {

ConjugacyWitness::ConjugacyWitness(Portrait conjugator, Portrait lhs, Portrait rhs)
    : conjugator_(std::move(conjugator)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    if (conjugate(conjugator_, lhs_) != rhs_) throw std::logic_error("conjugacy witness failed verification");
}

Portrait conjugacy_canonical_form(const Portrait& p) {
    if (p.level() == 0) return p;
    auto [u, v, b] = p.decompose();
    if (b) return Portrait::pair(conjugacy_canonical_form(compose(u, v)), Portrait::identity(p.level() - 1), true);
    Portrait cu = conjugacy_canonical_form(u), cv = conjugacy_canonical_form(v);
    if (cv < cu) std::swap(cu, cv);
    return Portrait::pair(cu, cv, false);
}

bool are_conjugate_in_Wn(const Portrait& p, const Portrait& q) {
    if (p.level() != q.level()) throw std::invalid_argument("conjugacy: level mismatch");
    return conjugacy_canonical_form(p) == conjugacy_canonical_form(q);
}

namespace {

// c with c p c^-1 = q, assuming p ~ q.
Portrait conjugator_rec(const Portrait& p, const Portrait& q) {
    int n = p.level();
    if (n == 0 || p == q) return Portrait::identity(n);
    auto [u, v, b] = p.decompose();
    auto [u2, v2, b2] = q.decompose();
    if (b) {
        Portrait x = conjugator_rec(compose(u, v), compose(u2, v2));
        return Portrait::pair(x, compose(compose(invert(u2), x), u), false);
    }
    if (are_conjugate_in_Wn(u, u2) && are_conjugate_in_Wn(v, v2))
        return Portrait::pair(conjugator_rec(u, u2), conjugator_rec(v, v2), false);
    return Portrait::pair(conjugator_rec(v, u2), conjugator_rec(u, v2), true);
}

// c with c p c^-1 = p^k, k odd.
Portrait power_rec(const Portrait& p, const TwoAdic& k) {
    int n = p.level();
    if (n == 0) return p;
    auto [u, v, b] = p.decompose();
    if (!b) return Portrait::pair(power_rec(u, k), power_rec(v, k), false);
    Portrait pk = power(p, k);
    auto [u2, v2, b2] = pk.decompose();
    Portrait x = power_rec(compose(u, v), k);
    return Portrait::pair(x, compose(compose(invert(u2), x), u), false);
}

Portrait transitive_rec(const Portrait& p, const Portrait& q) {
    int n = p.level();
    if (n == 0) return p;
    auto [u, v, b] = p.decompose();
    auto [u2, v2, b2] = q.decompose();
    Portrait x = transitive_rec(compose(u, v), compose(u2, v2));
    return Portrait::pair(x, compose(compose(invert(u2), x), u), false);
}

}  // namespace

std::optional<ConjugacyWitness> find_conjugator_in_Wn(const Portrait& p, const Portrait& q) {
    if (!are_conjugate_in_Wn(p, q)) return std::nullopt;
    return ConjugacyWitness(conjugator_rec(p, q), p, q);
}

ConjugacyWitness power_conjugator(const Portrait& p, const TwoAdic& k) {
    if (!k.is_unit()) throw std::invalid_argument("power conjugator needs odd k");
    if (k.precision() < order_log2(p)) throw std::domain_error("exponent precision below element order");
    return ConjugacyWitness(power_rec(p, k), p, power(p, k));
}

ConjugacyWitness power_conjugator(const Portrait& p, std::int64_t k) { return power_conjugator(p, TwoAdic::integer(k)); }

bool is_odometer_to_level(const Portrait& p) {
    for (int m = 1; m <= p.level(); ++m)
        if (sign(p, m) > 0) return false;
    return true;
}

ConjugacyWitness transitive_conjugator(const Portrait& p, const Portrait& q) {
    if (p.level() != q.level()) throw std::invalid_argument("conjugacy: level mismatch");
    if (!is_odometer_to_level(p) || !is_odometer_to_level(q))
        throw std::invalid_argument("transitive conjugator needs transitive inputs");
    return ConjugacyWitness(transitive_rec(p, q), p, q);
}

namespace {

void check_arity(const GroupCase& c, const std::vector<Portrait>& bs) {
    if (static_cast<int>(bs.size()) != c.r) throw std::invalid_argument("expected exactly r elements");
    for (const auto& b : bs)
        if (b.level() != bs.front().level()) throw std::invalid_argument("elements have different levels");
}

}  // namespace

bool shape_check(const GroupCase& c, const std::vector<Portrait>& bs) {
    check_arity(c, bs);
    int n = bs.front().level();
    if (n == 0) return true;
    const int r = c.r, s = c.s;
    auto t = [&](int i) { return truncate(bs[i - 1], n - 1); };
    Portrait one = Portrait::identity(n - 1);
    for (int i = 1; i <= r; ++i) {
        Portrait target;
        if (i == 1)
            target = c.periodic ? Portrait::pair(t(r), one, true) : Portrait::sigma(n);
        else if (!c.periodic && i == s + 1)
            target = Portrait::pair(t(s), t(r), false);
        else
            target = Portrait::pair(t(i - 1), one, false);
        if (!are_conjugate_in_Wn(bs[i - 1], target)) return false;
    }
    return true;
}

namespace {

struct Partial {
    Portrait u;
    std::vector<GenWord> x;  // x[i-1] spells x_i
};

GenWord cat(GenWord a, const GenWord& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Decomposes targets t as x y^-1 with (x, y) in G^1_n. One representative (x, y0(x)) per
// first coordinate, plus M = {m : (1, m) in G^1_n} closed from Schreier generators;
// the pairs with first coordinate x are exactly (x, y0(x) m), m in M.
class G1Decomposer {
public:
    G1Decomposer(const GroupCase& c, int n) {
        auto gens = c.catalog().generator_portraits(n);
        std::vector<GenWord> sw;
        std::vector<Portrait> sp;
        for (int i = 2; i <= c.r; ++i) {
            sw.push_back({i});
            sw.push_back({1, i, 1});
        }
        for (const auto& w : sw) sp.push_back(evaluate_gen_word(gens, w, n));
        add_rep(Portrait::identity(n - 1), Portrait::identity(n - 1), {});
        std::vector<Portrait> mgens;
        m_table_ = enumerate({}, {}, n - 1);
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            Portrait e0 = Portrait::pair(xs_[i], y0_[i], false);
            for (std::size_t g = 0; g < sp.size(); ++g) {
                auto [x, y, b] = compose(e0, sp[g]).decompose();
                GenWord w = cat(words_[i], sw[g]);
                auto it = index_.find(x);
                if (it == index_.end()) {
                    add_rep(x, y, std::move(w));
                    continue;
                }
                Portrait m = compose(invert(y0_[it->second]), y);
                if (m_table_.index_of(m)) continue;
                mgens.push_back(m);
                m_words_.push_back(cat(inverse_gen_word(words_[it->second]), w));
                m_table_ = enumerate(mgens, {.track_words = true}, n - 1);
            }
        }
    }

    // Word for some (x, y) in G^1_n with x y^-1 = t.
    std::optional<GenWord> find(const Portrait& t) const {
        Portrait tinv = invert(t);
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            Portrait m = compose(compose(invert(y0_[i]), tinv), xs_[i]);
            auto j = m_table_.index_of(m);
            if (!j) continue;
            GenWord w = words_[i];
            if (m_table_.has_words())
                for (int k : m_table_.word_of(*j)) w = cat(w, m_words_[k - 1]);
            return w;
        }
        return std::nullopt;
    }

private:
    std::vector<Portrait> xs_, y0_;
    std::vector<GenWord> words_;
    std::unordered_map<Portrait, std::size_t, PortraitHash> index_;
    GroupTable m_table_;
    std::vector<GenWord> m_words_;

    void add_rep(Portrait x, Portrait y, GenWord w) {
        index_.emplace(x, xs_.size());
        xs_.push_back(std::move(x));
        y0_.push_back(std::move(y));
        words_.push_back(std::move(w));
    }
};

std::shared_ptr<const G1Decomposer> g1_decomposer(const GroupCase& c, int n) {
    static std::mutex mutex;
    static std::map<std::pair<std::string, int>, std::shared_ptr<const G1Decomposer>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{c.str(), n}];
    if (!slot) slot = std::make_shared<const G1Decomposer>(c, n);
    return slot;
}

Partial semirigid_periodic(const GroupCase& c, const std::vector<Portrait>& bs,
                           const std::vector<std::vector<Portrait>>& gens) {
    const int r = c.r;
    const int n = bs.front().level();
    if (n == 0) return {Portrait::identity(0), std::vector<GenWord>(r)};
    const auto& a = gens[n];
    // Move every b_i (i > 1) into the form (*, 1).
    std::vector<Portrait> b = bs;
    std::vector<bool> flipped(r, false);
    Portrait b1inv = invert(b[0]);
    for (int i = 2; i <= r; ++i) {
        auto [p, q, sw] = b[i - 1].decompose();
        if (!q.is_identity()) {
            b[i - 1] = compose(compose(b1inv, b[i - 1]), b[0]);
            flipped[i - 1] = true;
        }
    }
    std::vector<Portrait> cs(r);
    for (int i = 2; i <= r; ++i) cs[i - 2] = std::get<0>(b[i - 1].decompose());
    auto fw = find_conjugator_in_Wn(a[0], b[0]);
    if (!fw) throw std::invalid_argument("b_1 is not conjugate to a_1");
    Portrait f = fw->conjugator();
    if (f.root_bit()) f = compose(f, a[0]);
    auto [d, e, fb] = f.decompose();
    const Portrait& ar_low = gens[n - 1][r - 1];
    cs[r - 1] = conjugate(d, ar_low);
    Partial low = semirigid_periodic(c, cs, gens);
    Portrait uxr = compose(low.u, evaluate_gen_word(gens[n - 1], low.x[r - 1], n - 1));
    Portrait w = Portrait::pair(uxr, compose(compose(e, invert(d)), uxr), false);
    Partial out{w, std::vector<GenWord>(r)};
    GenWord xr_inv = inverse_gen_word(low.x[r - 1]);
    for (int i = 2; i <= r; ++i) out.x[i - 1] = lift_to_G1(c, cat(xr_inv, low.x[i - 2]));
    for (int i = 2; i <= r; ++i)
        if (flipped[i - 1]) out.x[i - 1] = cat({1}, out.x[i - 1]);
    return out;
}

Partial semirigid_prep(const GroupCase& c, const std::vector<Portrait>& bs,
                       const std::vector<std::vector<Portrait>>& gens) {
    const int r = c.r, s = c.s;
    const int n = bs.front().level();
    if (n == 0) return {Portrait::identity(0), std::vector<GenWord>(r)};
    const auto& a = gens[n];
    const auto& low_a = gens[n - 1];
    auto fw = find_conjugator_in_Wn(a[0], bs[0]);
    if (!fw) throw std::invalid_argument("b_1 is not conjugate to a_1");
    const Portrait& f = fw->conjugator();
    Portrait finv = invert(f);
    std::vector<Portrait> b;
    for (const auto& x : bs) b.push_back(conjugate(finv, x));
    // b[0] is now sigma; flip b_i by sigma where needed.
    std::vector<bool> flipped(r, false);
    std::vector<Portrait> cs(r);
    for (int i = 2; i <= r; ++i) {
        auto [p, q, sw] = b[i - 1].decompose();
        bool keep;
        if (i == s + 1)
            keep = are_conjugate_in_Wn(p, low_a[s - 1]) && are_conjugate_in_Wn(q, low_a[r - 1]);
        else
            keep = q.is_identity() && are_conjugate_in_Wn(p, low_a[i - 2]);
        if (!keep) {
            std::swap(p, q);
            flipped[i - 1] = true;
        }
        if (i == s + 1) {
            cs[s - 1] = p;
            cs[r - 1] = q;
        } else {
            cs[i - 2] = p;
        }
    }
    Partial low = semirigid_prep(c, cs, gens);
    // x_s^-1 x_r = x y^-1 a_r^nu with (x, y) in G^1_n.
    GenWord t_word = cat(inverse_gen_word(low.x[s - 1]), low.x[r - 1]);
    Portrait t = evaluate_gen_word(low_a, t_word, n - 1);
    auto search = g1_decomposer(c, n);
    std::optional<GenWord> g = search->find(t);
    if (!g) g = search->find(compose(t, low_a[r - 1]));
    if (!g) throw std::logic_error("no decomposition of x_s^-1 x_r through G^1 found");
    GenWord x_word = section_word(c, *g, 0);
    Portrait v = compose(compose(low.u, evaluate_gen_word(low_a, low.x[s - 1], n - 1)),
                         evaluate_gen_word(low_a, x_word, n - 1));
    Portrait w = compose(f, Portrait::pair(v, v, false));
    Partial out{w, std::vector<GenWord>(r)};
    GenWord pre = cat(inverse_gen_word(x_word), inverse_gen_word(low.x[s - 1]));
    for (int i = 2; i <= r; ++i) {
        if (i == s + 1)
            out.x[i - 1] = inverse_gen_word(*g);
        else
            out.x[i - 1] = lift_to_G1(c, cat(pre, low.x[i - 2]));
        if (flipped[i - 1]) out.x[i - 1] = cat({1}, out.x[i - 1]);
    }
    return out;
}

}  // namespace

SemirigidityResult semirigidity_conjugator(const GroupCase& c, const std::vector<Portrait>& bs, int max_level) {
    check_arity(c, bs);
    const int n = bs.front().level();
    if (n > max_level) throw std::invalid_argument("semirigidity limited to level " + std::to_string(max_level));
    Catalog cat = c.catalog();
    std::vector<std::vector<Portrait>> gens;
    for (int m = 0; m <= n; ++m) gens.push_back(cat.generator_portraits(m));
    for (int i = 0; i < c.r; ++i)
        if (!are_conjugate_in_Wn(bs[i], gens[n][i]))
            throw std::invalid_argument("b_" + std::to_string(i + 1) + " is not conjugate to a_" + std::to_string(i + 1));
    Partial p = c.periodic ? semirigid_periodic(c, bs, gens) : semirigid_prep(c, bs, gens);
    SemirigidityResult res{p.u, {}, p.x};
    for (int i = 0; i < c.r; ++i) {
        Portrait z = evaluate_gen_word(gens[n], p.x[i], n);
        Portrait wz = compose(p.u, z);
        if (conjugate(wz, gens[n][i]) != bs[i]) throw std::logic_error("semirigidity certificate failed verification");
        res.z.push_back(std::move(z));
    }
    return res;
}

std::optional<Portrait> rigidity_conjugator_r2(const Portrait& b1, const Portrait& b2) {
    int n = b1.level();
    if (b2.level() != n) throw std::invalid_argument("conjugacy: level mismatch");
    if (n > 4) throw std::invalid_argument("rigidity search limited to level 4");
    auto a = periodic_generators(2).generator_portraits(n);
    std::uint64_t total = std::uint64_t{1} << ((std::uint64_t{1} << n) - 1);
    for (std::uint64_t i = 0; i < total; ++i) {
        Portrait w = wn_element(n, i);
        Portrait wi = invert(w);
        if (compose(compose(w, a[0]), wi) == b1 && compose(compose(w, a[1]), wi) == b2) return w;
    }
    return std::nullopt;
}

}  // namespace arbor
