#include "arbor/level_groups.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

namespace arbor {

namespace {

constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

int common_level(const std::vector<Portrait>& gens, int level) {
    if (gens.empty()) {
        if (level < 0) throw std::invalid_argument("level required for an empty generator list");
        return level;
    }
    int n = gens.front().level();
    for (const auto& g : gens)
        if (g.level() != n) throw std::invalid_argument("generators have different levels");
    if (level >= 0 && level != n) throw std::invalid_argument("generator level does not match");
    return n;
}

int parse_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    return v;
}

}  // namespace

GroupCase GroupCase::Periodic(int r) {
    if (r < 1) throw std::invalid_argument("periodic case needs r >= 1");
    return {true, 0, r};
}

GroupCase GroupCase::PrePeriodic(int s, int r) {
    if (s < 1 || s >= r) throw std::invalid_argument("pre-periodic case needs 1 <= s < r");
    return {false, s, r};
}

GroupCase GroupCase::parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("case must be periodic:r or prep:s,r");
    std::string_view kind = text.substr(0, colon), args = text.substr(colon + 1);
    if (kind == "periodic") return Periodic(parse_int(args));
    if (kind == "prep") {
        auto comma = args.find(',');
        if (comma == std::string_view::npos) throw std::invalid_argument("prep case needs s,r");
        return PrePeriodic(parse_int(args.substr(0, comma)), parse_int(args.substr(comma + 1)));
    }
    throw std::invalid_argument("unknown case kind '" + std::string(kind) + "'");
}

std::string GroupCase::str() const {
    if (periodic) return "periodic:" + std::to_string(r);
    return "prep:" + std::to_string(s) + "," + std::to_string(r);
}

Catalog GroupCase::catalog() const { return periodic ? periodic_generators(r) : preperiodic_generators(s, r); }

Portrait evaluate_gen_word(const std::vector<Portrait>& gens, const GenWord& w, int n) {
    Portrait out = Portrait::identity(n);
    for (int x : w) {
        if (x == 0 || std::abs(x) > static_cast<int>(gens.size())) throw std::invalid_argument("generator index out of range");
        const Portrait& g = gens[std::abs(x) - 1];
        out = compose(out, x > 0 ? g : invert(g));
    }
    return out;
}

GenWord inverse_gen_word(const GenWord& w) {
    GenWord out(w.rbegin(), w.rend());
    for (int& x : out) x = -x;
    return out;
}

namespace {

// Sections (at letters 0 and 1) and root swap of one generator.
struct GenShape {
    GenWord sec[2];
    bool active;
};

GenShape generator_shape(const GroupCase& c, int j) {
    if (j == 1) {
        if (c.periodic) return {{{c.r}, {}}, true};
        return {{{}, {}}, true};
    }
    if (!c.periodic && j == c.s + 1) return {{{c.s}, {c.r}}, false};
    return {{{j - 1}, {}}, false};
}

}  // namespace

GenWord section_word(const GroupCase& c, const GenWord& w, int letter) {
    if (letter != 0 && letter != 1) throw std::invalid_argument("letter must be 0 or 1");
    // Output-indexed sections: (g h)|_x = g|_x h|_{g^-1(x)}.
    GenWord out;
    int x = letter;
    for (int gi : w) {
        int j = std::abs(gi);
        if (j < 1 || j > c.r) throw std::invalid_argument("generator index out of range");
        GenShape g = generator_shape(c, j);
        GenWord part;
        if (gi > 0) {
            part = g.sec[x];
        } else {
            // (g^-1)|_x = (g|_{g^-1(x)})^-1
            part = inverse_gen_word(g.sec[g.active ? (x ^ 1) : x]);
        }
        if (g.active) x ^= 1;
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// ---- GroupTable ----

std::uint64_t GroupTable::hash_raw(const std::uint64_t* w) const {
    std::uint64_t h = 0x243f6a8885a308d3ull;
    for (std::size_t i = 0; i < stride_; ++i) {
        h ^= w[i];
        h *= 0x9e3779b97f4a7c15ull;
        h ^= h >> 29;
    }
    h *= 0xbf58476d1ce4e5b9ull;
    return h ^ (h >> 31);
}

std::optional<std::size_t> GroupTable::find_raw(const std::uint64_t* w) const {
    std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash_raw(w) & mask;; s = (s + 1) & mask) {
        std::uint32_t e = slots_[s];
        if (e == kEmpty) return std::nullopt;
        if (std::equal(w, w + stride_, raw(e))) return e;
    }
}

void GroupTable::rehash(std::size_t n) {
    slots_.assign(n, kEmpty);
    std::size_t mask = n - 1;
    for (std::size_t i = 0; i < count_; ++i) {
        std::size_t s = hash_raw(raw(i)) & mask;
        while (slots_[s] != kEmpty) s = (s + 1) & mask;
        slots_[s] = static_cast<std::uint32_t>(i);
    }
}

bool GroupTable::insert_raw(const std::uint64_t* w) {
    if (2 * (count_ + 1) > slots_.size()) rehash(slots_.size() * 2);
    std::size_t mask = slots_.size() - 1;
    std::size_t s = hash_raw(w) & mask;
    for (;; s = (s + 1) & mask) {
        std::uint32_t e = slots_[s];
        if (e == kEmpty) break;
        if (std::equal(w, w + stride_, raw(e))) return false;
    }
    slots_[s] = static_cast<std::uint32_t>(count_);
    data_.insert(data_.end(), w, w + stride_);
    ++count_;
    return true;
}

Portrait GroupTable::element(std::size_t i) const {
    if (i >= count_) throw std::out_of_range("element index out of range");
    std::vector<std::uint64_t> w(raw(i), raw(i) + word_count(level_));
    return Portrait::from_words(level_, std::move(w));
}

std::optional<std::size_t> GroupTable::index_of(const Portrait& p) const {
    if (p.level() != level_) throw std::invalid_argument("portrait level does not match table");
    std::vector<std::uint64_t> w(stride_, 0);
    std::copy(p.words().begin(), p.words().end(), w.begin());
    return find_raw(w.data());
}

std::optional<bool> GroupTable::contains(const Portrait& p) const {
    if (index_of(p)) return true;
    if (truncated_) return std::nullopt;
    return false;
}

GenWord GroupTable::word_of(std::size_t i) const {
    if (!track_) throw std::logic_error("table was built without word tracking");
    GenWord w;
    while (i != 0) {
        w.push_back(via_[i]);
        i = parent_[i];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

std::optional<GenWord> GroupTable::express(const Portrait& p) const {
    if (!track_) throw std::logic_error("table was built without word tracking");
    auto i = index_of(p);
    if (!i) return std::nullopt;
    return word_of(*i);
}

std::optional<int> GroupTable::order_log2() const {
    if (truncated_) return std::nullopt;
    return std::countr_zero(static_cast<std::uint64_t>(count_));
}

std::vector<Portrait> GroupTable::elements() const {
    std::vector<Portrait> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) out.push_back(element(i));
    return out;
}

std::vector<std::string> GroupTable::export_lines() const {
    std::vector<std::string> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) out.push_back(encode(element(i)));
    std::sort(out.begin(), out.end());
    return out;
}

GroupTable enumerate(const std::vector<Portrait>& gens, const EnumerateOptions& opts, int level) {
    int n = common_level(gens, level);
    if (gens.size() > 65535) throw std::invalid_argument("too many generators");
    if (opts.cap < 1 || opts.cap > (std::uint64_t{1} << 31)) throw std::invalid_argument("cap must be in [1, 2^31]");
    GroupTable t;
    t.level_ = n;
    t.stride_ = std::max<std::size_t>(1, word_count(n));
    t.gens_ = gens;
    t.track_ = opts.track_words;
    t.slots_.assign(1024, kEmpty);

    const std::size_t stride = t.stride_;
    std::vector<std::vector<std::uint64_t>> gw;
    for (const auto& g : gens) {
        std::vector<std::uint64_t> w(stride, 0);
        std::copy(g.words().begin(), g.words().end(), w.begin());
        gw.push_back(std::move(w));
    }
    std::vector<std::uint64_t> id(stride, 0);
    t.insert_raw(id.data());
    if (t.track_) {
        t.parent_.push_back(0);
        t.via_.push_back(0);
    }

    const std::size_t ng = gens.size();
    const int threads = std::max(1, opts.threads);
    constexpr std::size_t kChunk = std::size_t{1} << 15;
    std::vector<std::uint64_t> buf;

    auto fill = [&](std::size_t from, std::size_t to, std::uint64_t* out) {
        for (std::size_t i = from; i < to; ++i)
            for (std::size_t g = 0; g < ng; ++g)
                compose_words(n, t.raw(i), gw[g].data(), out + ((i - from) * ng + g) * stride);
    };

    std::size_t begin = 0, end = t.count_;
    while (begin < end && !t.truncated_) {
        for (std::size_t c0 = begin; c0 < end && !t.truncated_; c0 += kChunk) {
            std::size_t c1 = std::min(end, c0 + kChunk);
            buf.resize((c1 - c0) * ng * stride);
            if (threads == 1 || c1 - c0 < 1024) {
                fill(c0, c1, buf.data());
            } else {
                // data_ is not resized while workers run, so raw pointers stay valid.
                std::vector<std::thread> pool;
                std::size_t per = (c1 - c0 + threads - 1) / threads;
                for (int k = 0; k < threads; ++k) {
                    std::size_t a = c0 + k * per, b = std::min(c1, a + per);
                    if (a >= b) break;
                    pool.emplace_back(fill, a, b, buf.data() + (a - c0) * ng * stride);
                }
                for (auto& th : pool) th.join();
            }
            for (std::size_t i = c0; i < c1; ++i) {
                for (std::size_t g = 0; g < ng; ++g) {
                    const std::uint64_t* w = buf.data() + ((i - c0) * ng + g) * stride;
                    if (t.find_raw(w)) continue;
                    if (t.count_ >= opts.cap) {
                        t.truncated_ = true;
                        break;
                    }
                    t.insert_raw(w);
                    if (t.track_) {
                        t.parent_.push_back(static_cast<std::uint32_t>(i));
                        t.via_.push_back(static_cast<std::uint16_t>(g + 1));
                    }
                }
                if (t.truncated_) break;
            }
        }
        begin = end;
        end = t.count_;
    }
    return t;
}

GroupTable subgroup_from_elements(int level, const std::vector<Portrait>& elems) {
    std::vector<Portrait> gens;
    GroupTable t = enumerate(gens, {}, level);
    for (const auto& e : elems) {
        if (e.level() != level) throw std::invalid_argument("element level does not match");
        if (t.index_of(e)) continue;
        gens.push_back(e);
        t = enumerate(gens, {}, level);
    }
    std::set<std::vector<std::uint64_t>> distinct;
    for (const auto& e : elems) distinct.insert(e.words());
    if (!elems.empty() && distinct.size() != t.size()) throw std::invalid_argument("element set is not a subgroup");
    return t;
}

bool is_transitive(const std::vector<Portrait>& gens, int m) {
    if (m < 0 || m > 26) throw std::invalid_argument("transitivity level out of range");
    if (m == 0) return true;
    std::vector<Portrait> tg;
    for (const auto& g : gens) {
        if (g.level() < m) throw std::invalid_argument("generator level below m");
        tg.push_back(truncate(g, m));
    }
    std::uint64_t leaves = std::uint64_t{1} << m;
    std::vector<bool> seen(leaves, false);
    std::vector<std::uint64_t> stack{0};
    seen[0] = true;
    std::uint64_t count = 1;
    while (!stack.empty()) {
        std::uint64_t x = stack.back();
        stack.pop_back();
        for (const auto& g : tg) {
            std::uint64_t y = apply_index(g, x);
            if (!seen[y]) {
                seen[y] = true;
                ++count;
                stack.push_back(y);
            }
        }
    }
    return count == leaves;
}

GroupTable normal_closure(const std::vector<Portrait>& ambient, const std::vector<Portrait>& subset,
                          const EnumerateOptions& opts, int level) {
    std::vector<Portrait> all = ambient;
    all.insert(all.end(), subset.begin(), subset.end());
    int n = common_level(all, level);
    std::vector<Portrait> gens = subset;
    std::vector<Portrait> inv;
    for (const auto& a : ambient) inv.push_back(invert(a));
    while (true) {
        GroupTable t = enumerate(gens, opts, n);
        if (t.truncated()) return t;
        std::vector<Portrait> added;
        for (std::size_t i = 0; i < ambient.size(); ++i) {
            for (const auto& s : gens) {
                Portrait c = compose(compose(ambient[i], s), inv[i]);
                if (!t.index_of(c)) {
                    bool dup = std::find(added.begin(), added.end(), c) != added.end();
                    if (!dup) added.push_back(c);
                }
            }
        }
        if (added.empty()) return t;
        gens.insert(gens.end(), added.begin(), added.end());
    }
}

GroupTable commutator_subgroup(const GroupTable& g, const EnumerateOptions& opts) {
    const auto& gens = g.generators();
    std::vector<Portrait> comms;
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            Portrait c = commutator(gens[i], gens[j]);
            if (!c.is_identity()) comms.push_back(c);
        }
    return normal_closure(gens, comms, opts, g.level());
}

GroupTable intersect(const GroupTable& a, const GroupTable& b) {
    if (a.level() != b.level()) throw std::invalid_argument("intersect: level mismatch");
    if (a.truncated() || b.truncated()) throw std::invalid_argument("intersect needs complete tables");
    std::vector<Portrait> common;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Portrait p = a.element(i);
        if (b.index_of(p)) common.push_back(std::move(p));
    }
    return subgroup_from_elements(a.level(), common);
}

bool is_subset(const GroupTable& a, const GroupTable& b) {
    if (a.level() != b.level()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!b.index_of(a.element(i))) return false;
    return true;
}

bool same_elements(const GroupTable& a, const GroupTable& b) {
    return a.size() == b.size() && is_subset(a, b);
}

std::uint64_t index(const GroupTable& a, const GroupTable& b) {
    if (a.truncated() || b.truncated()) throw std::invalid_argument("index needs complete tables");
    if (!is_subset(b, a)) throw std::invalid_argument("index: second group is not a subgroup of the first");
    return a.size() / b.size();
}

bool sign_image_is_full(const std::vector<Portrait>& gens, int m) {
    if (m < 0 || m > 63) throw std::invalid_argument("m out of range");
    std::vector<std::uint64_t> basis;
    for (const auto& g : gens) {
        if (g.level() < m) throw std::invalid_argument("generator level below m");
        std::uint64_t v = 0;
        for (int j = 1; j <= m; ++j)
            if (sign(g, j) < 0) v |= std::uint64_t{1} << (j - 1);
        for (std::uint64_t b : basis) v = std::min(v, v ^ b);
        if (v) {
            basis.push_back(v);
            std::sort(basis.rbegin(), basis.rend());
        }
    }
    return static_cast<int>(basis.size()) == m;
}

std::uint64_t count_transitive(const GroupTable& g) {
    if (g.truncated()) throw std::invalid_argument("count_transitive needs a complete table");
    std::uint64_t count = 0;
    int n = g.level();
    for (std::size_t i = 0; i < g.size(); ++i) {
        Portrait p = g.element(i);
        bool all = true;
        for (int m = 1; m <= n && all; ++m) all = sign(p, m) < 0;
        if (all) ++count;
    }
    return count;
}

std::vector<Portrait> vertex_swap_generators(int n) {
    std::vector<Portrait> out;
    Portrait id = Portrait::identity(n);
    for (std::size_t v = 0; v < id.bit_count(); ++v) {
        Portrait p = id;
        p.set_bit(v, true);
        out.push_back(p);
    }
    return out;
}

Portrait wn_element(int n, std::uint64_t i) {
    if (n < 0 || n > 6) throw std::invalid_argument("wn_element supports levels 0..6");
    std::size_t bits = (std::size_t{1} << n) - 1;
    if (bits < 64 && (i >> bits) != 0) throw std::invalid_argument("index exceeds |W_n|");
    if (n == 0) return Portrait::identity(0);
    return Portrait::from_words(n, {i});
}

namespace {

template <class Pred>
GroupTable scan_wn(int n, int max_level, Pred&& pred) {
    if (n > max_level) throw std::invalid_argument("brute-force scan of W_n limited to level " + std::to_string(max_level));
    if (n > 5) throw std::invalid_argument("brute-force scan of W_n is infeasible above level 5");
    std::uint64_t total = std::uint64_t{1} << ((std::uint64_t{1} << n) - 1);
    std::vector<Portrait> found;
    for (std::uint64_t i = 0; i < total; ++i) {
        Portrait x = wn_element(n, i);
        if (pred(x)) found.push_back(std::move(x));
    }
    return subgroup_from_elements(n, found);
}

}  // namespace

GroupTable normalizer_in_Wn(const GroupTable& g, int max_level) {
    if (g.truncated()) throw std::invalid_argument("normalizer needs a complete table");
    const auto& gens = g.generators();
    return scan_wn(g.level(), max_level, [&](const Portrait& x) {
        Portrait xi = invert(x);
        for (const auto& a : gens)
            if (!g.index_of(compose(compose(x, a), xi))) return false;
        return true;
    });
}

GroupTable centralizer_in_Wn(const GroupTable& g, int max_level) {
    const auto& gens = g.generators();
    return scan_wn(g.level(), max_level, [&](const Portrait& x) {
        for (const auto& a : gens)
            if (compose(x, a) != compose(a, x)) return false;
        return true;
    });
}

GroupTable centralizer_in_Wn(const Portrait& p, int max_level) {
    return scan_wn(p.level(), max_level, [&](const Portrait& x) { return compose(x, p) == compose(p, x); });
}

std::int64_t closed_form_log2_order(const GroupCase& c, int n) {
    if (n < 0 || n > 62) throw std::invalid_argument("closed form supports 0 <= n <= 62");
    const std::int64_t full = (std::int64_t{1} << n) - 1;
    const int r = c.r, s = c.s;
    if (c.periodic) {
        std::int64_t sum = 0;
        for (int m = 0; m < n; ++m) sum += (std::int64_t{1} << (n - 1 - m)) * (m / r);
        return full - sum;
    }
    if (n <= r) return full;
    if (s == 1 && r == 2) return n + 1;
    if (s == 1) return (std::int64_t{1} << n) - 3 * (std::int64_t{1} << (n - r)) + 2;
    if (s == 2 && r == 3) return (std::int64_t{1} << n) - 5 * (std::int64_t{1} << (n - 4)) + 2;
    return (std::int64_t{1} << n) - (std::int64_t{1} << (n - r + 1)) + 1;
}

boost::rational<std::int64_t> hausdorff_exact(const GroupCase& c) {
    using Q = boost::rational<std::int64_t>;
    if (c.r > 60) throw std::invalid_argument("r too large for exact rationals");
    const std::int64_t pr = std::int64_t{1} << c.r;
    if (c.periodic) return Q(1) - Q(1, pr - 1);
    if (c.s == 1 && c.r == 2) return Q(0);
    if (c.s == 1) return Q(1) - Q(3, pr);
    if (c.s == 2 && c.r == 3) return Q(11, 16);
    return Q(1) - Q(2, pr);
}

boost::rational<std::int64_t> hausdorff_partial(const GroupCase& c, int n) {
    if (n < 1) throw std::invalid_argument("partial Hausdorff quotient needs n >= 1");
    return {closed_form_log2_order(c, n), (std::int64_t{1} << n) - 1};
}

SignMatrixClass sign_matrix_class(const Portrait& p, int s, int r) {
    if (s < 2 || s >= r) throw std::invalid_argument("sign-matrix test needs 2 <= s < r");
    if (p.level() != r + 1) throw std::invalid_argument("sign-matrix test needs level r+1");
    auto [u, v, l] = p.decompose();
    SignMatrixClass out{};
    out.m[0][0] = sign(u, s);
    out.m[0][1] = sign(v, s);
    out.m[1][0] = sign(u, r);
    out.m[1][1] = sign(v, r);
    out.swap = l;
    return out;
}

bool in_Grplus1_by_signs(const Portrait& p, int s, int r) {
    SignMatrixClass c = sign_matrix_class(p, s, r);
    // Image subgroup {I, A, B, AB} with A = (-1 1; 1 -1), B = (1 -1; -1 1).
    return c.m[0][0] == c.m[1][1] && c.m[0][1] == c.m[1][0];
}

GenWord lift_to_G1(const GroupCase& c, const GenWord& x) {
    const int r = c.r, s = c.s;
    auto lift_letter = [&](int j) -> GenWord {
        if (c.periodic) {
            if (j < r) return {j + 1};
            return {1, 1};
        }
        if (j != r) return {j + 1};
        return {1, s + 1, 1};
    };
    GenWord out;
    for (int x_i : x) {
        int j = std::abs(x_i);
        if (j < 1 || j > r) throw std::invalid_argument("generator index out of range in lift");
        GenWord l = lift_letter(j);
        if (x_i < 0) l = inverse_gen_word(l);
        out.insert(out.end(), l.begin(), l.end());
    }
    return out;
}

}  // namespace arbor
