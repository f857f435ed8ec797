#include "arbor/portrait.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>

namespace arbor {

namespace {

constexpr char kHex[] = "0123456789abcdef";

std::size_t level_start(int l) { return (std::size_t{1} << l) - 1; }

void copy_bits(std::vector<std::uint64_t>& dst, std::size_t dst_off,
               const std::vector<std::uint64_t>& src, std::size_t src_off, std::size_t len) {
    // Word-sized chunks where possible; ranges here are always level blocks.
    while (len > 0) {
        std::size_t s_bit = src_off & 63, d_bit = dst_off & 63;
        std::size_t chunk = std::min<std::size_t>({len, 64 - s_bit, 64 - d_bit});
        std::uint64_t m = chunk == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << chunk) - 1);
        std::uint64_t v = (src[src_off >> 6] >> s_bit) & m;
        std::uint64_t& d = dst[dst_off >> 6];
        d = (d & ~(m << d_bit)) | (v << d_bit);
        src_off += chunk;
        dst_off += chunk;
        len -= chunk;
    }
}

std::size_t popcount_range(const std::vector<std::uint64_t>& w, std::size_t off, std::size_t len) {
    std::size_t total = 0;
    while (len > 0) {
        std::size_t b = off & 63;
        std::size_t chunk = std::min<std::size_t>(len, 64 - b);
        std::uint64_t m = chunk == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << chunk) - 1);
        total += std::popcount((w[off >> 6] >> b) & m);
        off += chunk;
        len -= chunk;
    }
    return total;
}

// img[v] = image vertex of v under p, for all internal vertices.
void vertex_images(const Portrait& p, std::vector<std::uint32_t>& img) {
    std::size_t total = p.bit_count();
    img.resize(total);
    if (total == 0) return;
    img[0] = 0;
    std::size_t inner = total >> 1;  // vertices with children inside the portrait
    for (std::size_t v = 0; v < inner; ++v) {
        std::uint32_t u = img[v];
        std::uint32_t b = p.bit(v);
        img[2 * v + 1] = 2 * u + 1 + b;
        img[2 * v + 2] = 2 * u + 2 - b;
    }
}

}  // namespace

void check_level(int n) {
    if (n < 0 || n > kMaxLevel)
        throw std::out_of_range("level " + std::to_string(n) + " outside [0, " + std::to_string(kMaxLevel) + "]");
}

std::size_t word_count(int n) { return ((std::size_t{1} << n) - 1 + 63) / 64; }

Portrait Portrait::identity(int n) {
    check_level(n);
    Portrait p;
    p.level_ = n;
    p.words_.assign(word_count(n), 0);
    return p;
}

Portrait Portrait::sigma(int n) {
    if (n < 1) throw std::invalid_argument("sigma needs level >= 1");
    Portrait p = identity(n);
    p.words_[0] = 1;
    return p;
}

Portrait Portrait::from_words(int n, std::vector<std::uint64_t> words) {
    check_level(n);
    if (words.size() != word_count(n)) throw std::invalid_argument("wrong word count for level");
    std::size_t bits = (std::size_t{1} << n) - 1;
    if (bits % 64 != 0 && !words.empty() && (words.back() >> (bits % 64)) != 0)
        throw std::invalid_argument("padding bits set");
    Portrait p;
    p.level_ = n;
    p.words_ = std::move(words);
    return p;
}

void Portrait::set_bit(std::size_t v, bool b) {
    std::uint64_t m = std::uint64_t{1} << (v & 63);
    if (b)
        words_[v >> 6] |= m;
    else
        words_[v >> 6] &= ~m;
}

bool Portrait::is_identity() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool Portrait::operator<(const Portrait& o) const {
    if (level_ != o.level_) return level_ < o.level_;
    return words_ < o.words_;
}

std::size_t Portrait::hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(level_);
    for (std::uint64_t w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xbf58476d1ce4e5b9ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
}

Portrait Portrait::pair(const Portrait& p0, const Portrait& p1, bool swap) {
    if (p0.level_ != p1.level_) throw std::invalid_argument("pair: level mismatch");
    int n = p0.level_ + 1;
    Portrait p = identity(n);
    p.set_bit(0, swap);
    for (int l = 0; l + 1 < n; ++l) {
        std::size_t len = std::size_t{1} << l;
        std::size_t dst = level_start(l + 1);
        copy_bits(p.words_, dst, p0.words_, level_start(l), len);
        copy_bits(p.words_, dst + len, p1.words_, level_start(l), len);
    }
    return p;
}

std::tuple<Portrait, Portrait, bool> Portrait::decompose() const {
    if (level_ < 1) throw std::invalid_argument("decompose needs level >= 1");
    Portrait p0 = identity(level_ - 1), p1 = identity(level_ - 1);
    for (int l = 0; l + 1 < level_; ++l) {
        std::size_t len = std::size_t{1} << l;
        std::size_t src = level_start(l + 1);
        copy_bits(p0.words_, level_start(l), words_, src, len);
        copy_bits(p1.words_, level_start(l), words_, src + len, len);
    }
    return {std::move(p0), std::move(p1), bit(0)};
}

void compose_words(int n, const std::uint64_t* p, const std::uint64_t* q, std::uint64_t* out) {
    // Sections are indexed by output letter: p = (p0, p1) s^b acts by s^b first.
    // Then (p q)(v) = p(v) + q(img(v)), img(v) the vertex of q feeding p's vertex v.
    std::size_t total = (std::size_t{1} << n) - 1;
    std::size_t wc = word_count(n);
    for (std::size_t i = 0; i < wc; ++i) out[i] = 0;
    if (total == 0) return;
    std::size_t inner = total >> 1;
    if (n <= 6) {
        std::uint64_t pw = p[0], qw = q[0], o = 0;
        std::uint8_t img[64];
        img[0] = 0;
        for (std::size_t v = 0; v < total; ++v) {
            unsigned u = img[v];
            unsigned b = (pw >> v) & 1u;
            o |= static_cast<std::uint64_t>(((qw >> u) & 1u) ^ b) << v;
            if (v < inner) {
                img[2 * v + 1] = static_cast<std::uint8_t>(2 * u + 1 + b);
                img[2 * v + 2] = static_cast<std::uint8_t>(2 * u + 2 - b);
            }
        }
        out[0] = o;
        return;
    }
    auto bit = [](const std::uint64_t* w, std::size_t v) { return (w[v >> 6] >> (v & 63)) & 1u; };
    thread_local std::vector<std::uint32_t> img;
    img.resize(total);
    img[0] = 0;
    for (std::size_t v = 0; v < total; ++v) {
        std::uint32_t u = img[v];
        std::uint64_t b = bit(p, v);
        out[v >> 6] |= (bit(q, u) ^ b) << (v & 63);
        if (v < inner) {
            img[2 * v + 1] = static_cast<std::uint32_t>(2 * u + 1 + b);
            img[2 * v + 2] = static_cast<std::uint32_t>(2 * u + 2 - b);
        }
    }
}

Portrait compose(const Portrait& p, const Portrait& q) {
    if (p.level() != q.level()) throw std::invalid_argument("compose: level mismatch");
    int n = q.level();
    std::vector<std::uint64_t> words(word_count(n));
    compose_words(n, p.words().data(), q.words().data(), words.data());
    return Portrait::from_words(n, std::move(words));
}

Portrait invert(const Portrait& p) {
    Portrait out = Portrait::identity(p.level());
    thread_local std::vector<std::uint32_t> img;
    vertex_images(p, img);
    for (std::size_t v = 0; v < img.size(); ++v)
        if (p.bit(v)) out.set_bit(img[v], true);
    return out;
}

Portrait conjugate(const Portrait& w, const Portrait& p) { return compose(compose(w, p), invert(w)); }

Portrait commutator(const Portrait& p, const Portrait& q) {
    return compose(compose(p, q), compose(invert(p), invert(q)));
}

std::vector<int> apply(const Portrait& p, const std::vector<int>& leaf) {
    if (static_cast<int>(leaf.size()) != p.level()) throw std::invalid_argument("apply: leaf length must equal level");
    std::vector<int> out(leaf.size());
    std::size_t v = 0;
    for (std::size_t t = 0; t < leaf.size(); ++t) {
        if (leaf[t] != 0 && leaf[t] != 1) throw std::invalid_argument("apply: letters must be 0 or 1");
        int y = leaf[t] ^ static_cast<int>(p.bit(v));
        out[t] = y;
        v = 2 * v + 1 + y;
    }
    return out;
}

std::uint64_t apply_index(const Portrait& p, std::uint64_t leaf) {
    int n = p.level();
    std::uint64_t out = 0;
    std::size_t v = 0;
    for (int t = 0; t < n; ++t) {
        std::uint64_t y = ((leaf >> t) & 1u) ^ static_cast<std::uint64_t>(p.bit(v));
        out |= y << t;
        v = 2 * v + 1 + y;
    }
    return out;
}

Portrait truncate(const Portrait& p, int m) {
    if (m < 0 || m > p.level()) throw std::invalid_argument("truncate: target level out of range");
    std::vector<std::uint64_t> words(word_count(m), 0);
    if (m > 0) copy_bits(words, 0, p.words(), 0, (std::size_t{1} << m) - 1);
    return Portrait::from_words(m, std::move(words));
}

Portrait section(const Portrait& p, const std::vector<int>& word) {
    int d = static_cast<int>(word.size());
    if (d > p.level()) throw std::invalid_argument("section: word longer than level");
    std::size_t v = 0;
    for (int x : word) v = 2 * v + 1 + (x & 1);
    int m = p.level() - d;
    std::vector<std::uint64_t> words(word_count(m), 0);
    for (int l = 0; l < m; ++l) {
        std::size_t len = std::size_t{1} << l;
        copy_bits(words, level_start(l), p.words(), v * len + level_start(l), len);
    }
    return Portrait::from_words(m, std::move(words));
}

int sign(const Portrait& p, int m) {
    if (m < 1 || m > p.level()) throw std::invalid_argument("sign: level out of range");
    std::size_t c = popcount_range(p.words(), level_start(m - 1), std::size_t{1} << (m - 1));
    return (c & 1u) ? -1 : 1;
}

std::vector<int> sign_vector(const Portrait& p) {
    std::vector<int> s(p.level());
    for (int m = 1; m <= p.level(); ++m) s[m - 1] = sign(p, m);
    return s;
}

int order_log2(const Portrait& p) {
    int e = 0;
    Portrait x = p;
    while (!x.is_identity()) {
        x = compose(x, x);
        ++e;
    }
    return e;
}

namespace {

Portrait power_residue(const Portrait& p, std::uint64_t k) {
    Portrait result = Portrait::identity(p.level());
    Portrait base = p;
    while (k) {
        if (k & 1u) result = compose(result, base);
        k >>= 1;
        if (k) base = compose(base, base);
    }
    return result;
}

}  // namespace

Portrait power(const Portrait& p, std::int64_t k) {
    int e = order_log2(p);
    std::uint64_t mask = e >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << e) - 1);
    return power_residue(p, static_cast<std::uint64_t>(k) & mask);
}

Portrait power(const Portrait& p, const TwoAdic& k) {
    int e = order_log2(p);
    if (k.precision() < e)
        throw std::domain_error("power: exponent precision " + std::to_string(k.precision()) +
                                " below element order 2^" + std::to_string(e));
    return power_residue(p, k.residue_mod(e));
}

std::string encode(const Portrait& p) {
    std::size_t bytes = (p.bit_count() + 7) / 8;
    std::string out = std::to_string(p.level()) + ":";
    out.reserve(out.size() + 2 * bytes);
    for (std::size_t i = 0; i < bytes; ++i) {
        unsigned b = static_cast<unsigned>((p.words()[i / 8] >> (8 * (i % 8))) & 0xffu);
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 15]);
    }
    return out;
}

Portrait decode(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("portrait text must look like n:HEX");
    int n = -1;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + colon, n);
    if (ec != std::errc() || ptr != text.data() + colon) throw std::invalid_argument("bad level in portrait text");
    check_level(n);
    std::string_view hex = text.substr(colon + 1);
    std::size_t bits = (std::size_t{1} << n) - 1;
    std::size_t bytes = (bits + 7) / 8;
    if (hex.size() != 2 * bytes)
        throw std::invalid_argument("portrait text has " + std::to_string(hex.size()) + " hex digits, expected " +
                                    std::to_string(2 * bytes));
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("non-hex digit in portrait text");
    };
    std::vector<std::uint64_t> words(word_count(n), 0);
    for (std::size_t i = 0; i < bytes; ++i) {
        std::uint64_t b = (nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]);
        if (i == bytes - 1 && bits % 8 != 0 && (b >> (bits % 8)) != 0)
            throw std::invalid_argument("padding bits set in portrait text");
        words[i / 8] |= b << (8 * (i % 8));
    }
    return Portrait::from_words(n, std::move(words));
}

Portrait random_element(int n, std::mt19937_64& rng) {
    check_level(n);
    std::vector<std::uint64_t> words(word_count(n));
    for (auto& w : words) w = rng();
    std::size_t bits = (std::size_t{1} << n) - 1;
    if (!words.empty() && bits % 64 != 0) words.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
    return Portrait::from_words(n, std::move(words));
}

Portrait random_element(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_element(n, rng);
}

}  // namespace arbor
