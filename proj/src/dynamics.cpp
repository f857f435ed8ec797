#include "arbor/dynamics.hpp"

#include <charconv>
#include <map>
#include <stdexcept>

namespace arbor {

namespace {

using boost::multiprecision::cpp_int;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1u) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

cpp_int parse_cpp_int(std::string_view s) {
    s = trim(s);
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw std::invalid_argument("expected an integer");
    cpp_int v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw std::invalid_argument("bad integer '" + std::string(s) + "'");
        v = v * 10 + (ch - '0');
    }
    return neg ? cpp_int(-v) : v;
}

std::uint64_t parse_u64(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    return v;
}

std::uint64_t reduce_mod(const cpp_int& v, std::uint64_t p) {
    cpp_int r = v % p;
    if (r < 0) r += p;
    return static_cast<std::uint64_t>(r);
}

std::size_t bits(const cpp_int& x) {
    if (x == 0) return 0;
    return boost::multiprecision::msb(boost::multiprecision::abs(x)) + 1;
}

}  // namespace

FieldSpec FieldSpec::Rationals() { return {}; }

FieldSpec FieldSpec::PrimeField(std::uint64_t p, std::optional<std::uint64_t> q) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("field characteristic must be an odd prime");
    if (q) {
        std::uint64_t x = *q;
        if (x < p) throw std::invalid_argument("q must be a power of p");
        while (x % p == 0) x /= p;
        if (x != 1) throw std::invalid_argument("q must be a power of p");
    }
    FieldSpec f;
    f.rational = false;
    f.p = p;
    f.q = q;
    return f;
}

FieldSpec FieldSpec::parse(std::string_view text, std::optional<std::uint64_t> q) {
    text = trim(text);
    if (text == "Q") {
        if (q) throw std::invalid_argument("q applies to finite fields only");
        return Rationals();
    }
    if (!text.empty() && text[0] == 'F') {
        text.remove_prefix(1);
        if (!text.empty() && text[0] == '_') text.remove_prefix(1);
        return PrimeField(parse_u64(text), q);
    }
    throw std::invalid_argument("field must be Q or F_p");
}

std::string FieldSpec::str() const {
    if (rational) return "Q";
    std::string s = "F_" + std::to_string(p);
    if (q) s += " (q=" + std::to_string(*q) + ")";
    return s;
}

std::string OrbitClass::kind_name() const {
    switch (kind) {
        case OrbitKind::Periodic: return "periodic";
        case OrbitKind::StrictlyPrePeriodic: return "preperiodic";
        case OrbitKind::InfiniteCertified: return "infinite";
        case OrbitKind::Unresolved: return "unresolved";
    }
    return "unresolved";
}

std::optional<GroupCase> OrbitClass::group_case() const {
    if (kind == OrbitKind::Periodic) return GroupCase::Periodic(r);
    if (kind == OrbitKind::StrictlyPrePeriodic) return GroupCase::PrePeriodic(s, r);
    return std::nullopt;
}

Rational parse_rational(std::string_view text) {
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_cpp_int(text));
    cpp_int den = parse_cpp_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(parse_cpp_int(text.substr(0, slash)), den);
}

namespace {

OrbitClass from_repeat(int i, int j) {
    OrbitClass o;
    o.r = j - 1;
    o.s = i - 1;
    o.kind = o.s == 0 ? OrbitKind::Periodic : OrbitKind::StrictlyPrePeriodic;
    return o;
}

}  // namespace

OrbitClass critical_orbit_rational(const Rational& c, int max_steps, int height_bound) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be positive");
    std::map<Rational, int> seen;
    const Rational bound = boost::multiprecision::abs(c) + 2;
    Rational p = c;
    std::vector<std::string> orbit;
    for (int i = 1; i <= max_steps; ++i) {
        auto it = seen.find(p);
        if (it != seen.end()) {
            OrbitClass o = from_repeat(it->second, i);
            o.steps = i;
            o.orbit = std::move(orbit);
            return o;
        }
        seen.emplace(p, i);
        orbit.push_back(p.str());
        if (boost::multiprecision::abs(p) >= bound) {
            OrbitClass o;
            o.kind = OrbitKind::InfiniteCertified;
            o.escape_index = i;
            o.steps = i;
            o.orbit = std::move(orbit);
            return o;
        }
        if (bits(boost::multiprecision::numerator(p)) > static_cast<std::size_t>(height_bound) ||
            bits(boost::multiprecision::denominator(p)) > static_cast<std::size_t>(height_bound)) {
            OrbitClass o;
            o.steps = i;
            o.orbit = std::move(orbit);
            return o;
        }
        p = p * p + c;
    }
    OrbitClass o;
    o.steps = max_steps;
    o.orbit = std::move(orbit);
    return o;
}

OrbitClass critical_orbit_mod_p(std::uint64_t c, std::uint64_t p) {
    FieldSpec::PrimeField(p);
    c %= p;
    auto f = [&](std::uint64_t x) { return (mulmod(x, x, p) + c) % p; };
    // Brent: cycle length lambda, then tail length mu of the sequence p_1, p_2, ...
    std::uint64_t power = 1, lambda = 1;
    std::uint64_t tortoise = c, hare = f(c);
    while (tortoise != hare) {
        if (power == lambda) {
            tortoise = hare;
            power *= 2;
            lambda = 0;
        }
        hare = f(hare);
        ++lambda;
    }
    std::uint64_t mu = 0;
    tortoise = hare = c;
    for (std::uint64_t i = 0; i < lambda; ++i) hare = f(hare);
    while (tortoise != hare) {
        tortoise = f(tortoise);
        hare = f(hare);
        ++mu;
    }
    if (mu + lambda > static_cast<std::uint64_t>(std::numeric_limits<int>::max() - 1))
        throw std::overflow_error("orbit too long");
    OrbitClass o = from_repeat(static_cast<int>(mu) + 1, static_cast<int>(mu + lambda) + 1);
    o.steps = o.r + 1;
    std::uint64_t x = c;
    for (int i = 0; i < o.steps && i < 64; ++i) {
        o.orbit.push_back(std::to_string(x));
        x = f(x);
    }
    return o;
}

OrbitClass critical_orbit(std::string_view c, const FieldSpec& field, int max_steps, int height_bound) {
    c = trim(c);
    auto mod = c.find("mod");
    if (field.rational) {
        if (mod != std::string_view::npos) throw std::invalid_argument("residue literal given for the rationals");
        return critical_orbit_rational(parse_rational(c), max_steps, height_bound);
    }
    if (mod != std::string_view::npos) {
        if (parse_u64(c.substr(mod + 3)) != field.p) throw std::invalid_argument("modulus does not match the field");
        c = c.substr(0, mod);
    }
    Rational v = parse_rational(c);
    std::uint64_t num = reduce_mod(boost::multiprecision::numerator(v), field.p);
    std::uint64_t den = reduce_mod(boost::multiprecision::denominator(v), field.p);
    if (den == 0) throw std::invalid_argument("denominator vanishes mod p");
    return critical_orbit_mod_p(mulmod(num, powmod(den, field.p - 2, field.p), field.p), field.p);
}

Rational normalize_quadratic(const Rational& a, const Rational& b, const Rational& c) {
    if (a == 0) throw std::invalid_argument("leading coefficient must be nonzero");
    return a * c + b / 2 - b * b / 4;
}

Catalog model_generators(const OrbitClass& orbit, int chain_length) {
    switch (orbit.kind) {
        case OrbitKind::Periodic: return periodic_generators(orbit.r);
        case OrbitKind::StrictlyPrePeriodic: return preperiodic_generators(orbit.s, orbit.r);
        case OrbitKind::InfiniteCertified: return infinite_chain(chain_length);
        case OrbitKind::Unresolved: break;
    }
    throw std::invalid_argument("orbit is unresolved");
}

Portrait b_infinity(const OrbitClass& orbit, int n) {
    auto gc = orbit.group_case();
    if (!gc) throw std::invalid_argument("b_infinity needs a finite orbit");
    Portrait prod = Portrait::identity(n);
    for (const auto& g : gc->catalog().generator_portraits(n)) prod = compose(prod, g);
    return invert(prod);
}

// ---- labels ----

bool CosetLabel::is_identity() const {
    switch (kind) {
        case Kind::Diagonal:
            for (const auto& k : diagonal)
                if (k.residue() != 1) return false;
            return true;
        case Kind::Dihedral: return dihedral.residue() == 1;
        case Kind::Pattern:
            for (int h : head)
                if (h) return false;
            return tail == 0;
    }
    return false;
}

namespace {

TwoAdic dihedral_rep(const TwoAdic& k) { return k.residue_mod(2) == 1 ? k : -k; }

}  // namespace

CosetLabel CosetLabel::operator*(const CosetLabel& o) const {
    if (kind != o.kind) throw std::invalid_argument("labels of different kinds");
    CosetLabel out = *this;
    switch (kind) {
        case Kind::Diagonal:
            if (diagonal.size() != o.diagonal.size()) throw std::invalid_argument("label length mismatch");
            for (std::size_t i = 0; i < diagonal.size(); ++i) out.diagonal[i] = diagonal[i] * o.diagonal[i];
            break;
        case Kind::Dihedral: out.dihedral = dihedral_rep(dihedral * o.dihedral); break;
        case Kind::Pattern:
            if (head.size() != o.head.size()) throw std::invalid_argument("label length mismatch");
            for (std::size_t i = 0; i < head.size(); ++i) out.head[i] = head[i] ^ o.head[i];
            out.tail = tail ^ o.tail;
            break;
    }
    return out;
}

bool CosetLabel::operator==(const CosetLabel& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Diagonal: return diagonal == o.diagonal;
        case Kind::Dihedral: return dihedral == o.dihedral;
        case Kind::Pattern: return head == o.head && tail == o.tail;
    }
    return false;
}

std::string CosetLabel::str() const {
    std::string s;
    switch (kind) {
        case Kind::Diagonal:
            s = "(";
            for (std::size_t i = 0; i < diagonal.size(); ++i) s += (i ? "," : "") + std::to_string(diagonal[i].residue());
            s += ") mod 2^" + std::to_string(diagonal.empty() ? 0 : diagonal[0].precision());
            return s;
        case Kind::Dihedral:
            return "+-" + std::to_string(dihedral.residue()) + " mod 2^" + std::to_string(dihedral.precision());
        case Kind::Pattern:
            s = "(";
            for (int h : head) s += std::to_string(h) + "; ";
            s += std::to_string(tail) + "," + std::to_string(tail) + ",...)";
            return s;
    }
    return s;
}

CosetLabel periodic_coset_label(int r, const TwoAdic& k) {
    if (r < 1) throw std::invalid_argument("r must be positive");
    if (!k.is_unit()) throw std::invalid_argument("k must be odd");
    CosetLabel l;
    l.kind = CosetLabel::Kind::Diagonal;
    l.diagonal.assign(r, k);
    return l;
}

CosetLabel prep_coset_label(int s, int r, const TwoAdic& k) {
    if (s < 1 || s >= r) throw std::invalid_argument("pre-periodic case needs 1 <= s < r");
    if (!k.is_unit()) throw std::invalid_argument("k must be odd");
    CosetLabel l;
    if (s == 1 && r == 2) {
        if (k.precision() < 2) throw std::domain_error("k mod +-1 needs precision >= 2");
        l.kind = CosetLabel::Kind::Dihedral;
        l.dihedral = dihedral_rep(k);
        return l;
    }
    l.kind = CosetLabel::Kind::Pattern;
    if (s >= 2 && r >= 4) {
        l.tail = theta1(k);
    } else if (s == 1) {
        l.tail = theta2(k);
    } else {
        l.head = {theta1(k)};
        l.tail = theta2(k);
    }
    return l;
}

ArithReport arith_description(const OrbitClass& orbit, const FieldSpec& field) {
    ArithReport rep;
    if (orbit.kind == OrbitKind::Unresolved) throw std::invalid_argument("orbit is unresolved");
    if (orbit.kind == OrbitKind::InfiniteCertified) {
        rep.case_name = "infinite";
        rep.model = "infinite_chain";
        rep.structure = "full W";
        rep.label_text = "G^arith = G^geom = W";
        rep.index_bound = "1";
        rep.quotient_order = 1;
        return rep;
    }
    GroupCase gc = *orbit.group_case();
    rep.case_name = gc.str();
    rep.model = gc.periodic ? "periodic_generators(" + std::to_string(gc.r) + ")"
                            : "preperiodic_generators(" + std::to_string(gc.s) + "," + std::to_string(gc.r) + ")";
    std::optional<TwoAdic> k;
    if (!field.rational) k = TwoAdic::make(static_cast<std::int64_t>(field.q.value_or(field.p)), TwoAdic::kDefaultPrecision);
    const int s = gc.s, r = gc.r;
    if (gc.periodic || (s == 1 && r == 2)) {
        bool periodic = gc.periodic;
        rep.structure = periodic ? "(Z2^x)^r diagonal" : "Z2^x/{+-1}";
        rep.index_bound = periodic ? "finite index subgroup of diag(Z2^x) over finitely generated fields"
                                   : "finite index subgroup of Z2^x/{+-1} over finitely generated fields";
        if (k) {
            rep.label = periodic ? periodic_coset_label(r, *k) : prep_coset_label(1, 2, *k);
            rep.label_text = rep.label->str();
            if (rep.label->is_identity()) rep.quotient_order = 1;
        } else {
            rep.label_text = periodic ? "full image diag(Z2^x)" : "full image Z2^x/{+-1}";
            rep.note = "over Q the cyclotomic character is onto Z2^x";
        }
        return rep;
    }
    int full_order;
    if (s >= 2 && r >= 4) {
        rep.structure = "prod F2 with theta pattern (theta1, theta1, ...)";
        rep.index_bound = "divides 2";
        full_order = 2;
    } else if (s == 1) {
        rep.structure = "prod F2 with theta pattern (theta2, theta2, ...)";
        rep.index_bound = "divides 2";
        full_order = 2;
    } else {
        rep.structure = "prod F2 with theta pattern (theta1; theta2, theta2, ...)";
        rep.index_bound = "divides 4";
        full_order = 4;
    }
    if (k) {
        rep.label = prep_coset_label(s, r, *k);
        rep.label_text = rep.label->str();
        rep.quotient_order = rep.label->is_identity() ? 1 : 2;
        rep.note = "Frobenius generates the image; cyclotomic value q";
    } else {
        rep.label_text = "full image of the theta pattern";
        rep.quotient_order = full_order;
        rep.note = "over Q the cyclotomic character is onto Z2^x";
    }
    return rep;
}

}  // namespace arbor
