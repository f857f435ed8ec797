#include "arbor/recursion.hpp"

#include <cctype>
#include <charconv>
#include <deque>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace arbor {

struct RecursionSystem::Data {
    std::vector<Equation> equations;
    std::vector<Portrait> constants;
    std::unordered_map<std::string, int> index;
};

struct RecursionSystem::Memo {
    std::mutex mutex;
    // levels[l][symbol]; deque keeps references stable while growing.
    std::deque<std::vector<Portrait>> levels;
};

namespace {

bool exact_int(const TwoAdic& e) { return e.precision() == TwoAdic::kMaxPrecision; }

std::int64_t as_signed(const TwoAdic& e) { return static_cast<std::int64_t>(e.residue()); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::int64_t parse_int(std::string_view s, const char* what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

// Parses a word, resolving names through the callback; literals go to `constants`.
template <class Resolve>
SymbolWord parse_word_impl(std::string_view text, Resolve&& resolve, std::vector<Portrait>* constants,
                           int constant_count) {
    SymbolWord w;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
    };
    skip();
    while (i < text.size()) {
        char c = text[i];
        if (c == '(') {
            if (i + 1 < text.size() && text[i + 1] == ')') {
                i += 2;
                skip();
                continue;
            }
            throw std::invalid_argument("unexpected '(' in word");
        }
        if (c == '1' && (i + 1 == text.size() || !is_name_char(text[i + 1]))) {
            ++i;
            skip();
            continue;
        }
        if (c == '[') {
            auto close = text.find(']', i);
            if (close == std::string_view::npos) throw std::invalid_argument("unterminated literal");
            Portrait p = decode(trim(text.substr(i + 1, close - i - 1)));
            if (!constants) throw std::invalid_argument("literal constants not allowed here");
            constants->push_back(std::move(p));
            w.push_back(Token::lit(constant_count + static_cast<int>(constants->size()) - 1));
            i = close + 1;
            skip();
            continue;
        }
        if (!is_name_start(c)) throw std::invalid_argument(std::string("unexpected character '") + c + "' in word");
        std::size_t j = i;
        while (j < text.size() && is_name_char(text[j])) ++j;
        int sym = resolve(text.substr(i, j - i));
        i = j;
        TwoAdic e = TwoAdic::integer(1);
        if (i < text.size() && text[i] == '^') {
            ++i;
            std::size_t k = i;
            while (k < text.size() && (text[k] == '-' || text[k] == '@' || std::isdigit(static_cast<unsigned char>(text[k]))))
                ++k;
            std::string_view ex = text.substr(i, k - i);
            auto at = ex.find('@');
            if (at == std::string_view::npos) {
                e = TwoAdic::integer(parse_int(ex, "exponent"));
            } else {
                e = TwoAdic::make(parse_int(ex.substr(0, at), "exponent"),
                                  static_cast<int>(parse_int(ex.substr(at + 1), "precision")));
            }
            i = k;
        }
        w.push_back(Token::sym(sym, e));
        skip();
    }
    return w;
}

// Splits "(L, R)" at the top-level comma.
std::pair<std::string_view, std::string_view> split_pair(std::string_view body) {
    int depth = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) return {trim(body.substr(0, i)), trim(body.substr(i + 1))};
    }
    throw std::invalid_argument("expected '(left, right)'");
}

}  // namespace

SymbolWord inverse_word(const SymbolWord& w) {
    SymbolWord out(w.rbegin(), w.rend());
    for (auto& t : out) {
        if (t.is_constant()) throw std::invalid_argument("cannot invert a word with literal constants");
        t.exponent = -t.exponent;
    }
    return out;
}

SymbolWord concat(const SymbolWord& a, const SymbolWord& b) {
    SymbolWord out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

SymbolWord free_reduce(const SymbolWord& w) {
    SymbolWord out;
    for (const Token& t : w) {
        if (!t.is_constant() && exact_int(t.exponent) && t.exponent.is_zero()) continue;
        if (!out.empty() && !t.is_constant() && !out.back().is_constant() && out.back().symbol == t.symbol) {
            TwoAdic e = out.back().exponent + t.exponent;
            if (exact_int(e) && e.is_zero())
                out.pop_back();
            else
                out.back().exponent = e;
            continue;
        }
        out.push_back(t);
    }
    return out;
}

RecursionSystem RecursionSystem::define(std::vector<Equation> equations, std::vector<Portrait> constants) {
    auto data = std::make_shared<Data>();
    for (std::size_t i = 0; i < equations.size(); ++i) {
        const std::string& n = equations[i].name;
        if (n.empty() || !is_name_start(n[0])) throw std::invalid_argument("invalid symbol name '" + n + "'");
        if (!data->index.emplace(n, static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate symbol '" + n + "'");
    }
    int count = static_cast<int>(equations.size());
    int ccount = static_cast<int>(constants.size());
    for (const auto& eq : equations) {
        for (const SymbolWord* w : {&eq.left, &eq.right}) {
            for (const Token& t : *w) {
                if (t.is_constant()) {
                    if (t.constant >= ccount) throw std::invalid_argument("unknown constant in '" + eq.name + "'");
                } else if (t.symbol < 0 || t.symbol >= count) {
                    throw std::invalid_argument("unknown symbol reference in '" + eq.name + "'");
                }
            }
        }
    }
    data->equations = std::move(equations);
    data->constants = std::move(constants);
    RecursionSystem sys;
    sys.data_ = std::move(data);
    sys.memo_ = std::make_shared<Memo>();
    return sys;
}

RecursionSystem define_system(std::vector<Equation> equations, std::vector<Portrait> constants) {
    return RecursionSystem::define(std::move(equations), std::move(constants));
}

RecursionSystem RecursionSystem::parse(std::string_view text) {
    struct Raw {
        std::string name;
        std::string_view left, right;
        bool nu;
    };
    std::vector<Raw> raws;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        auto eqpos = line.find('=');
        if (eqpos == std::string_view::npos) throw std::invalid_argument("missing '=' in: " + std::string(line));
        Raw r;
        r.name = std::string(trim(line.substr(0, eqpos)));
        std::string_view rhs = trim(line.substr(eqpos + 1));
        r.nu = false;
        if (rhs == "s" || rhs == "sigma") {
            r.nu = true;
        } else if (rhs == "1" || rhs == "()") {
        } else {
            if (rhs.empty() || rhs.front() != '(') throw std::invalid_argument("expected '(' in: " + std::string(line));
            int depth = 0;
            std::size_t close = std::string_view::npos;
            for (std::size_t i = 0; i < rhs.size(); ++i) {
                if (rhs[i] == '(' || rhs[i] == '[') ++depth;
                if (rhs[i] == ')' || rhs[i] == ']') {
                    if (--depth == 0 && rhs[i] == ')') {
                        close = i;
                        break;
                    }
                }
            }
            if (close == std::string_view::npos) throw std::invalid_argument("unbalanced parentheses in: " + std::string(line));
            std::tie(r.left, r.right) = split_pair(rhs.substr(1, close - 1));
            std::string_view tail = trim(rhs.substr(close + 1));
            if (tail == "s" || tail == "sigma")
                r.nu = true;
            else if (!tail.empty())
                throw std::invalid_argument("unexpected trailing text in: " + std::string(line));
        }
        raws.push_back(r);
    }
    std::unordered_map<std::string, int> names;
    for (std::size_t i = 0; i < raws.size(); ++i) names.emplace(raws[i].name, static_cast<int>(i));
    auto resolve = [&](std::string_view n) {
        auto it = names.find(std::string(n));
        if (it == names.end()) throw std::invalid_argument("unknown symbol '" + std::string(n) + "'");
        return it->second;
    };
    std::vector<Equation> eqs;
    std::vector<Portrait> constants;
    for (const Raw& r : raws) {
        Equation e;
        e.name = r.name;
        e.nu = r.nu;
        e.left = parse_word_impl(r.left, resolve, &constants, 0);
        e.right = parse_word_impl(r.right, resolve, &constants, 0);
        eqs.push_back(std::move(e));
    }
    return define(std::move(eqs), std::move(constants));
}

int RecursionSystem::size() const { return data_ ? static_cast<int>(data_->equations.size()) : 0; }

const std::string& RecursionSystem::name(int symbol) const { return equation(symbol).name; }

std::optional<int> RecursionSystem::find(std::string_view name) const {
    if (!data_) return std::nullopt;
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
}

int RecursionSystem::index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) throw std::invalid_argument("unknown symbol '" + std::string(name) + "'");
    return *i;
}

const Equation& RecursionSystem::equation(int symbol) const {
    if (symbol < 0 || symbol >= size()) throw std::out_of_range("symbol index out of range");
    return data_->equations[symbol];
}

const std::vector<Portrait>& RecursionSystem::constants() const {
    static const std::vector<Portrait> empty;
    return data_ ? data_->constants : empty;
}

namespace {

Portrait eval_word_with(const SymbolWord& w, int n, const std::vector<Portrait>& values,
                        const std::vector<Portrait>& constants) {
    Portrait out = Portrait::identity(n);
    for (const Token& t : w) {
        Portrait f;
        if (t.is_constant()) {
            const Portrait& c = constants.at(t.constant);
            if (c.level() < n)
                throw std::domain_error("literal constant of level " + std::to_string(c.level()) +
                                        " used at level " + std::to_string(n));
            f = truncate(c, n);
        } else {
            const Portrait& base = values.at(t.symbol);
            if (exact_int(t.exponent) && t.exponent.residue() == 1)
                f = base;
            else if (exact_int(t.exponent) && as_signed(t.exponent) == -1)
                f = invert(base);
            else
                f = power(base, t.exponent);
        }
        out = compose(out, f);
    }
    return out;
}

}  // namespace

const std::vector<Portrait>& RecursionSystem::level_values(int n) const {
    check_level(n);
    if (!data_) throw std::logic_error("empty recursion system");
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto& levels = memo_->levels;
    while (static_cast<int>(levels.size()) <= n) {
        int l = static_cast<int>(levels.size());
        std::vector<Portrait> vals;
        vals.reserve(data_->equations.size());
        for (const Equation& eq : data_->equations) {
            if (l == 0) {
                vals.push_back(Portrait::identity(0));
                continue;
            }
            const auto& prev = levels[l - 1];
            vals.push_back(Portrait::pair(eval_word_with(eq.left, l - 1, prev, data_->constants),
                                          eval_word_with(eq.right, l - 1, prev, data_->constants), eq.nu));
        }
        levels.push_back(std::move(vals));
    }
    return levels[n];
}

Portrait RecursionSystem::evaluate(int symbol, int n) const {
    equation(symbol);
    return level_values(n)[symbol];
}

Portrait RecursionSystem::evaluate_word(const SymbolWord& w, int n) const {
    return eval_word_with(w, n, level_values(n), constants());
}

SymbolWord RecursionSystem::parse_word(std::string_view text) const {
    return parse_word_impl(text, [this](std::string_view n) { return index_of(n); }, nullptr, 0);
}

std::string RecursionSystem::format_word(const SymbolWord& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (const Token& t : w) {
        if (!out.empty()) out += ' ';
        if (t.is_constant()) {
            out += "[" + encode(constants().at(t.constant)) + "]";
            continue;
        }
        out += name(t.symbol);
        if (exact_int(t.exponent)) {
            std::int64_t e = as_signed(t.exponent);
            if (e != 1) out += "^" + std::to_string(e);
        } else {
            out += "^" + std::to_string(t.exponent.residue()) + "@" + std::to_string(t.exponent.precision());
        }
    }
    return out;
}

std::string RecursionSystem::to_text() const {
    std::string out;
    for (int i = 0; i < size(); ++i) {
        const Equation& eq = equation(i);
        out += eq.name + " = (" + format_word(eq.left) + ", " + format_word(eq.right) + ")";
        if (eq.nu) out += " s";
        out += "\n";
    }
    return out;
}

bool is_trivial_to_level(const RecursionSystem& sys, const SymbolWord& w, int n) {
    return sys.evaluate_word(w, n).is_identity();
}

namespace {

bool same_token(const Token& a, const Token& b) {
    return !a.is_constant() && !b.is_constant() && a.symbol == b.symbol && a.exponent == b.exponent;
}

bool conjugate_shape(const SymbolWord& raw, const std::set<int>& candidates) {
    SymbolWord w = free_reduce(raw);
    for (const Token& t : w)
        if (t.is_constant()) return false;
    std::size_t len = w.size();
    for (std::size_t h = 0; 2 * h <= len; ++h) {
        // prefix of length h must be inverse of suffix of length h
        bool ok = true;
        for (std::size_t i = 0; i < h && ok; ++i) {
            Token inv = w[len - 1 - i];
            inv.exponent = -inv.exponent;
            ok = same_token(w[i], inv);
        }
        if (!ok) break;
        bool middle = true;
        for (std::size_t i = h; i < len - h && middle; ++i) middle = candidates.count(w[i].symbol) > 0;
        if (middle) return true;
    }
    return false;
}

}  // namespace

bool prove_trivial_syntactic(const RecursionSystem& sys, const std::vector<int>& symbols) {
    std::set<int> cand(symbols.begin(), symbols.end());
    for (int s : cand) {
        const Equation& eq = sys.equation(s);
        if (eq.nu) return false;
        if (!conjugate_shape(eq.left, cand) || !conjugate_shape(eq.right, cand)) return false;
    }
    return true;
}

bool prove_trivial_syntactic(const RecursionSystem& sys, const std::vector<std::string>& symbols) {
    std::vector<int> idx;
    for (const auto& s : symbols) idx.push_back(sys.index_of(s));
    return prove_trivial_syntactic(sys, idx);
}

}  // namespace arbor
