#ifndef ARBOR_RECURSION_HPP
#define ARBOR_RECURSION_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/portrait.hpp"
#include "arbor/two_adic.hpp"

namespace arbor {

// A symbol raised to a 2-adic exponent, or a literal constant.
struct Token {
    int symbol = -1;
    int constant = -1;
    TwoAdic exponent = TwoAdic::integer(1);

    static Token sym(int s, std::int64_t e = 1) { return {s, -1, TwoAdic::integer(e)}; }
    static Token sym(int s, TwoAdic e) { return {s, -1, e}; }
    static Token lit(int c) { return {-1, c, TwoAdic::integer(1)}; }
    bool is_constant() const { return constant >= 0; }
};

using SymbolWord = std::vector<Token>;

SymbolWord inverse_word(const SymbolWord& w);
SymbolWord concat(const SymbolWord& a, const SymbolWord& b);
// Merges adjacent powers of one symbol and drops exact zero exponents.
SymbolWord free_reduce(const SymbolWord& w);

// a = (left, right) sigma^nu
struct Equation {
    std::string name;
    SymbolWord left;
    SymbolWord right;
    bool nu = false;
};

// Immutable system of wreath recursions; copies share one evaluation cache.
class RecursionSystem {
public:
    RecursionSystem() = default;

    // Validates: names unique and non-empty, every reference resolves.
    static RecursionSystem define(std::vector<Equation> equations, std::vector<Portrait> constants = {});
    // One equation per line: "a1 = (a2, 1) s". Blank lines and '#' comments ignored.
    static RecursionSystem parse(std::string_view text);

    int size() const;
    const std::string& name(int symbol) const;
    int index_of(std::string_view name) const;
    std::optional<int> find(std::string_view name) const;
    const Equation& equation(int symbol) const;
    const std::vector<Portrait>& constants() const;

    Portrait evaluate(int symbol, int n) const;
    Portrait evaluate(std::string_view name, int n) const { return evaluate(index_of(name), n); }
    Portrait evaluate_word(const SymbolWord& w, int n) const;

    // Word syntax: space or '*' separated factors "a1", "a2^-1", "a^3", "a^5@16",
    // literal "[n:HEX]"; "1" or "()" is the empty word.
    SymbolWord parse_word(std::string_view text) const;
    std::string format_word(const SymbolWord& w) const;
    std::string to_text() const;

private:
    struct Data;
    struct Memo;
    std::shared_ptr<const Data> data_;
    std::shared_ptr<Memo> memo_;

    const std::vector<Portrait>& level_values(int n) const;
};

RecursionSystem define_system(std::vector<Equation> equations, std::vector<Portrait> constants = {});

// Bounded numeric check; "true" is not a proof of triviality on the whole tree.
bool is_trivial_to_level(const RecursionSystem& sys, const SymbolWord& w, int n);

// Sound sufficient test: each listed symbol has nu = 0 and both coordinates of the
// form h f h^-1 with f over the listed symbols and h over system symbols.
bool prove_trivial_syntactic(const RecursionSystem& sys, const std::vector<int>& symbols);
bool prove_trivial_syntactic(const RecursionSystem& sys, const std::vector<std::string>& symbols);

}  // namespace arbor

#endif
