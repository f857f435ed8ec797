#ifndef ARBOR_DYNAMICS_HPP
#define ARBOR_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "arbor/catalog.hpp"
#include "arbor/level_groups.hpp"
#include "arbor/two_adic.hpp"

namespace arbor {

using Rational = boost::multiprecision::cpp_rational;

struct FieldSpec {
    bool rational = true;
    std::uint64_t p = 0;
    std::optional<std::uint64_t> q;

    static FieldSpec Rationals();
    // p must be an odd prime; q, when given, a power of p.
    static FieldSpec PrimeField(std::uint64_t p, std::optional<std::uint64_t> q = std::nullopt);
    // "Q", "F_p" or "Fp".
    static FieldSpec parse(std::string_view text, std::optional<std::uint64_t> q = std::nullopt);
    std::string str() const;
};

enum class OrbitKind { Periodic, StrictlyPrePeriodic, InfiniteCertified, Unresolved };

struct OrbitClass {
    OrbitKind kind = OrbitKind::Unresolved;
    int s = 0;
    int r = 0;
    int escape_index = 0;
    int steps = 0;
    // p_1, p_2, ... as computed, as text.
    std::vector<std::string> orbit;

    std::string kind_name() const;
    std::optional<GroupCase> group_case() const;
};

Rational parse_rational(std::string_view text);
// "a", "a/b" or "a mod p" (the modulus must then match the field).
OrbitClass critical_orbit(std::string_view c, const FieldSpec& field, int max_steps = 64, int height_bound = 4096);
OrbitClass critical_orbit_rational(const Rational& c, int max_steps = 64, int height_bound = 4096);
OrbitClass critical_orbit_mod_p(std::uint64_t c, std::uint64_t p);

// a x^2 + b x + c is affinely conjugate to x^2 + (a c + b/2 - b^2/4).
Rational normalize_quadratic(const Rational& a, const Rational& b, const Rational& c);

// Infinite orbits yield the chain b1..b(chain_length) whose closure is all of W.
Catalog model_generators(const OrbitClass& orbit, int chain_length = 8);
// (a_1 ... a_r)^-1 at level n.
Portrait b_infinity(const OrbitClass& orbit, int n);

struct CosetLabel {
    enum class Kind { Diagonal, Dihedral, Pattern };
    Kind kind = Kind::Pattern;
    std::vector<TwoAdic> diagonal;
    // Representative congruent to 1 mod 4 of k mod {+-1}.
    TwoAdic dihedral;
    std::vector<int> head;
    int tail = 0;

    bool is_identity() const;
    CosetLabel operator*(const CosetLabel& o) const;
    bool operator==(const CosetLabel& o) const;
    std::string str() const;
};

CosetLabel periodic_coset_label(int r, const TwoAdic& k);
CosetLabel prep_coset_label(int s, int r, const TwoAdic& k);

struct ArithReport {
    std::string case_name;
    std::string model;
    std::string structure;
    std::optional<CosetLabel> label;
    std::string label_text;
    std::string index_bound;
    // Exact order of G^arith/G when the data determines it.
    std::optional<int> quotient_order;
    std::string note;
};

ArithReport arith_description(const OrbitClass& orbit, const FieldSpec& field);

}  // namespace arbor

#endif
