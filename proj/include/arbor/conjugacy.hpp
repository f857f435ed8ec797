#ifndef ARBOR_CONJUGACY_HPP
#define ARBOR_CONJUGACY_HPP

#include <optional>
#include <vector>

#include "arbor/level_groups.hpp"
#include "arbor/portrait.hpp"
#include "arbor/two_adic.hpp"

namespace arbor {

// conjugator * lhs * conjugator^-1 == rhs, checked on construction.
class ConjugacyWitness {
public:
    ConjugacyWitness(Portrait conjugator, Portrait lhs, Portrait rhs);
    const Portrait& conjugator() const { return conjugator_; }
    const Portrait& lhs() const { return lhs_; }
    const Portrait& rhs() const { return rhs_; }

private:
    Portrait conjugator_, lhs_, rhs_;
};

// Least representative of the W_n-conjugacy class under a fixed recursive normal form.
Portrait conjugacy_canonical_form(const Portrait& p);
bool are_conjugate_in_Wn(const Portrait& p, const Portrait& q);
std::optional<ConjugacyWitness> find_conjugator_in_Wn(const Portrait& p, const Portrait& q);

// c with c p c^-1 = p^k, k odd.
ConjugacyWitness power_conjugator(const Portrait& p, const TwoAdic& k);
ConjugacyWitness power_conjugator(const Portrait& p, std::int64_t k);

bool is_odometer_to_level(const Portrait& p);
// Both arguments must act as a single cycle on their last level.
ConjugacyWitness transitive_conjugator(const Portrait& p, const Portrait& q);

// The recursive shape condition relating the b_i to each other at level n.
bool shape_check(const GroupCase& c, const std::vector<Portrait>& bs);

struct SemirigidityResult {
    Portrait w;
    std::vector<Portrait> z;
    // z[i] = evaluate_gen_word(generators, z_words[i]).
    std::vector<GenWord> z_words;
};

// w and z_i in G_n with b_i = (w z_i) a_i (w z_i)^-1; every equation is verified.
SemirigidityResult semirigidity_conjugator(const GroupCase& c, const std::vector<Portrait>& bs, int max_level = 5);

// One w in W_n with w a_i w^-1 = b_i for the periodic r = 2 generators (n <= 4).
std::optional<Portrait> rigidity_conjugator_r2(const Portrait& b1, const Portrait& b2);

}  // namespace arbor

#endif
