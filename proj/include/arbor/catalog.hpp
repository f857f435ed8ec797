#ifndef ARBOR_CATALOG_HPP
#define ARBOR_CATALOG_HPP

#include <string>
#include <utility>
#include <vector>

#include "arbor/recursion.hpp"

namespace arbor {

// A recursion system with its distinguished generators and named derived words.
struct Catalog {
    RecursionSystem system;
    std::vector<int> generators;
    std::vector<std::pair<std::string, SymbolWord>> words;

    // Symbol or named word.
    SymbolWord word(std::string_view name) const;
    Portrait eval(std::string_view name, int n) const;
    std::vector<Portrait> generator_portraits(int n) const;
};

// a = (a, 1) s
Catalog standard_odometer();
// a = (a, 1) s, z = (z, a^l z) with l = (k - 1)/2.
Catalog odometer_zk(const TwoAdic& k);
// a1 = (ar, 1) s, ai = (a(i-1), 1); named word a0 = a1 ... ar.
Catalog periodic_generators(int r);
// a1 = s, a(s+1) = (as, ar), ai = (a(i-1), 1) otherwise.
Catalog preperiodic_generators(int s, int r);
// b1 = s, bi = (b(i-1), 1).
Catalog infinite_chain(int count);
// Periodic generators plus w1..wr with wi = (w(i-1), ar^l(1-i) w(i-1)), indices mod r.
// ks[i-1] is k_i.
Catalog periodic_normalizer(int r, const std::vector<TwoAdic>& ks);
// Pre-periodic generators plus w1..w(count) with w(i+1) = (wi, wi).
Catalog prep_w_chain(int s, int r, int count);
// Case (2,3) generators plus w0 = (a2 w0, a3 w0).
Catalog prep_w0();
// Case (1,2) generators plus a0 = a1 a2 = (a2, a1) s, v = (a0^((1-k)/2) v, v);
// named word w = a0^((1-k)/2) v.
Catalog dihedral_vw(const TwoAdic& k);

}  // namespace arbor

#endif
