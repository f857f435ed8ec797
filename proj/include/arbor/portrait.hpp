#ifndef ARBOR_PORTRAIT_HPP
#define ARBOR_PORTRAIT_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "arbor/two_adic.hpp"

namespace arbor {

constexpr int kMaxLevel = 30;

// Automorphism of the depth-n binary tree, stored as 2^n - 1 swap bits.
// Vertex v has children 2v+1 (letter 0) and 2v+2 (letter 1); level l
// occupies vertices [2^l - 1, 2^(l+1) - 1).
class Portrait {
public:
    Portrait() = default;

    static Portrait identity(int n);
    static Portrait sigma(int n);
    static Portrait pair(const Portrait& p0, const Portrait& p1, bool swap);
    // Build from raw packed words; extra high bits must be clear.
    static Portrait from_words(int n, std::vector<std::uint64_t> words);

    std::tuple<Portrait, Portrait, bool> decompose() const;

    int level() const { return level_; }
    std::size_t bit_count() const { return (std::size_t{1} << level_) - 1; }
    bool bit(std::size_t v) const { return (words_[v >> 6] >> (v & 63)) & 1u; }
    void set_bit(std::size_t v, bool b);
    bool root_bit() const { return level_ > 0 && bit(0); }
    const std::vector<std::uint64_t>& words() const { return words_; }
    bool is_identity() const;

    bool operator==(const Portrait& o) const { return level_ == o.level_ && words_ == o.words_; }
    bool operator!=(const Portrait& o) const { return !(*this == o); }
    bool operator<(const Portrait& o) const;

    std::size_t hash() const;

private:
    int level_ = 0;
    std::vector<std::uint64_t> words_;
};

std::size_t word_count(int n);
void check_level(int n);

Portrait compose(const Portrait& p, const Portrait& q);
// Raw compose on packed words of level n; out must not alias p or q.
void compose_words(int n, const std::uint64_t* p, const std::uint64_t* q, std::uint64_t* out);
Portrait invert(const Portrait& p);
Portrait conjugate(const Portrait& w, const Portrait& p);  // w p w^-1
Portrait commutator(const Portrait& p, const Portrait& q);  // p q p^-1 q^-1

// Image of a leaf given as a letter sequence (first letter selects the subtree).
std::vector<int> apply(const Portrait& p, const std::vector<int>& leaf);
// Leaf j read little-endian: letter t is bit t of j.
std::uint64_t apply_index(const Portrait& p, std::uint64_t leaf);

Portrait truncate(const Portrait& p, int m);
// Portrait stored below the vertex named by the word; for one letter x this is p_x in
// p = (p0, p1) s^b.
Portrait section(const Portrait& p, const std::vector<int>& word);

int sign(const Portrait& p, int m);
std::vector<int> sign_vector(const Portrait& p);

int order_log2(const Portrait& p);
Portrait power(const Portrait& p, std::int64_t k);
Portrait power(const Portrait& p, const TwoAdic& k);

std::string encode(const Portrait& p);
Portrait decode(std::string_view text);

Portrait random_element(int n, std::uint64_t seed);
Portrait random_element(int n, std::mt19937_64& rng);

struct PortraitHash {
    std::size_t operator()(const Portrait& p) const { return p.hash(); }
};

}  // namespace arbor

#endif
