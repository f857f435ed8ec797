#ifndef ARBOR_LEVEL_GROUPS_HPP
#define ARBOR_LEVEL_GROUPS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "arbor/catalog.hpp"
#include "arbor/portrait.hpp"

namespace arbor {

struct GroupCase {
    bool periodic = true;
    int s = 0;
    int r = 1;

    static GroupCase Periodic(int r);
    static GroupCase PrePeriodic(int s, int r);
    // "periodic:r" or "prep:s,r"
    static GroupCase parse(std::string_view text);

    std::string str() const;
    Catalog catalog() const;
    bool operator==(const GroupCase&) const = default;
};

// Signed 1-based generator indices: 2 is g2, -2 is g2^-1.
using GenWord = std::vector<int>;

Portrait evaluate_gen_word(const std::vector<Portrait>& gens, const GenWord& w, int n);
GenWord inverse_gen_word(const GenWord& w);
// Word for the section at the given first letter of the element spelled by w.
GenWord section_word(const GroupCase& c, const GenWord& w, int letter);

struct EnumerateOptions {
    std::uint64_t cap = std::uint64_t{1} << 24;
    bool track_words = false;
    int threads = 1;
};

// Finite subgroup of W_n stored as packed portraits in BFS discovery order.
class GroupTable {
public:
    int level() const { return level_; }
    const std::vector<Portrait>& generators() const { return gens_; }
    std::size_t size() const { return count_; }
    bool truncated() const { return truncated_; }
    bool has_words() const { return track_; }

    Portrait element(std::size_t i) const;
    const std::uint64_t* raw(std::size_t i) const { return data_.data() + i * stride_; }
    std::optional<std::size_t> index_of(const Portrait& p) const;

    // nullopt when the table is truncated and p was not reached.
    std::optional<bool> contains(const Portrait& p) const;
    // Word in the generators, or nullopt if p is not in the table.
    std::optional<GenWord> express(const Portrait& p) const;
    GenWord word_of(std::size_t i) const;
    // nullopt when truncated.
    std::optional<int> order_log2() const;

    // Sorted "n:HEX" lines.
    std::vector<std::string> export_lines() const;
    std::vector<Portrait> elements() const;

private:
    friend GroupTable enumerate(const std::vector<Portrait>& gens, const EnumerateOptions& opts, int level);
    friend GroupTable subgroup_from_elements(int level, const std::vector<Portrait>& elems);

    int level_ = 0;
    std::size_t stride_ = 0;
    std::size_t count_ = 0;
    bool truncated_ = false;
    bool track_ = false;
    std::vector<Portrait> gens_;
    std::vector<std::uint64_t> data_;
    std::vector<std::uint32_t> slots_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint16_t> via_;

    std::uint64_t hash_raw(const std::uint64_t* w) const;
    std::optional<std::size_t> find_raw(const std::uint64_t* w) const;
    bool insert_raw(const std::uint64_t* w);
    void rehash(std::size_t slots);
};

// level defaults to the common level of gens; required when gens is empty.
GroupTable enumerate(const std::vector<Portrait>& gens, const EnumerateOptions& opts = {}, int level = -1);
// Subgroup whose element set is exactly elems (throws if elems is not a subgroup).
GroupTable subgroup_from_elements(int level, const std::vector<Portrait>& elems);

bool is_transitive(const std::vector<Portrait>& gens, int m);
GroupTable normal_closure(const std::vector<Portrait>& ambient, const std::vector<Portrait>& subset,
                          const EnumerateOptions& opts = {}, int level = -1);
GroupTable commutator_subgroup(const GroupTable& g, const EnumerateOptions& opts = {});
GroupTable intersect(const GroupTable& a, const GroupTable& b);
bool is_subset(const GroupTable& a, const GroupTable& b);  // a within b
bool same_elements(const GroupTable& a, const GroupTable& b);
// [a : b] for b within a.
std::uint64_t index(const GroupTable& a, const GroupTable& b);

bool sign_image_is_full(const std::vector<Portrait>& gens, int m);
std::uint64_t count_transitive(const GroupTable& g);

// Portrait with a swap at one vertex; the set generates W_n.
std::vector<Portrait> vertex_swap_generators(int n);
// Element of W_n with bits equal to the binary expansion of i (n <= 6).
Portrait wn_element(int n, std::uint64_t i);

GroupTable normalizer_in_Wn(const GroupTable& g, int max_level = 4);
GroupTable centralizer_in_Wn(const GroupTable& g, int max_level = 4);
GroupTable centralizer_in_Wn(const Portrait& p, int max_level = 4);

std::int64_t closed_form_log2_order(const GroupCase& c, int n);
boost::rational<std::int64_t> hausdorff_exact(const GroupCase& c);
boost::rational<std::int64_t> hausdorff_partial(const GroupCase& c, int n);

struct SignMatrixClass {
    int m[2][2];
    bool swap;
    bool operator==(const SignMatrixClass&) const = default;
};
// p = (u,v) s^l at level r+1 maps to (sgn_s u, sgn_s v; sgn_r u, sgn_r v) s^l.
SignMatrixClass sign_matrix_class(const Portrait& p, int s, int r);
bool in_Grplus1_by_signs(const Portrait& p, int s, int r);

// Word in the case's generators lying in G^1 whose first section is x.
GenWord lift_to_G1(const GroupCase& c, const GenWord& x);

}  // namespace arbor

#endif
