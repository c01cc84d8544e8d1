#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace atlas {

// Error taxonomy shared by the whole library. The CLI maps these to exit
// codes: usage_error -> 2, cap_error -> 3, theorem_error -> 1.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct theorem_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal invariant check: these conditions are mathematical guarantees, so a
// failure means either a defect in this library or input outside its contract.
inline void check(bool cond, const std::string& msg) {
    if (!cond) throw theorem_error(msg);
}

namespace detail {
class element_backend;  // family-specific element representation (group.cpp)
}

struct quotient_data;  // defined after group_table

// A finite group with elements indexed 0..order-1. Index 0 is always the
// identity. Indexing is the breadth-first closure order from the family's
// canonical generators: start from the identity, repeatedly right-multiply
// discovered elements (in discovery order) by the generators (in their given
// order), appending new elements as found. This makes every derived object
// (triangle ids, component ids, coset representatives) reproducible across
// runs and platforms.
//
// Multiplication is served from a dense Cayley table when order <= table_cap()
// (default 10000, override with ATLAS_TABLE_CAP, clamped to 65535); larger
// groups fall back to composing concrete element representations on demand.
class group_table {
  public:
    int order() const { return order_; }
    const std::string& spec() const { return spec_; }
    bool has_dense_table() const { return !table_.empty(); }

    int mul(int a, int b) const {
        return table_.empty() ? slow_mul(a, b) : table_[(size_t)a * order_ + b];
    }
    int inv(int a) const { return inv_[a]; }
    // g x g^-1
    int conjugate(int g, int x) const { return mul(mul(g, x), inv(g)); }

    static constexpr int identity = 0;

    const std::string& name(int a) const { return names_[a]; }
    std::optional<int> index_of_name(const std::string& nm) const;
    const std::vector<int>& generators() const { return gen_idx_; }

    int element_order(int x) const;
    long long exponent() const;
    bool is_abelian() const;

    // Conjugacy classes, each sorted ascending, ordered by least member.
    const std::vector<std::vector<int>>& conjugacy_classes() const;
    int class_count() const { return (int)conjugacy_classes().size(); }
    int class_size(int x) const;
    std::vector<int> centralizer(int x) const;  // sorted
    std::vector<int> center() const;            // sorted
    long long commuting_pair_count() const;     // sum over x of |centralizer(x)|

    // Subgroup generated by gens (indices); identity always included; sorted.
    std::vector<int> subgroup_closure(const std::vector<int>& gens) const;
    bool is_normal(const std::vector<int>& subgroup_sorted) const;
    bool is_simple() const;

    // Quotient by a normal subgroup, given as the full sorted element list
    // (use subgroup_closure). Throws usage_error if not normal. The returned
    // table is self-contained (its own dense table); it does not keep a
    // reference to the parent.
    quotient_data quotient(const std::vector<int>& normal_sorted,
                           const std::string& quotient_spec) const;

    // Families. Ranges are hard limits of the representations used, not
    // resource caps: symmetric/alternating n <= 8, dihedral order 2n with
    // 3 <= n <= 255, sl2/psl2 prime p <= 13, extraspecial odd prime p <= 7.
    static group_table symmetric(int n);
    static group_table alternating(int n);
    static group_table dihedral(int order2n);
    static group_table quaternion8();
    static group_table sl2(int p);
    static group_table psl2(int p);
    static group_table extraspecial_exp_p(int p);
    // One generator per entry, each a product of cycles over 1-based points.
    static group_table from_permutations(const std::vector<std::vector<std::vector<int>>>& gens,
                                         const std::string& spec);

    // CLI grammar: S<n>, A<n>, D<2n>, Q8, SL2(<p>), PSL2(<p>), ES(<p>),
    // perm:<cycles>[,<cycles>...]. Throws usage_error on anything else.
    static group_table parse_spec(const std::string& spec);

    static int table_cap();

  private:
    group_table() = default;
    static group_table build(std::shared_ptr<detail::element_backend> backend,
                             const std::vector<std::vector<uint8_t>>& gens,
                             std::string spec);

    int slow_mul(int a, int b) const;

    int order_ = 0;
    std::string spec_;
    std::vector<uint16_t> table_;  // dense Cayley table, row-major, may be empty
    std::vector<int> inv_;
    std::vector<std::string> names_;
    std::vector<int> gen_idx_;

    std::shared_ptr<detail::element_backend> backend_;
    std::vector<uint8_t> elem_bytes_;  // order * backend width, BFS order
    int elem_width_ = 0;
    // element bytes -> index, kept for slow_mul and name lookup
    void* lookup_ = nullptr;  // owned; see group.cpp
    std::shared_ptr<void> lookup_owner_;

    mutable std::vector<std::vector<int>> classes_;  // lazy
    mutable std::vector<int> class_id_;

    friend struct quotient_data;
};

struct quotient_data {
    group_table table;      // cosets, indexed by ascending least member
    std::vector<int> proj;  // parent element -> coset index
    std::vector<int> rep;   // coset index -> least parent element
};

// Every automorphism of G as an image vector (aut[x] = image of element x),
// sorted lexicographically. Found by backtracking over images of a greedily
// chosen minimal generating sequence, candidates constrained by element order
// and conjugacy class size. Throws cap_error if order() > aut_cap (default
// 1000, override with ATLAS_AUT_CAP).
std::vector<std::vector<int>> automorphism_group(const group_table& g);

// Isomorphism test via the same backtracking search, mapping a generating
// sequence of a into b. Returns an image vector if one exists.
std::optional<std::vector<int>> find_isomorphism(const group_table& a, const group_table& b);

}  // namespace atlas
