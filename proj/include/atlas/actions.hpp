#pragma once

#include "atlas/surface.hpp"

#include <optional>
#include <vector>

namespace atlas {

// Symmetry analysis of one component S with reference pair (x, y). The group
// acts on its own surface by conjugation, g . T(a,b) = T(gag^-1, gbg^-1), and
// the automorphism group acts by phi . T(a,b) = T(phi(a), phi(b)). Both send
// triangles to triangles and preserve the rim and spoke gluings, so the
// stabilizer of S acts on S by orientation preserving cell symmetries. The
// subgroup acting trivially (the kernel) is C(x) n C(y) for conjugation and
// {phi : phi(x) = x, phi(y) = y} for automorphisms; the quotient Q acts
// faithfully, and the report records its structure:
//
//   - |Q| equals E when the vertex labels fall in two classes and 2E when a
//     symmetry flips an edge end for end (which forces vertex transitivity)
//   - vertex stabilizers are cyclic of orders lambda1 and lambda2, generated
//     by conjugation by the vertex label; the edge stabilizer has order 1 or
//     2; the face stabilizer is cyclic of order n (flip case) or n/2
//   - collapsing Q turns S into a sphere: the Riemann-Hurwitz count over the
//     three branch points (the two vertex classes merge into one in the flip
//     case, and the edge midpoints form the third) solves to genus 0
//   - components of genus g >= 2 obey the Hurwitz bound |Q| <= 84(g - 1)
//
// Every claim is recomputed from the multiplication table and checked; a
// violation throws theorem_error. When |Q| * |S| fits under perm_budget the
// action is additionally materialized as explicit triangle permutations and
// Q is verified to be exactly that permutation group, generated by two of
// its elements. Larger components skip the materialization (perm_verified
// stays false); the counting identities are exact either way because the
// kernel is verified pointwise.
struct action_report {
    int component = 0;
    bool via_automorphisms = false;
    long long stabilizer_order = 0;  // symmetries sending S to itself
    long long kernel_order = 0;      // symmetries fixing every triangle of S
    long long q_order = 0;           // stabilizer_order / kernel_order
    int vertex_orbits = 0;           // vertex classes under the stabilizer (1 or 2)
    bool edge_flip = false;          // some symmetry reverses an edge
    long long q_x = 0;               // order of the stabilizer of the reference x vertex
    long long q_y = 0;
    long long q_e = 0;               // order of the reference edge stabilizer
    long long q_f = 0;               // order of the reference face stabilizer
    long long quotient_genus = 0;    // genus of S/Q by Riemann-Hurwitz (always 0)
    bool hurwitz_ok = false;         // |Q| <= 84(g-1) whenever g >= 2
    bool hurwitz_equality = false;   // the bound is attained
    long long orbit_size = 0;        // components in the orbit of S
    bool perm_verified = false;      // explicit permutation group was materialized
};

inline constexpr long long default_perm_budget = 4000000;

// Analyze the conjugation action on one component. Throws usage_error for an
// out of range component and theorem_error if any verified identity fails.
action_report conjugation_report(const surface_complex& s, int component,
                                 long long perm_budget = default_perm_budget);

// All components, in component order. jobs > 1 analyzes components in
// parallel; the result is identical to the sequential one.
std::vector<action_report> conjugation_reports(const surface_complex& s, int jobs = 1,
                                               long long perm_budget = default_perm_budget);

// Analyze the automorphism action. auts must list each automorphism as an
// image table on group elements, as produced by automorphism_group().
action_report automorphism_report(const surface_complex& s,
                                  const std::vector<std::vector<int>>& auts, int component,
                                  long long perm_budget = default_perm_budget);

std::vector<action_report> automorphism_reports(const surface_complex& s,
                                                const std::vector<std::vector<int>>& auts,
                                                int jobs = 1,
                                                long long perm_budget = default_perm_budget);

// Convenience overload computing the automorphism group first.
std::vector<action_report> automorphism_reports(const surface_complex& s, int jobs = 1,
                                                long long perm_budget = default_perm_budget);

// For a nonabelian simple group: if the combinatorial type of the component
// occurs k times with k! < |G|, the whole group acts faithfully on S and the
// subquotient order is |G| exactly. Returns nullopt when k is too large for
// the argument to apply, throws usage_error if the group is not simple or
// the component index is out of range.
std::optional<long long> simple_group_quotient_order(const surface_complex& s, int component);

// Solve 2 - 2g = |Q|(2 - 2g') - sum (|Q| - |Q|/r) for the quotient genus g'
// of a degree |Q| cover branched over points with ramification indices r.
// Throws usage_error for nonpositive inputs and theorem_error when the data
// admits no integral nonnegative solution.
long long sphere_quotient_genus(long long q, long long genus,
                                const std::vector<long long>& branch);

}  // namespace atlas
