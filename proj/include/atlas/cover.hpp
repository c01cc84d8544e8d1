#pragma once

#include "atlas/surface.hpp"

namespace atlas {

// One cover component lying over a fixed base component.
//
// The meaning of (ell_x, ell_y) depends on the base:
//  - two vertex classes downstairs: ell_x is the ramification over the class
//    of the base reference x vertex and ell_y over the other class; both are
//    uniform across their class, so they are independent of the chosen lift.
//  - one vertex class downstairs: the two ends of an edge are no longer
//    distinguishable, and the fiber over a single base vertex may mix the two
//    ramification values. Here ell_x <= ell_y are the cover component's two
//    valencies divided by the constant base valency.
struct lift_class {
    int cover_component = 0;      // index into cover().components()
    long long multiplicity = 0;   // lifted reference pairs landing in it (m)
    long long ell = 0;            // face size ratio n_cover / n_base
    long long ell_x = 0;          // ramification over type-1 vertices, x side
    long long ell_y = 0;          // ramification over type-1 vertices, y side
    long long monodromy_order = 0;  // order of the face monodromy (central runs only)
    int witness_x = 0, witness_y = 0;  // a lifted pair in this component
};

// Covering data over one base component.
struct base_cover {
    int base_component = 0;
    int x_hat = 0, y_hat = 0;  // chosen preimages of the base reference pair
    // base vertex counts on the two sides of the edge bipartition (side of
    // the reference x vertex first); zero when there is one vertex class
    long long class_vertices_x = 0, class_vertices_y = 0;
    std::vector<lift_class> classes;  // ascending by cover component
    // central kernel, single vertex class only: cover components grouped by
    // the orbits of the diagonal central rewriting of lifted pairs
    std::vector<std::vector<int>> groupings;
};

// Relates the complex of a group to the complex of a quotient: components
// upstairs whose reference pair projects to a noncommuting pair are branched
// covers of the corresponding component downstairs; the rest project to
// commuting pairs and cover nothing. For each base component this takes a
// preimage (x, y) of its reference pair, spreads it by the kernel on both
// sides (kernel^2 lifted pairs), and sorts the landing components into lift
// classes. The constructor verifies, per class,
//
//   sum of m over classes = |kernel|^2,   ell | m,  ell_x | m,  ell_y | m,
//   E' = m E,   F' * ell = m F,
//   every base face has exactly m / ell faces above it,
//   the valencies in the fiber over each base vertex sum to m times the
//   base valency (the local degree of an m-fold branched cover),
//
// and, when the base has two vertex classes, uniform ramification per class:
// every fiber vertex over the x side has valency ell_x * lambda_x (so the
// fiber size is m / ell_x per vertex, giving V_x' = (m / ell_x) V_x), and
// likewise over the y side. With one base vertex class the fiber sizes can
// vary vertex to vertex, but each fiber vertex realizes ratio ell_x or ell_y.
// Finally the lift classes over all base components hit every cover
// component with a noncommuting projection exactly once.
//
// With central_extras (kernel inside the center) it also checks the central
// structure: over a two-class base all lift classes are identical and
// m * (number of classes) = |kernel|^2; over a one-class base the diagonal
// central rewriting (x, y) -> (x c, y c) splits the classes into |kernel|
// groupings, each satisfying m * (classes in grouping) = |kernel| with equal
// invariants inside a grouping. Face monodromies are computed, must lie in
// the kernel, and must have order ell; all ratios divide the kernel exponent.
class cover_analysis {
  public:
    // kernel: sorted element list of a normal subgroup of gamma (see
    // group_table::subgroup_closure). Throws usage_error if the kernel is not
    // normal, the quotient is abelian (its complex is empty), or
    // central_extras is requested for a non-central kernel.
    //
    // lift_seed 0 picks the least element of each reference coset as the
    // lift; a nonzero seed picks pseudo-random coset members instead. The
    // reported classes and ratios do not depend on this choice.
    cover_analysis(const group_table& gamma, std::vector<int> kernel, bool central_extras,
                   unsigned lift_seed = 0);

    const surface_complex& cover() const { return cover_; }
    const surface_complex& base() const { return base_; }
    const group_table& quotient_group() const { return base_.group(); }
    const std::vector<int>& kernel() const { return kernel_; }
    bool central() const { return central_; }
    // projection of gamma elements onto quotient element indices
    const std::vector<int>& projection() const { return proj_; }
    const std::vector<base_cover>& reports() const { return reports_; }

  private:
    std::vector<int> kernel_;
    bool central_ = false;
    surface_complex cover_;
    surface_complex base_;
    std::vector<int> proj_, rep_;
    std::vector<base_cover> reports_;
};

// Face monodromy: walk n spoke_y steps from the pair (x, y) in the group g.
// The landing pair must have the twisted shape (x c, y c^-1) with c central
// in g; returns c (theorem_error otherwise). For a pair lifted from a
// quotient complex, n is the face size downstairs and the order of c is the
// face size ratio.
int central_monodromy(const group_table& g, int x, int y, int n);

}  // namespace atlas
