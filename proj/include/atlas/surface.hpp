#pragma once

#include "atlas/group.hpp"

#include <cstdint>
#include <utility>

namespace atlas {

// One closed oriented surface component of the complex built from a group.
struct component_info {
    long long least_triangle = 0;  // least triangle id in the component (canonical key)
    int ref_x = 0, ref_y = 0;      // the pair of that least triangle
    long long triangles = 0;
    long long edges = 0;      // triangles / 2
    long long faces = 0;
    long long vertices = 0;   // tessellation vertices (face centers not counted)
    int face_size = 0;        // n: every face of the component is an n-gon
    int lambda1 = 0;          // vertex valencies, lambda1 <= lambda2;
    int lambda2 = 0;          // equal when the component has a single valency
    long long v1 = 0, v2 = 0; // vertex counts at lambda1 / lambda2 (v2 = 0 if single)
    int genus = 0;
    // 1 when some group element conjugates (ref_x, ref_y) to (ref_y, ref_x),
    // which merges the two sides of every edge into one vertex class; else 2.
    int vertex_orbits = 0;
};

// Census row: identical components aggregated, keyed by every printed column.
struct census_row {
    int genus = 0;
    long long faces = 0;
    int face_size = 0;
    int lambda1 = 0, lambda2 = 0;
    long long vertices = 0;
    long long edges = 0;
    long long count = 0;
};

// The disjoint union of closed oriented surfaces attached to a finite group:
// one triangle T(x,y) per ordered pair of noncommuting elements, glued by
//
//   rim      T(x,y) <-> T(y,x)          (shared long edge)
//   spoke_y  T(x,y)  -> T(y, y^-1 x y)  (shared edge at the y corner)
//   spoke_x  T(x,y)  -> T(x y x^-1, x)  (shared edge at the x corner)
//
// spoke_x and spoke_y are mutually inverse, so each triangle meets exactly
// three others and the result is a closed surface. Faces are the orbits of
// spoke_y (all triangles of a face share the label x*y at the inner corner);
// vertices of the tessellation are the orbits of the outer corners under the
// alternating spoke/rim walk. Triangles are indexed x*order+y on the full
// grid, so ids are stable for a fixed group indexing.
//
// The constructor walks the whole complex and verifies the structural
// identities (even component sizes, n-gon faces with n >= 3 dividing twice
// the order of the corner label, at most two valencies per component, valency
// sums, the Euler identity and an independent cross-check of the genus),
// throwing theorem_error on any violation.
class surface_complex {
  public:
    // Requires a dense Cayley table (cap_error otherwise): the walks do a
    // bounded number of table lookups per triangle.
    explicit surface_complex(const group_table& g);

    const group_table& group() const { return g_; }
    long long triangle_count() const { return triangle_count_; }
    int component_count() const { return (int)comps_.size(); }
    const std::vector<component_info>& components() const { return comps_; }

    int component_of(int x, int y) const;  // usage_error if x, y commute
    int component_of_triangle(long long t) const { return comp_of_[t]; }

    // Aggregated rows sorted by (genus, faces, n, lambda1, lambda2, V, E).
    std::vector<census_row> census() const;

    // Triangle ids and adjacency. All arguments must be actual triangles.
    long long tri_id(int x, int y) const { return (long long)x * g_.order() + y; }
    std::pair<int, int> tri_pair(long long t) const {
        return {(int)(t / g_.order()), (int)(t % g_.order())};
    }
    bool is_triangle(int x, int y) const { return g_.mul(x, y) != g_.mul(y, x); }
    long long rim(long long t) const {
        auto [x, y] = tri_pair(t);
        return tri_id(y, x);
    }
    long long spoke_y(long long t) const {
        auto [x, y] = tri_pair(t);
        return tri_id(y, g_.mul(g_.mul(g_.inv(y), x), y));
    }
    long long spoke_x(long long t) const {
        auto [x, y] = tri_pair(t);
        return tri_id(g_.mul(g_.mul(x, y), g_.inv(x)), x);
    }

    // Corners: 2*t + slot, slot 0 at the x corner of T(x,y), slot 1 at y.
    // Both moves are involutions; alternating them walks around the vertex.
    long long corner_rim(long long c) const {
        auto [x, y] = tri_pair(c >> 1);
        return 2 * tri_id(y, x) + (1 - (c & 1));
    }
    long long corner_spoke(long long c) const {
        auto [x, y] = tri_pair(c >> 1);
        if (c & 1) return 2 * tri_id(y, g_.mul(g_.mul(g_.inv(y), x), y));
        return 2 * tri_id(g_.mul(g_.mul(x, y), g_.inv(x)), x) + 1;
    }
    int corner_label(long long c) const {
        auto [x, y] = tri_pair(c >> 1);
        return (c & 1) ? y : x;
    }

    // Corners sharing the vertex of c, in walk order. The least entry is used
    // as the canonical vertex id by the cover and action analyses.
    std::vector<long long> vertex_corner_orbit(long long c) const;
    long long vertex_id(long long c) const;

  private:
    group_table g_;
    long long triangle_count_ = 0;
    std::vector<int32_t> comp_of_;  // grid of order^2 cells, -1 where commuting
    std::vector<component_info> comps_;
};

}  // namespace atlas
