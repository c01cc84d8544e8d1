#include "atlas/surface.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

namespace atlas {

namespace {

// union-find keeping the least id as root, with path halving
int32_t uf_find(std::vector<int32_t>& parent, int32_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

void uf_union(std::vector<int32_t>& parent, int32_t a, int32_t b) {
    a = uf_find(parent, a);
    b = uf_find(parent, b);
    if (a == b) return;
    if (a < b)
        parent[b] = a;
    else
        parent[a] = b;
}

}  // namespace

surface_complex::surface_complex(const group_table& g) : g_(g) {
    if (!g_.has_dense_table())
        throw cap_error("surface complex needs a dense multiplication table; group order " +
                        std::to_string(g_.order()) + " exceeds the table cap");
    const int m = g_.order();
    if (m > 46340) throw cap_error("surface complex supports group order up to 46340");
    const long long grid = (long long)m * m;

    // Components: union rim and spoke_y partners. spoke_x adds no information
    // (it is the inverse of spoke_y), so two unions per triangle suffice.
    std::vector<int32_t> parent(grid);
    comp_of_.assign(grid, -1);
    for (int x = 0; x < m; x++)
        for (int y = 0; y < m; y++) {
            long long t = (long long)x * m + y;
            bool tri = g_.mul(x, y) != g_.mul(y, x);
            parent[t] = tri ? (int32_t)t : -1;
            if (tri) triangle_count_++;
        }
    check(triangle_count_ % 2 == 0, "triangle count must be even");

    for (int x = 0; x < m; x++)
        for (int y = 0; y < m; y++) {
            long long t = (long long)x * m + y;
            if (parent[t] < 0) continue;
            uf_union(parent, (int32_t)t, (int32_t)((long long)y * m + x));
            int z = g_.mul(g_.mul(g_.inv(y), x), y);
            uf_union(parent, (int32_t)t, (int32_t)((long long)y * m + z));
        }

    std::unordered_map<int32_t, int32_t> root_idx;
    for (long long t = 0; t < grid; t++) {
        if (parent[t] < 0) continue;
        int32_t r = uf_find(parent, (int32_t)t);
        auto [it, inserted] = root_idx.emplace(r, (int32_t)comps_.size());
        if (inserted) {
            check(r == (int32_t)t, "component root must be its least triangle");
            component_info ci;
            ci.least_triangle = t;
            ci.ref_x = (int)(t / m);
            ci.ref_y = (int)(t % m);
            comps_.push_back(ci);
        }
        comp_of_[t] = it->second;
        comps_[it->second].triangles++;
    }
    parent.clear();
    parent.shrink_to_fit();

    // Faces: orbits of spoke_y. The inner corner label x*y is constant along
    // a face, every face of a component has the same size n >= 3, and since
    // two face steps amount to conjugating the pair by that label, n divides
    // twice its order.
    {
        std::vector<bool> seen(grid, false);
        for (long long t0 = 0; t0 < grid; t0++) {
            if (comp_of_[t0] < 0 || seen[t0]) continue;
            component_info& ci = comps_[comp_of_[t0]];
            const int label = g_.mul((int)(t0 / m), (int)(t0 % m));
            long long t = t0;
            int len = 0;
            do {
                seen[t] = true;
                len++;
                int tx = (int)(t / m), ty = (int)(t % m);
                check(g_.mul(tx, ty) == label, "face walk changed its inner corner label");
                t = (long long)ty * m + g_.mul(g_.mul(g_.inv(ty), tx), ty);
            } while (t != t0);
            check(len >= 3, "face of size < 3");
            check((2 * g_.element_order(label)) % len == 0,
                  "face size does not divide twice the corner label order");
            if (ci.face_size == 0)
                ci.face_size = len;
            else
                check(ci.face_size == len, "mixed face sizes within a component");
            ci.faces++;
        }
    }

    // Vertices: orbits of outer corners under the alternating spoke/rim walk.
    // Both moves are involutions and distinct at every corner, so each orbit
    // is an even cycle visiting 2*lambda corners for a valency-lambda vertex.
    std::vector<long long> valency_sum(comps_.size(), 0);
    {
        std::vector<bool> seen(2 * grid, false);
        for (long long c0 = 0; c0 < 2 * grid; c0++) {
            if (comp_of_[c0 >> 1] < 0 || seen[c0]) continue;
            component_info& ci = comps_[comp_of_[c0 >> 1]];
            long long c = c0, steps = 0;
            do {
                seen[c] = true;
                c = corner_spoke(c);
                seen[c] = true;
                c = corner_rim(c);
                steps += 2;
            } while (c != c0);
            long long lam = steps / 2;
            if (ci.lambda1 == 0 || lam == ci.lambda1) {
                ci.lambda1 = (int)lam;
                ci.v1++;
            } else if (ci.lambda2 == 0 || lam == ci.lambda2) {
                ci.lambda2 = (int)lam;
                ci.v2++;
            } else {
                throw theorem_error("component with more than two distinct valencies");
            }
            ci.vertices++;
            valency_sum[comp_of_[c0 >> 1]] += lam;
        }
    }

    // One vertex class or two: a single class exactly when some group element
    // conjugates the reference pair to its swap.
    for (auto& ci : comps_) {
        ci.vertex_orbits = 2;
        for (int w = 0; w < m; w++) {
            if (g_.conjugate(w, ci.ref_x) != ci.ref_y) continue;
            if (g_.conjugate(w, ci.ref_y) == ci.ref_x) {
                ci.vertex_orbits = 1;
                break;
            }
        }
    }

    long long total = 0;
    for (size_t i = 0; i < comps_.size(); i++) {
        component_info& ci = comps_[i];
        total += ci.triangles;
        check(ci.triangles % 2 == 0, "odd component size");
        ci.edges = ci.triangles / 2;
        check(2 * ci.edges == (long long)ci.face_size * ci.faces,
              "face size times face count must be twice the edge count");
        check(valency_sum[i] == ci.triangles, "vertex valencies must sum to the triangle count");

        if (ci.lambda2 == 0) {
            ci.lambda2 = ci.lambda1;  // single valency; v2 stays 0
        } else if (ci.lambda1 > ci.lambda2) {
            std::swap(ci.lambda1, ci.lambda2);
            std::swap(ci.v1, ci.v2);
        }
        if (ci.lambda1 != ci.lambda2) {
            // every edge joins a lambda1 vertex to a lambda2 vertex
            check(ci.v1 * ci.lambda1 == ci.edges && ci.v2 * ci.lambda2 == ci.edges,
                  "valency class sizes inconsistent with edge count");
        } else {
            check(ci.vertices * ci.lambda1 == 2 * ci.edges,
                  "valency times vertex count must be twice the edge count");
        }

        long long chi = ci.vertices - ci.edges + ci.faces;
        check(chi <= 2 && (2 - chi) % 2 == 0, "component is not a closed oriented surface");
        ci.genus = (int)((2 - chi) / 2);

        // same genus from face/valency data alone, with vertex counts
        // eliminated via the class size relations above
        long long n = ci.face_size, l1 = ci.lambda1, l2 = ci.lambda2, E = ci.edges;
        long long lhs = (2 - 2 * (long long)ci.genus) * n * l1 * l2;
        long long rhs = l1 != l2 ? E * (n * l1 + n * l2 + 2 * l1 * l2 - n * l1 * l2)
                                 : E * l1 * (2 * n + 2 * l1 - n * l1);
        check(lhs == rhs, "genus cross-check failed");
    }
    check(total == triangle_count_, "component sizes must sum to the triangle count");
}

int surface_complex::component_of(int x, int y) const {
    if (x < 0 || y < 0 || x >= g_.order() || y >= g_.order())
        throw usage_error("element index out of range");
    if (!is_triangle(x, y)) throw usage_error("the two elements commute: no triangle there");
    return comp_of_[tri_id(x, y)];
}

std::vector<long long> surface_complex::vertex_corner_orbit(long long c0) const {
    std::vector<long long> orbit;
    long long c = c0;
    do {
        orbit.push_back(c);
        long long s = corner_spoke(c);
        orbit.push_back(s);
        c = corner_rim(s);
    } while (c != c0);
    return orbit;
}

long long surface_complex::vertex_id(long long c0) const {
    long long best = c0, c = c0;
    do {
        long long s = corner_spoke(c);
        best = std::min({best, c, s});
        c = corner_rim(s);
    } while (c != c0);
    return best;
}

std::vector<census_row> surface_complex::census() const {
    std::map<std::tuple<int, long long, int, int, int, long long, long long>, long long> agg;
    for (const auto& ci : comps_)
        agg[{ci.genus, ci.faces, ci.face_size, ci.lambda1, ci.lambda2, ci.vertices, ci.edges}]++;
    std::vector<census_row> rows;
    rows.reserve(agg.size());
    for (const auto& [k, count] : agg) {
        census_row r;
        std::tie(r.genus, r.faces, r.face_size, r.lambda1, r.lambda2, r.vertices, r.edges) = k;
        r.count = count;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace atlas
