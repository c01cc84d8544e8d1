#include "atlas/actions.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace atlas {

namespace {

// Component-local cell structure, built once per analyzed component and
// thrown away afterwards. Canonical ids: a face is its least triangle, a
// vertex its least corner.
struct cell_maps {
    std::vector<long long> tris;  // sorted triangle ids
    std::unordered_map<long long, int> tri_index;
    std::unordered_map<long long, long long> face_of;    // triangle -> face id
    std::unordered_map<long long, long long> vertex_of;  // corner -> vertex id
    std::unordered_map<long long, long long> valency;    // vertex id -> valency
};

cell_maps build_cell_maps(const surface_complex& s, const component_info& c) {
    cell_maps m;
    m.tris.reserve(c.triangles);
    m.tri_index.reserve(2 * c.triangles);
    std::vector<long long> stack{c.least_triangle};
    m.tri_index.emplace(c.least_triangle, 0);
    while (!stack.empty()) {
        long long t = stack.back();
        stack.pop_back();
        m.tris.push_back(t);
        for (long long u : {s.rim(t), s.spoke_y(t)}) {
            if (m.tri_index.emplace(u, 0).second) stack.push_back(u);
        }
    }
    check((long long)m.tris.size() == c.triangles, "component triangle count drifted");
    std::sort(m.tris.begin(), m.tris.end());
    for (int i = 0; i < (int)m.tris.size(); i++) m.tri_index[m.tris[i]] = i;

    m.face_of.reserve(2 * c.triangles);
    long long faces = 0;
    for (long long t : m.tris) {
        if (m.face_of.count(t)) continue;
        std::vector<long long> orbit{t};
        for (long long u = s.spoke_y(t); u != t; u = s.spoke_y(u)) orbit.push_back(u);
        check((int)orbit.size() == c.face_size, "face size drifted");
        long long id = *std::min_element(orbit.begin(), orbit.end());
        for (long long u : orbit) m.face_of[u] = id;
        faces++;
    }
    check(faces == c.faces, "face count drifted");

    m.vertex_of.reserve(4 * c.triangles);
    long long vertices = 0;
    for (long long t : m.tris) {
        for (int slot = 0; slot < 2; slot++) {
            long long corner = 2 * t + slot;
            if (m.vertex_of.count(corner)) continue;
            auto orbit = s.vertex_corner_orbit(corner);
            check(orbit.size() % 2 == 0, "corner orbit has odd length");
            long long id = *std::min_element(orbit.begin(), orbit.end());
            for (long long cc : orbit) m.vertex_of[cc] = id;
            long long val = (long long)orbit.size() / 2;
            check(val == c.lambda1 || val == c.lambda2, "vertex valency drifted");
            m.valency[id] = val;
            vertices++;
        }
    }
    check(vertices == c.vertices, "vertex count drifted");
    return m;
}

// Smallest k >= 1 with u^k centralizing both x and y. Conjugation by u lies
// in the kernel exactly when u centralizes the reference pair, for the
// conjugation action and the automorphism action alike, so this is the order
// of the class of conjugation-by-u in the subquotient.
long long inner_order_mod_kernel(const group_table& g, int u, int x, int y) {
    long long k = 1;
    for (int p = u; !(g.mul(p, x) == g.mul(x, p) && g.mul(p, y) == g.mul(y, p));
         p = g.mul(p, u)) {
        k++;
        check(k <= g.order(), "inner symmetry order ran away");
    }
    return k;
}

bool same_type(const component_info& a, const component_info& b) {
    return a.genus == b.genus && a.faces == b.faces && a.face_size == b.face_size &&
           a.lambda1 == b.lambda1 && a.lambda2 == b.lambda2 && a.vertices == b.vertices &&
           a.edges == b.edges;
}

// For each component, how many components share its combinatorial type.
std::vector<long long> census_type_counts(const surface_complex& s) {
    auto key = [](const component_info& c) {
        return std::make_tuple(c.genus, c.faces, c.face_size, c.lambda1, c.lambda2,
                               c.vertices, c.edges);
    };
    std::map<decltype(key(component_info{})), long long> counts;
    for (const auto& c : s.components()) counts[key(c)]++;
    std::vector<long long> out;
    out.reserve(s.components().size());
    for (const auto& c : s.components()) out.push_back(counts[key(c)]);
    return out;
}

// img(i, e) is the image of group element e under the i-th symmetry:
// conjugation by i, or the i-th automorphism table.
template <class Img>
action_report analyze(const surface_complex& s, int component, long long perm_budget,
                      bool via_aut, long long act_count, const Img& img,
                      const std::vector<long long>& type_counts) {
    if (component < 0 || component >= s.component_count())
        throw usage_error("component index out of range");
    const group_table& g = s.group();
    const component_info& c = s.components()[component];
    const int x = c.ref_x, y = c.ref_y;
    const long long t0 = c.least_triangle;
    const cell_maps m = build_cell_maps(s, c);

    const long long vx = m.vertex_of.at(2 * t0);
    const long long vy = m.vertex_of.at(2 * t0 + 1);
    // label of the spoke neighbor: T(x, y) -> T(y, y^-1 x y), so a symmetry
    // sending (x, y) to (y, y^-1 x y) rotates the face by one edge
    const int z0 = g.conjugate(g.inv(y), x);

    action_report r;
    r.component = component;
    r.via_automorphisms = via_aut;

    long long stab = 0, kernel = 0, flips = 0, adjs = 0, vfix = 0;
    long long flip_act = -1, adj_act = -1;
    std::vector<long long> stab_acts, fixer_acts;
    std::set<long long> orbit_vx, orbit_vy, orbit_e, orbit_f;
    std::set<int> comp_orbit;

    for (long long i = 0; i < act_count; i++) {
        const int ix = img(i, x), iy = img(i, y);
        check(s.is_triangle(ix, iy), "a symmetry image collapsed a triangle");
        const long long ti = s.tri_id(ix, iy);
        const int cid = s.component_of_triangle(ti);
        comp_orbit.insert(cid);
        if (cid != component) continue;
        stab++;
        stab_acts.push_back(i);
        orbit_e.insert(std::min(ti, s.tri_id(iy, ix)));
        orbit_f.insert(m.face_of.at(ti));
        const long long ivx = m.vertex_of.at(2 * ti);
        const long long ivy = m.vertex_of.at(2 * ti + 1);
        orbit_vx.insert(ivx);
        orbit_vy.insert(ivy);
        if (ivx == vx && ivy == vy) vfix++;
        if (ix == x && iy == y) {
            kernel++;
            fixer_acts.push_back(i);
        }
        if (ix == y && iy == x) {
            flips++;
            if (flip_act < 0) flip_act = i;
        }
        if (ix == y && iy == z0) {
            adjs++;
            if (adj_act < 0) adj_act = i;
        }
    }

    check(stab > 0 && kernel > 0, "the identity symmetry went missing");
    check(stab % kernel == 0, "kernel does not divide the stabilizer");
    r.stabilizer_order = stab;
    r.kernel_order = kernel;
    r.q_order = stab / kernel;
    const long long q = r.q_order;

    // symmetries fixing the reference triangle must fix the whole component
    // pointwise; this makes the subquotient act faithfully, so its order is
    // exactly stabilizer / kernel without materializing anything
    for (long long f : fixer_acts) {
        for (long long t : m.tris) {
            auto [a, b] = s.tri_pair(t);
            check(img(f, a) == a && img(f, b) == b, "a kernel symmetry moved a triangle");
        }
    }

    // the edge has at most one flip class and the face at most one class
    // stepping to the adjacent edge, and each exists exactly when the other
    // does (walking the flip around the face produces the step and back)
    check(flips == 0 || flips == kernel, "more than one edge flip class");
    check(adjs == 0 || adjs == kernel, "more than one face step class");
    check((flips > 0) == (adjs > 0), "edge flip and face step disagree");
    r.edge_flip = flips > 0;
    r.q_e = r.edge_flip ? 2 : 1;

    // vertex classes are equal or disjoint and cover the vertices
    if (orbit_vx == orbit_vy) {
        r.vertex_orbits = 1;
        check((long long)orbit_vx.size() == c.vertices, "vertex class misses vertices");
    } else {
        r.vertex_orbits = 2;
        for (long long v : orbit_vx) check(!orbit_vy.count(v), "vertex classes overlap");
        check((long long)(orbit_vx.size() + orbit_vy.size()) == c.vertices,
              "vertex classes miss vertices");
    }
    check(r.edge_flip == (r.vertex_orbits == 1),
          "edge flip disagrees with vertex transitivity");
    if (!via_aut)
        check(r.vertex_orbits == c.vertex_orbits, "vertex class count drifted");

    // transitivity on edges and faces pins the subquotient order
    check((long long)orbit_e.size() == c.edges, "edges do not form one orbit");
    check((long long)orbit_f.size() == c.faces, "faces do not form one orbit");
    check(q == (r.edge_flip ? 2 * c.edges : c.edges), "subquotient order is off");
    check(q == c.edges * r.q_e, "edge stabilizer order is off");

    // vertex stabilizers are cyclic of order the valency, generated by
    // conjugation by the vertex label
    r.q_x = m.valency.at(vx);
    r.q_y = m.valency.at(vy);
    check(q % (long long)orbit_vx.size() == 0 &&
              q / (long long)orbit_vx.size() == r.q_x,
          "x vertex stabilizer order is off");
    check(q % (long long)orbit_vy.size() == 0 &&
              q / (long long)orbit_vy.size() == r.q_y,
          "y vertex stabilizer order is off");
    check(inner_order_mod_kernel(g, x, x, y) == r.q_x,
          "conjugation by x has the wrong order");
    check(inner_order_mod_kernel(g, y, x, y) == r.q_y,
          "conjugation by y has the wrong order");
    check(std::min(r.q_x, r.q_y) == c.lambda1 && std::max(r.q_x, r.q_y) == c.lambda2,
          "vertex stabilizers miss the valencies");
    // adjacent vertex stabilizers intersect trivially
    check(vfix == kernel, "a symmetry fixes both endpoints of the edge");

    // face stabilizer: cyclic of order n when the flip merges the vertex
    // classes (generated by the one-step rotation), n/2 otherwise (generated
    // by conjugation by the face label xy, which steps two edges at a time)
    const long long n = c.face_size;
    if (r.edge_flip) {
        r.q_f = n;
        check(r.q_x == r.q_y, "vertex transitive component with two valencies");
        check(img(flip_act, img(flip_act, x)) == x && img(flip_act, img(flip_act, y)) == y,
              "edge flip is not an involution");
        long long k = 1;
        for (int a = img(adj_act, x), b = img(adj_act, y); !(a == x && b == y);
             a = img(adj_act, a), b = img(adj_act, b)) {
            k++;
            check(k <= 2 * n, "face rotation order ran away");
        }
        check(k == n, "face rotation order is off");
    } else {
        check(n % 2 == 0, "two vertex classes force even faces");
        r.q_f = n / 2;
    }
    check(inner_order_mod_kernel(g, g.mul(x, y), x, y) ==
              (r.edge_flip && n % 2 == 1 ? n : n / 2),
          "conjugation by xy has the wrong order");
    check(q == c.faces * r.q_f, "face stabilizer order is off");

    // collapsing the subquotient yields a sphere branched over the vertex
    // classes and the edge midpoints (which merge to three points)
    const std::vector<long long> branch =
        r.edge_flip ? std::vector<long long>{r.q_x, 2, r.q_f}
                    : std::vector<long long>{r.q_x, r.q_y, r.q_f};
    r.quotient_genus = sphere_quotient_genus(q, c.genus, branch);
    check(r.quotient_genus == 0, "quotient genus is not zero");

    r.hurwitz_ok = c.genus < 2 || q <= 84 * (c.genus - 1);
    check(r.hurwitz_ok, "Hurwitz bound violated");
    r.hurwitz_equality = c.genus >= 2 && q == 84 * (c.genus - 1);

    // the component orbit balances against the stabilizer and stays within
    // components of the same combinatorial type
    r.orbit_size = (long long)comp_orbit.size();
    check(r.orbit_size * stab == act_count, "component orbit does not balance");
    for (int cid : comp_orbit)
        check(same_type(c, s.components()[cid]), "component orbit mixes types");
    check(r.orbit_size <= type_counts[component], "component orbit exceeds its type count");

    // the named generators really act on the component
    auto conj_stays = [&](int u, const char* msg) {
        for (long long t : m.tris) {
            auto [a, b] = s.tri_pair(t);
            check(m.tri_index.count(s.tri_id(g.conjugate(u, a), g.conjugate(u, b))) > 0,
                  msg);
        }
    };
    conj_stays(x, "rotation about the x vertex leaves the component");
    conj_stays(y, "rotation about the y vertex leaves the component");
    auto act_stays = [&](long long i, const char* msg) {
        for (long long t : m.tris) {
            auto [a, b] = s.tri_pair(t);
            check(m.tri_index.count(s.tri_id(img(i, a), img(i, b))) > 0, msg);
        }
    };
    if (flip_act >= 0) act_stays(flip_act, "the edge flip leaves the component");
    if (adj_act >= 0) act_stays(adj_act, "the face rotation leaves the component");

    // under the budget, materialize the action as triangle permutations and
    // verify the subquotient is exactly that group, generated by two of its
    // elements: the two vertex rotations, or the flip and the face rotation
    // when the vertex classes merge
    const long long tcount = (long long)m.tris.size();
    if (perm_budget > 0 && stab * tcount <= perm_budget) {
        auto perm_from = [&](auto&& elem_img) {
            std::vector<int32_t> p((size_t)tcount);
            std::vector<char> hit((size_t)tcount, 0);
            for (long long idx = 0; idx < tcount; idx++) {
                auto [a, b] = s.tri_pair(m.tris[idx]);
                auto it = m.tri_index.find(s.tri_id(elem_img(a), elem_img(b)));
                check(it != m.tri_index.end(), "a symmetry leaves the component");
                check(!hit[it->second], "a symmetry is not injective on triangles");
                hit[it->second] = 1;
                p[idx] = (int32_t)it->second;
            }
            return p;
        };

        std::set<std::vector<int32_t>> image;
        for (long long i : stab_acts)
            image.insert(perm_from([&](int e) { return img(i, e); }));
        check((long long)image.size() == q, "permutation image size is off");

        std::vector<std::vector<int32_t>> gens;
        if (r.edge_flip) {
            gens.push_back(perm_from([&](int e) { return img(flip_act, e); }));
            gens.push_back(perm_from([&](int e) { return img(adj_act, e); }));
        } else {
            gens.push_back(perm_from([&](int e) { return g.conjugate(x, e); }));
            gens.push_back(perm_from([&](int e) { return g.conjugate(y, e); }));
        }
        for (const auto& p : gens)
            check(image.count(p) > 0, "a generator misses the permutation image");

        std::vector<int32_t> ident((size_t)tcount);
        for (long long idx = 0; idx < tcount; idx++) ident[idx] = (int32_t)idx;
        std::set<std::vector<int32_t>> closure{ident};
        std::vector<std::vector<int32_t>> frontier{ident};
        while (!frontier.empty()) {
            std::vector<std::vector<int32_t>> next;
            for (const auto& p : frontier) {
                for (const auto& gen : gens) {
                    std::vector<int32_t> prod((size_t)tcount);
                    for (long long idx = 0; idx < tcount; idx++) prod[idx] = p[gen[idx]];
                    if (closure.insert(prod).second) {
                        check((long long)closure.size() <= q, "two generators overshoot");
                        next.push_back(std::move(prod));
                    }
                }
            }
            frontier = std::move(next);
        }
        check(closure == image, "two generators do not span the subquotient");
        r.perm_verified = true;
    }

    return r;
}

template <class Img>
std::vector<action_report> analyze_all(const surface_complex& s, int jobs,
                                       long long perm_budget, bool via_aut,
                                       long long act_count, const Img& img) {
    const int n = s.component_count();
    std::vector<action_report> out((size_t)n);
    if (n == 0) return out;
    const std::vector<long long> type_counts = census_type_counts(s);
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; i++)
            out[i] = analyze(s, i, perm_budget, via_aut, act_count, img, type_counts);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors((size_t)jobs);
    std::vector<std::thread> pool;
    pool.reserve((size_t)jobs);
    for (int w = 0; w < jobs; w++) {
        pool.emplace_back([&, w] {
            try {
                for (int i; (i = next.fetch_add(1)) < n;)
                    out[i] = analyze(s, i, perm_budget, via_aut, act_count, img, type_counts);
            } catch (...) {
                errors[(size_t)w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

void validate_auts(const group_table& g, const std::vector<std::vector<int>>& auts) {
    if (auts.empty()) throw usage_error("empty automorphism list");
    for (const auto& a : auts)
        if ((int)a.size() != g.order())
            throw usage_error("automorphism table size does not match the group");
}

}  // namespace

action_report conjugation_report(const surface_complex& s, int component,
                                 long long perm_budget) {
    const group_table& g = s.group();
    auto img = [&g](long long i, int e) { return g.conjugate((int)i, e); };
    return analyze(s, component, perm_budget, false, g.order(), img,
                   census_type_counts(s));
}

std::vector<action_report> conjugation_reports(const surface_complex& s, int jobs,
                                               long long perm_budget) {
    const group_table& g = s.group();
    auto img = [&g](long long i, int e) { return g.conjugate((int)i, e); };
    return analyze_all(s, jobs, perm_budget, false, g.order(), img);
}

action_report automorphism_report(const surface_complex& s,
                                  const std::vector<std::vector<int>>& auts, int component,
                                  long long perm_budget) {
    validate_auts(s.group(), auts);
    auto img = [&auts](long long i, int e) { return auts[(size_t)i][(size_t)e]; };
    return analyze(s, component, perm_budget, true, (long long)auts.size(), img,
                   census_type_counts(s));
}

std::vector<action_report> automorphism_reports(const surface_complex& s,
                                                const std::vector<std::vector<int>>& auts,
                                                int jobs, long long perm_budget) {
    validate_auts(s.group(), auts);
    auto img = [&auts](long long i, int e) { return auts[(size_t)i][(size_t)e]; };
    return analyze_all(s, jobs, perm_budget, true, (long long)auts.size(), img);
}

std::vector<action_report> automorphism_reports(const surface_complex& s, int jobs,
                                                long long perm_budget) {
    return automorphism_reports(s, automorphism_group(s.group()), jobs, perm_budget);
}

std::optional<long long> simple_group_quotient_order(const surface_complex& s,
                                                     int component) {
    if (component < 0 || component >= s.component_count())
        throw usage_error("component index out of range");
    const group_table& g = s.group();
    if (!g.is_simple()) throw usage_error("the shortcut needs a nonabelian simple group");
    const auto& comps = s.components();
    long long k = 0;
    for (const auto& o : comps)
        if (same_type(comps[component], o)) k++;
    // The group permutes the k components of this type. When k! < |G| the
    // induced map into the symmetric group on them cannot be injective, so by
    // simplicity the whole group stabilizes the component; the kernel of the
    // action on it is a proper normal subgroup (conjugation by x moves the
    // spokes at the y vertex), hence trivial.
    long long fact = 1;
    for (long long i = 2; i <= k && fact < g.order(); i++) fact *= i;
    if (fact >= g.order()) return std::nullopt;
    return g.order();
}

long long sphere_quotient_genus(long long q, long long genus,
                                const std::vector<long long>& branch) {
    if (q <= 0) throw usage_error("cover degree must be positive");
    if (genus < 0) throw usage_error("genus must be nonnegative");
    // 2 - 2 genus = q (2 - 2 g') - sum (q - q / r), solved for g'
    long long t = 2 - 2 * genus;
    for (long long r : branch) {
        if (r <= 0) throw usage_error("ramification indices must be positive");
        check(q % r == 0, "ramification index does not divide the degree");
        t += q - q / r;
    }
    check(t % q == 0, "no integral quotient genus");
    const long long v = t / q;  // equals 2 - 2 g'
    check(v <= 2 && (2 - v) % 2 == 0, "no integral quotient genus");
    return (2 - v) / 2;
}

}  // namespace atlas
