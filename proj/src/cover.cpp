#include "atlas/cover.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <unordered_map>

namespace atlas {

namespace {

// Face and vertex identifications of the base complex, precomputed in one
// pass so fiber checks can project cover cells without re-walking orbits.
struct base_maps {
    std::unordered_map<long long, long long> face_of;    // triangle -> least triangle of its face
    std::unordered_map<long long, long long> vertex_of;  // corner -> least corner of its vertex
    std::unordered_map<long long, long long> valency;    // vertex id -> valency
};

base_maps build_base_maps(const surface_complex& sc) {
    base_maps bm;
    const int m = sc.group().order();
    for (int x = 0; x < m; x++)
        for (int y = 0; y < m; y++) {
            if (!sc.is_triangle(x, y)) continue;
            long long t0 = sc.tri_id(x, y);
            if (!bm.face_of.count(t0)) {
                std::vector<long long> orbit{t0};
                for (long long t = sc.spoke_y(t0); t != t0; t = sc.spoke_y(t))
                    orbit.push_back(t);
                long long least = *std::min_element(orbit.begin(), orbit.end());
                for (long long t : orbit) bm.face_of[t] = least;
            }
            for (long long c0 : {2 * t0, 2 * t0 + 1}) {
                if (bm.vertex_of.count(c0)) continue;
                auto orbit = sc.vertex_corner_orbit(c0);
                long long least = *std::min_element(orbit.begin(), orbit.end());
                for (long long c : orbit) bm.vertex_of[c] = least;
                bm.valency[least] = (long long)orbit.size() / 2;
            }
        }
    return bm;
}

// Two-color vertices along rim edges starting with 0 at the given vertex.
// On a component with two vertex classes every rim edge joins one vertex
// from each class, otherwise the edge itself would merge the classes.
std::unordered_map<long long, int> side_map(
    const std::unordered_map<long long, std::vector<long long>>& adj, long long start) {
    std::unordered_map<long long, int> color;
    std::queue<long long> work;
    color[start] = 0;
    work.push(start);
    while (!work.empty()) {
        long long v = work.front();
        work.pop();
        for (long long w : adj.at(v)) {
            auto [it, inserted] = color.emplace(w, 1 - color[v]);
            if (inserted)
                work.push(w);
            else
                check(it->second != color[v], "edge bipartition failed on a two-class component");
        }
    }
    return color;
}

long long valency_at(const surface_complex& sc, long long corner) {
    return (long long)sc.vertex_corner_orbit(corner).size() / 2;
}

long long exact_div(long long a, long long b, const char* what) {
    check(b > 0 && a % b == 0, std::string(what) + " is not an integer ratio");
    return a / b;
}

}  // namespace

int central_monodromy(const group_table& g, int x, int y, int n) {
    if (x < 0 || y < 0 || x >= g.order() || y >= g.order())
        throw usage_error("element index out of range");
    if (n < 1) throw usage_error("walk length must be positive");
    int u = x, v = y;
    for (int i = 0; i < n; i++) {
        int nu = v, nv = g.mul(g.mul(g.inv(v), u), v);
        u = nu;
        v = nv;
    }
    int c = g.mul(g.inv(x), u);
    check(u == g.mul(x, c) && v == g.mul(y, g.inv(c)),
          "face monodromy is not a two-sided central twist");
    for (int w = 0; w < g.order(); w++)
        check(g.mul(c, w) == g.mul(w, c), "face monodromy element is not central");
    return c;
}

cover_analysis::cover_analysis(const group_table& gamma, std::vector<int> kernel,
                               bool central_extras, unsigned lift_seed)
    : kernel_(std::move(kernel)),
      central_(central_extras),
      cover_(gamma),
      base_([&] {
          auto qd = gamma.quotient(kernel_, gamma.spec() + "/" + std::to_string(kernel_.size()));
          if (qd.table.is_abelian())
              throw usage_error("quotient is abelian: the base complex is empty");
          return surface_complex(qd.table);
      }()) {
    // recompute the projection (the quotient built above is discarded by the
    // lambda; cosets are deterministic, so this matches the base group)
    auto qd = gamma.quotient(kernel_, base_.group().spec());
    proj_ = std::move(qd.proj);
    rep_ = std::move(qd.rep);

    if (central_) {
        auto z = gamma.center();
        for (int k : kernel_)
            if (!std::binary_search(z.begin(), z.end(), k))
                throw usage_error("central analysis requires a kernel inside the center");
    }

    const long long ksz = (long long)kernel_.size();
    long long kernel_exponent = 1;
    for (int k : kernel_) kernel_exponent = std::lcm(kernel_exponent, (long long)gamma.element_order(k));
    std::mt19937 rng(lift_seed);
    std::uniform_int_distribution<long long> pick(0, ksz - 1);

    base_maps bm = build_base_maps(base_);
    std::unordered_map<long long, std::vector<long long>> adj;
    for (const auto& [t, f] : bm.face_of) {
        long long a = bm.vertex_of.at(2 * t), b = bm.vertex_of.at(2 * t + 1);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    std::vector<int> covered(cover_.component_count(), 0);
    std::vector<std::unordered_map<long long, int>> sides;

    for (int bi = 0; bi < base_.component_count(); bi++) {
        const component_info& B = base_.components()[bi];
        base_cover rep;
        rep.base_component = bi;
        rep.x_hat = rep_[B.ref_x];
        rep.y_hat = rep_[B.ref_y];
        if (lift_seed != 0) {
            rep.x_hat = gamma.mul(rep.x_hat, kernel_[pick(rng)]);
            rep.y_hat = gamma.mul(rep.y_hat, kernel_[pick(rng)]);
        }

        long long bx = bm.vertex_of.at(2 * B.least_triangle);
        long long by = bm.vertex_of.at(2 * B.least_triangle + 1);
        long long lamx = bm.valency.at(bx), lamy = bm.valency.at(by);
        std::unordered_map<long long, int> side;
        if (B.vertex_orbits == 2) {
            side = side_map(adj, bx);
            check((long long)side.size() == B.vertices, "vertex bipartition misses vertices");
            long long zeros = 0;
            for (const auto& [v, c] : side) zeros += c == 0;
            rep.class_vertices_x = zeros;
            rep.class_vertices_y = (long long)side.size() - zeros;
        } else {
            check(lamx == lamy && lamx == B.lambda1 && B.lambda1 == B.lambda2,
                  "single vertex class with two valency values");
        }

        // spread the reference pair by the kernel on both sides
        std::map<int, lift_class> classes;
        std::vector<int> cell_comp(ksz * ksz);
        for (long long i = 0; i < ksz; i++)
            for (long long j = 0; j < ksz; j++) {
                int u = gamma.mul(rep.x_hat, kernel_[i]);
                int v = gamma.mul(rep.y_hat, kernel_[j]);
                check(cover_.is_triangle(u, v), "lift of a noncommuting pair commutes");
                check(proj_[u] == B.ref_x && proj_[v] == B.ref_y,
                      "lifted pair does not project to the base reference pair");
                int ci = cover_.component_of(u, v);
                cell_comp[i * ksz + j] = ci;
                auto [it, inserted] = classes.emplace(ci, lift_class{});
                if (inserted) {
                    it->second.cover_component = ci;
                    it->second.witness_x = u;
                    it->second.witness_y = v;
                }
                it->second.multiplicity++;
            }

        long long total_m = 0;
        for (auto& [ci, lc] : classes) {
            const component_info& C = cover_.components()[ci];
            check(covered[ci]++ == 0, "cover component reached from two base components");
            total_m += lc.multiplicity;

            lc.ell = exact_div(C.face_size, B.face_size, "face size ratio");
            if (B.vertex_orbits == 2) {
                long long wt = cover_.tri_id(lc.witness_x, lc.witness_y);
                lc.ell_x = exact_div(valency_at(cover_, 2 * wt), lamx, "x valency ratio");
                lc.ell_y = exact_div(valency_at(cover_, 2 * wt + 1), lamy, "y valency ratio");
            } else {
                // the two edge ends are interchangeable downstairs, so report
                // the component's valency spread in ascending order
                lc.ell_x = exact_div(C.lambda1, B.lambda1, "least valency ratio");
                lc.ell_y = exact_div(C.lambda2, B.lambda2, "greatest valency ratio");
            }
            check(lc.multiplicity % lc.ell == 0 && lc.multiplicity % lc.ell_x == 0 &&
                      lc.multiplicity % lc.ell_y == 0,
                  "a ramification index does not divide the covering number");
            long long va = lc.ell_x * lamx, vb = lc.ell_y * lamy;
            check(std::min(va, vb) == C.lambda1 && std::max(va, vb) == C.lambda2,
                  "lifted valencies disagree with the cover component's symbol");

            check(C.edges == lc.multiplicity * B.edges, "cover edge count is not m times the base");
            check(C.faces * lc.ell == lc.multiplicity * B.faces,
                  "cover face count is not m/ell times the base");
            if (B.vertex_orbits == 2)
                check(C.vertices * lc.ell_x * lc.ell_y ==
                          lc.multiplicity * (rep.class_vertices_x * lc.ell_y +
                                             rep.class_vertices_y * lc.ell_x),
                      "cover vertex count disagrees with the two-class relation");

            if (central_) {
                int c = central_monodromy(gamma, lc.witness_x, lc.witness_y, B.face_size);
                check(std::binary_search(kernel_.begin(), kernel_.end(), c),
                      "face monodromy lies outside the kernel");
                lc.monodromy_order = gamma.element_order(c);
                check(lc.monodromy_order == lc.ell, "face monodromy order differs from ell");
                check(kernel_exponent % lc.ell == 0, "ell does not divide the kernel exponent");
                check(kernel_exponent % lc.ell_x == 0 && kernel_exponent % lc.ell_y == 0,
                      "valency ratio does not divide the kernel exponent");
            }
        }
        check(total_m == ksz * ksz, "lift multiplicities must sum to kernel^2");

        for (const auto& [ci, lc] : classes) rep.classes.push_back(lc);

        if (central_) {
            auto same_shape = [&](const lift_class& a, const lift_class& b) {
                const component_info &A = cover_.components()[a.cover_component],
                                     &Bc = cover_.components()[b.cover_component];
                return a.multiplicity == b.multiplicity && a.ell == b.ell &&
                       a.ell_x == b.ell_x && a.ell_y == b.ell_y &&
                       a.monodromy_order == b.monodromy_order &&
                       A.face_size == Bc.face_size && A.genus == Bc.genus &&
                       A.lambda1 == Bc.lambda1 && A.lambda2 == Bc.lambda2 &&
                       A.edges == Bc.edges && A.vertices == Bc.vertices;
            };
            if (B.vertex_orbits == 2) {
                // all classes identical, m * k = |kernel|^2
                for (const auto& lc : rep.classes)
                    check(same_shape(lc, rep.classes.front()),
                          "central cover of a two-class base with unequal lift classes");
                check(rep.classes.front().multiplicity * (long long)rep.classes.size() ==
                          ksz * ksz,
                      "central two-class base: m * k != kernel^2");
            } else {
                // group the classes by the diagonal central rewriting orbits
                std::unordered_map<int, long long> kpos;
                for (long long i = 0; i < ksz; i++) kpos[kernel_[i]] = i;
                std::map<int, const lift_class*> by_comp;
                for (const auto& lc : rep.classes) by_comp[lc.cover_component] = &lc;
                std::vector<int> comp_grouping(cover_.component_count(), -1);
                std::vector<bool> cell_seen(ksz * ksz, false);
                for (long long cell = 0; cell < ksz * ksz; cell++) {
                    if (cell_seen[cell]) continue;
                    std::vector<int> members;
                    std::map<int, long long> hits;
                    for (long long d = 0; d < ksz; d++) {
                        long long i = kpos.at(gamma.mul(kernel_[cell / ksz], kernel_[d]));
                        long long j = kpos.at(gamma.mul(kernel_[cell % ksz], kernel_[d]));
                        check(!cell_seen[i * ksz + j] || d == 0, "diagonal rewriting is not free");
                        cell_seen[i * ksz + j] = true;
                        hits[cell_comp[i * ksz + j]]++;
                    }
                    for (const auto& [ci, cnt] : hits) {
                        check(cnt == by_comp.at(ci)->multiplicity,
                              "lift class straddles two diagonal rewriting orbits");
                        check(comp_grouping[ci] == -1, "cover component in two groupings");
                        comp_grouping[ci] = (int)rep.groupings.size();
                        check(same_shape(*by_comp.at(ci), *by_comp.at(hits.begin()->first)),
                              "grouping with unequal lift classes");
                        members.push_back(ci);
                    }
                    check(hits.begin()->second * (long long)hits.size() == ksz,
                          "central one-class base: m * k != kernel size");
                    rep.groupings.push_back(std::move(members));
                }
                check((long long)rep.groupings.size() == ksz,
                      "central one-class base must split into kernel-many groupings");
            }
        }
        sides.push_back(std::move(side));
        reports_.push_back(std::move(rep));
    }

    // map each cover component to its lift class, if it has one
    std::vector<std::pair<int, int>> class_of(cover_.component_count(), {-1, -1});
    for (int ri = 0; ri < (int)reports_.size(); ri++)
        for (int cj = 0; cj < (int)reports_[ri].classes.size(); cj++)
            class_of[reports_[ri].classes[cj].cover_component] = {ri, cj};

    // every cover component either lifts exactly one base component or its
    // reference pair projects to a commuting pair and covers nothing
    const group_table& q = base_.group();
    for (int ci = 0; ci < cover_.component_count(); ci++)
        if (covered[ci] == 0) {
            const component_info& C = cover_.components()[ci];
            int a = proj_[C.ref_x], b = proj_[C.ref_y];
            check(q.mul(a, b) == q.mul(b, a),
                  "unlifted cover component projects to a noncommuting pair");
        }

    // fiber checks: walk the cover's edges, faces, and vertices once each,
    // project them to the base, and verify the branched covering locally.
    // Edge fibers have exactly m points (no branching over edges), face
    // fibers exactly m / ell, and the valencies in the fiber over a vertex
    // sum to m times the base valency. With two base vertex classes the
    // ramification is uniform over each class.
    struct fiber_acc {
        std::unordered_map<long long, long long> edge_count, face_count, vertex_sum, vertex_count;
    };
    std::vector<std::vector<fiber_acc>> acc(reports_.size());
    for (size_t ri = 0; ri < reports_.size(); ri++) acc[ri].resize(reports_[ri].classes.size());

    const int cm = gamma.order();
    std::vector<bool> face_seen((long long)cm * cm, false);
    std::vector<bool> corner_seen(2LL * cm * cm, false);
    for (int x = 0; x < cm; x++)
        for (int y = 0; y < cm; y++) {
            if (!cover_.is_triangle(x, y)) continue;
            long long t0 = cover_.tri_id(x, y);
            auto [ri, cj] = class_of[cover_.component_of_triangle(t0)];
            long long bt = ri < 0 ? 0 : base_.tri_id(proj_[x], proj_[y]);
            if (ri >= 0 && t0 < cover_.rim(t0))
                acc[ri][cj].edge_count[std::min(bt, base_.rim(bt))]++;
            if (!face_seen[t0]) {
                for (long long t = t0;;) {
                    face_seen[t] = true;
                    t = cover_.spoke_y(t);
                    if (t == t0) break;
                }
                if (ri >= 0) acc[ri][cj].face_count[bm.face_of.at(bt)]++;
            }
            for (long long c0 : {2 * t0, 2 * t0 + 1}) {
                if (corner_seen[c0]) continue;
                auto orbit = cover_.vertex_corner_orbit(c0);
                for (long long c : orbit) corner_seen[c] = true;
                if (ri < 0) continue;
                long long bv = bm.vertex_of.at(2 * bt + (c0 & 1));
                long long lam_base = bm.valency.at(bv);
                long long lam_hat = (long long)orbit.size() / 2;
                check(lam_hat % lam_base == 0,
                      "cover valency is not a multiple of the base valency");
                long long ratio = lam_hat / lam_base;
                const lift_class& lc = reports_[ri].classes[cj];
                if (base_.components()[reports_[ri].base_component].vertex_orbits == 2) {
                    long long expect = sides[ri].at(bv) == 0 ? lc.ell_x : lc.ell_y;
                    check(ratio == expect, "ramification is not uniform over a base vertex class");
                } else {
                    check(ratio == lc.ell_x || ratio == lc.ell_y,
                          "fiber ramification outside the component's valency ratios");
                }
                acc[ri][cj].vertex_sum[bv] += lam_hat;
                acc[ri][cj].vertex_count[bv]++;
            }
        }

    for (size_t ri = 0; ri < reports_.size(); ri++) {
        const component_info& B = base_.components()[reports_[ri].base_component];
        for (size_t cj = 0; cj < reports_[ri].classes.size(); cj++) {
            const lift_class& lc = reports_[ri].classes[cj];
            const fiber_acc& fa = acc[ri][cj];
            check((long long)fa.edge_count.size() == B.edges, "a base edge has an empty fiber");
            for (const auto& [be, cnt] : fa.edge_count)
                check(cnt == lc.multiplicity, "edge fiber size differs from m");
            check((long long)fa.face_count.size() == B.faces, "a base face has an empty fiber");
            for (const auto& [bf, cnt] : fa.face_count)
                check(cnt * lc.ell == lc.multiplicity, "face fiber size differs from m / ell");
            check((long long)fa.vertex_sum.size() == B.vertices, "a base vertex has an empty fiber");
            for (const auto& [bv, s] : fa.vertex_sum)
                check(s == lc.multiplicity * bm.valency.at(bv),
                      "fiber valencies do not sum to m times the base valency");
            if (B.vertex_orbits == 2)
                for (const auto& [bv, cnt] : fa.vertex_count) {
                    long long lr = sides[ri].at(bv) == 0 ? lc.ell_x : lc.ell_y;
                    check(cnt * lr == lc.multiplicity,
                          "vertex fiber size differs from m over the ramification");
                }
        }
    }
}

}  // namespace atlas
