#include "doctest.h"

#include "atlas/actions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <vector>

using atlas::action_report;
using atlas::component_info;
using atlas::group_table;
using atlas::surface_complex;

namespace {

// One report reduced to comparable numbers. Fields: edge count, |Q|, vertex
// orbit count, |Q_e|, |Q_F|, vertex stabilizer orders in ascending order,
// kernel order, component orbit size.
struct qrow {
    long long e, q, orbits, qe, qf, qlo, qhi, kernel, orbit;
    auto tied() const { return std::tie(e, q, orbits, qe, qf, qlo, qhi, kernel, orbit); }
    bool operator<(const qrow& o) const { return tied() < o.tied(); }
    bool operator==(const qrow& o) const { return tied() == o.tied(); }
};

qrow row_of(const surface_complex& s, const action_report& r) {
    const component_info& c = s.components()[r.component];
    return {c.edges,
            r.q_order,
            r.vertex_orbits,
            r.q_e,
            r.q_f,
            std::min(r.q_x, r.q_y),
            std::max(r.q_x, r.q_y),
            r.kernel_order,
            r.orbit_size};
}

std::vector<qrow> conjugation_rows(const surface_complex& s) {
    std::vector<qrow> out;
    for (const auto& r : atlas::conjugation_reports(s)) out.push_back(row_of(s, r));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<qrow> sorted(std::vector<qrow> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// indices of components matching a Schlaefli symbol
std::vector<int> comps_with(const surface_complex& s, int n, int l1, int l2) {
    std::vector<int> out;
    for (int i = 0; i < s.component_count(); i++) {
        const auto& c = s.components()[i];
        if (c.face_size == n && c.lambda1 == l1 && c.lambda2 == l2) out.push_back(i);
    }
    return out;
}

void check_report_consistency(const surface_complex& s, const action_report& r) {
    const component_info& c = s.components()[r.component];
    long long e = c.edges;
    CHECK(r.q_order == (r.edge_flip ? 2 * e : e));
    CHECK(r.vertex_orbits == (r.edge_flip ? 1 : 2));
    CHECK(r.q_e == 1 + (r.edge_flip ? 1 : 0));
    CHECK(r.q_f == (r.edge_flip ? c.face_size : c.face_size / 2));
    CHECK(std::min(r.q_x, r.q_y) == c.lambda1);
    CHECK(std::max(r.q_x, r.q_y) == c.lambda2);
    CHECK(r.quotient_genus == 0);
    CHECK(r.hurwitz_ok);
    if (c.genus >= 2) CHECK(r.q_order <= 84 * (c.genus - 1));
    CHECK(r.hurwitz_equality == (c.genus >= 2 && r.q_order == 84 * (c.genus - 1)));
    CHECK(r.stabilizer_order % r.kernel_order == 0);
    CHECK(r.q_order * r.kernel_order == r.stabilizer_order);
    if (!r.via_automorphisms) {
        CHECK(r.orbit_size * r.stabilizer_order == s.group().order());
        CHECK(r.vertex_orbits == c.vertex_orbits);
    }
}

}  // namespace

TEST_SUITE("actions") {

TEST_CASE("dihedral equator spheres realize the central quotient") {
    // The component whose faces are the two n-gon hemispheres has all n
    // reflections on the equator; its symmetry group is the dihedral group
    // modulo its center, of order 2n for odd n and n for even n.
    for (int n = 3; n <= 8; n++) {
        auto g = group_table::dihedral(2 * n);
        surface_complex s(g);
        auto eq = comps_with(s, n, 2, 2);
        REQUIRE(!eq.empty());
        for (int ci : eq) {
            const auto& c = s.components()[ci];
            CHECK(c.genus == 0);
            CHECK(c.edges == n);
            auto r = atlas::conjugation_report(s, ci);
            long long center = (n % 2 == 0) ? 2 : 1;
            CHECK(r.q_order == 2 * n / center);
            CHECK(r.kernel_order == center);
            CHECK(r.stabilizer_order == 2 * n);
            CHECK(r.edge_flip == (n % 2 == 1));
            CHECK(r.vertex_orbits == (n % 2 == 1 ? 1 : 2));
            CHECK(r.q_x == 2);
            CHECK(r.q_y == 2);
            CHECK(r.q_f == (n % 2 == 1 ? n : n / 2));
            CHECK(r.quotient_genus == 0);
            check_report_consistency(s, r);
        }
        // every component of a dihedral group quotients to a sphere
        for (const auto& r : atlas::conjugation_reports(s)) {
            CHECK(r.quotient_genus == 0);
            CHECK(s.components()[r.component].genus == 0);
        }
    }
}

TEST_CASE("dihedral component tables") {
    // Full per-component expectations, derived by hand from the dihedral
    // relations. Row fields: E, |Q|, orbits, |Q_e|, |Q_F|, qlo, qhi, kernel,
    // component orbit size.
    auto d6 = sorted({{3, 6, 1, 2, 3, 2, 2, 1, 1}, {6, 6, 2, 1, 2, 2, 3, 1, 1}});
    auto d8 = sorted({{4, 4, 2, 1, 2, 2, 2, 2, 1},
                      {4, 4, 2, 1, 2, 2, 2, 2, 1},
                      {4, 4, 2, 1, 2, 2, 2, 2, 1}});
    auto d10 = sorted({{5, 10, 1, 2, 5, 2, 2, 1, 1},
                       {5, 10, 1, 2, 5, 2, 2, 1, 1},
                       {10, 10, 2, 1, 2, 2, 5, 1, 1},
                       {10, 10, 2, 1, 2, 2, 5, 1, 1}});
    auto d12 = sorted({{6, 6, 2, 1, 3, 2, 2, 2, 1},
                       {3, 6, 1, 2, 3, 2, 2, 2, 1},
                       {3, 6, 1, 2, 3, 2, 2, 2, 1},
                       {6, 6, 2, 1, 2, 2, 3, 2, 1},
                       {6, 6, 2, 1, 2, 2, 3, 2, 1},
                       {6, 6, 2, 1, 2, 2, 3, 2, 1},
                       {6, 6, 2, 1, 2, 2, 3, 2, 1}});
    auto d14 = sorted({{7, 14, 1, 2, 7, 2, 2, 1, 1},
                       {7, 14, 1, 2, 7, 2, 2, 1, 1},
                       {7, 14, 1, 2, 7, 2, 2, 1, 1},
                       {14, 14, 2, 1, 2, 2, 7, 1, 1},
                       {14, 14, 2, 1, 2, 2, 7, 1, 1},
                       {14, 14, 2, 1, 2, 2, 7, 1, 1}});
    // D16 has both vertex-transitive and two-class squares: the offset-two
    // reflection squares admit an edge flip while the mixed rotation and
    // reflection squares do not, and the latter are swapped in pairs by
    // conjugation (orbit size 2).
    auto d16 = sorted({{8, 8, 2, 1, 4, 2, 2, 2, 1},
                       {8, 8, 2, 1, 4, 2, 2, 2, 1},
                       {4, 8, 1, 2, 4, 2, 2, 2, 1},
                       {4, 8, 1, 2, 4, 2, 2, 2, 1},
                       {8, 8, 2, 1, 2, 2, 4, 2, 1},
                       {8, 8, 2, 1, 2, 2, 4, 2, 1},
                       {8, 8, 2, 1, 2, 2, 4, 2, 1},
                       {8, 8, 2, 1, 2, 2, 4, 2, 1},
                       {4, 4, 2, 1, 2, 2, 2, 2, 2},
                       {4, 4, 2, 1, 2, 2, 2, 2, 2},
                       {4, 4, 2, 1, 2, 2, 2, 2, 2},
                       {4, 4, 2, 1, 2, 2, 2, 2, 2}});
    CHECK(conjugation_rows(surface_complex(group_table::dihedral(6))) == d6);
    CHECK(conjugation_rows(surface_complex(group_table::dihedral(8))) == d8);
    CHECK(conjugation_rows(surface_complex(group_table::dihedral(10))) == d10);
    CHECK(conjugation_rows(surface_complex(group_table::dihedral(12))) == d12);
    CHECK(conjugation_rows(surface_complex(group_table::dihedral(14))) == d14);
    CHECK(conjugation_rows(surface_complex(group_table::dihedral(16))) == d16);
}

TEST_CASE("platonic components carry the full rotation groups") {
    auto a4 = group_table::alternating(4);
    surface_complex sa4(a4);
    auto tetra = comps_with(sa4, 3, 3, 3);
    REQUIRE(tetra.size() == 2);
    for (int ci : tetra) {
        auto r = atlas::conjugation_report(sa4, ci);
        CHECK(r.q_order == 12);
        CHECK(r.kernel_order == 1);
        CHECK(r.stabilizer_order == 12);
        CHECK(r.edge_flip);
        CHECK(r.q_x == 3);
        CHECK(r.q_y == 3);
        CHECK(r.q_e == 2);
        CHECK(r.q_f == 3);
        CHECK(r.orbit_size == 1);
        CHECK(r.perm_verified);
        check_report_consistency(sa4, r);
    }

    auto s4 = group_table::symmetric(4);
    surface_complex ss4(s4);
    auto octa = comps_with(ss4, 3, 4, 4);
    auto cube = comps_with(ss4, 4, 3, 3);
    REQUIRE(octa.size() == 1);
    REQUIRE(cube.size() == 1);
    auto ro = atlas::conjugation_report(ss4, octa[0]);
    CHECK(ro.q_order == 24);
    CHECK(ro.kernel_order == 1);
    CHECK(ro.edge_flip);
    CHECK(ro.q_x == 4);
    CHECK(ro.q_f == 3);
    auto rc = atlas::conjugation_report(ss4, cube[0]);
    CHECK(rc.q_order == 24);
    CHECK(rc.edge_flip);
    CHECK(rc.q_x == 3);
    CHECK(rc.q_f == 4);

    auto a5 = group_table::alternating(5);
    surface_complex sa5(a5);
    CHECK(sa5.component_count() == 91);
    auto dodeca = comps_with(sa5, 5, 3, 3);
    auto icosa = comps_with(sa5, 3, 5, 5);
    REQUIRE(dodeca.size() == 2);
    REQUIRE(icosa.size() == 2);
    for (int ci : dodeca) {
        auto r = atlas::conjugation_report(sa5, ci);
        CHECK(r.q_order == 60);
        CHECK(r.q_x == 3);
        CHECK(r.q_f == 5);
        CHECK(r.edge_flip);
        check_report_consistency(sa5, r);
    }
    for (int ci : icosa) {
        auto r = atlas::conjugation_report(sa5, ci);
        CHECK(r.q_order == 60);
        CHECK(r.q_x == 5);
        CHECK(r.q_f == 3);
    }
}

TEST_CASE("simple group shortcut pins the subquotient order") {
    auto a5 = group_table::alternating(5);
    surface_complex s(a5);
    auto dodeca = comps_with(s, 5, 3, 3);
    REQUIRE(dodeca.size() == 2);
    auto expect = atlas::simple_group_quotient_order(s, dodeca[0]);
    REQUIRE(expect.has_value());
    CHECK(*expect == 60);
    CHECK(*expect == atlas::conjugation_report(s, dodeca[0]).q_order);

    // a type occurring k times with k! >= |G| supports no conclusion
    std::map<std::tuple<int, long long, int, int, int, long long, long long>, int> counts;
    for (const auto& c : s.components())
        counts[{c.genus, c.faces, c.face_size, c.lambda1, c.lambda2, c.vertices, c.edges}]++;
    int big = -1;
    for (int i = 0; i < s.component_count(); i++) {
        const auto& c = s.components()[i];
        if (counts[{c.genus, c.faces, c.face_size, c.lambda1, c.lambda2, c.vertices,
                    c.edges}] >= 5)
            big = i;
    }
    REQUIRE(big >= 0);
    CHECK(!atlas::simple_group_quotient_order(s, big).has_value());

    // not simple: no shortcut
    surface_complex ss4(group_table::symmetric(4));
    CHECK_THROWS_AS((void)atlas::simple_group_quotient_order(ss4, 0), atlas::usage_error);
}

TEST_CASE("hurwitz equality on the genus three components") {
    auto g = group_table::psl2(7);
    surface_complex s(g);
    CHECK(s.component_count() == 385);
    auto reports = atlas::conjugation_reports(s, 2);
    for (const auto& r : reports) check_report_consistency(s, r);

    // the three combinatorial types attaining |Q| = 84 (g - 1) at genus 3
    struct htype {
        int n, l1, l2;
    };
    for (htype h : {htype{14, 2, 3}, htype{6, 2, 7}, htype{4, 3, 7}}) {
        auto comps = comps_with(s, h.n, h.l1, h.l2);
        CHECK(!comps.empty());
        for (int ci : comps) {
            const auto& c = s.components()[ci];
            CHECK(c.genus == 3);
            CHECK(c.edges == 168);
            CHECK(reports[ci].q_order == 168);
            CHECK(reports[ci].hurwitz_equality);
        }
    }
    // genus three alone does not force the bound: components of the same
    // genus with fewer edges stay strictly under it
    bool strict = false;
    for (const auto& r : reports)
        if (s.components()[r.component].genus == 3 && !r.hurwitz_equality) strict = true;
    CHECK(strict);

    auto d73 = comps_with(s, 14, 2, 3);
    REQUIRE(d73.size() == 2);
    const auto& r = reports[d73[0]];
    CHECK(r.q_order == 168);
    CHECK(r.kernel_order == 1);
    CHECK(!r.edge_flip);
    CHECK(r.vertex_orbits == 2);
    CHECK(r.q_e == 1);
    CHECK(r.q_f == 7);
    CHECK(std::min(r.q_x, r.q_y) == 2);
    CHECK(std::max(r.q_x, r.q_y) == 3);
    CHECK(r.perm_verified);
    auto expect = atlas::simple_group_quotient_order(s, d73[0]);
    REQUIRE(expect.has_value());
    CHECK(*expect == 168);
}

TEST_CASE("extraspecial components under conjugation and automorphisms") {
    auto g = group_table::extraspecial_exp_p(3);
    surface_complex s(g);
    CHECK(s.component_count() == 24);
    for (const auto& r : atlas::conjugation_reports(s)) {
        const auto& c = s.components()[r.component];
        CHECK(c.genus == 1);
        CHECK(c.edges == 9);
        CHECK(r.q_order == 9);
        CHECK(r.kernel_order == 3);
        CHECK(r.stabilizer_order == 27);
        CHECK(r.vertex_orbits == 2);
        CHECK(r.q_x == 3);
        CHECK(r.q_y == 3);
        CHECK(r.q_f == 3);
        CHECK(r.orbit_size == 1);
        check_report_consistency(s, r);
    }

    auto auts = atlas::automorphism_group(g);
    CHECK(auts.size() == 432);
    for (const auto& r : atlas::automorphism_reports(s, auts)) {
        CHECK(r.via_automorphisms);
        CHECK(r.q_order == 18);
        CHECK(r.kernel_order == 1);
        CHECK(r.stabilizer_order == 18);
        CHECK(r.edge_flip);
        CHECK(r.vertex_orbits == 1);
        CHECK(r.q_e == 2);
        CHECK(r.q_f == 6);
        CHECK(r.orbit_size == 24);
        CHECK(r.quotient_genus == 0);
        check_report_consistency(s, r);
    }
}

TEST_CASE("extraspecial order 125 automorphism subquotients") {
    auto g = group_table::extraspecial_exp_p(5);
    surface_complex s(g);
    CHECK(s.component_count() == 240);
    auto auts = atlas::automorphism_group(g);
    CHECK(auts.size() == 12000);
    auto reports = atlas::automorphism_reports(s, auts, 4);
    for (const auto& r : reports) {
        const auto& c = s.components()[r.component];
        CHECK(c.genus == 6);
        CHECK(c.edges == 25);
        CHECK(r.q_order == 50);
        CHECK(r.orbit_size == 240);
        CHECK(r.edge_flip);
        check_report_consistency(s, r);
    }
}

TEST_CASE("quaternion and binary tetrahedral components") {
    surface_complex q8(group_table::quaternion8());
    auto rows = conjugation_rows(q8);
    auto want = sorted({{4, 4, 2, 1, 2, 2, 2, 2, 1},
                        {4, 4, 2, 1, 2, 2, 2, 2, 1},
                        {4, 4, 2, 1, 2, 2, 2, 2, 1}});
    CHECK(rows == want);

    auto g = group_table::sl2(3);
    surface_complex s(g);
    CHECK(s.component_count() == 21);
    for (int ci : comps_with(s, 3, 3, 3)) {
        auto r = atlas::conjugation_report(s, ci);
        CHECK(r.q_order == 12);
        CHECK(r.kernel_order == 2);
        CHECK(r.stabilizer_order == 24);
        CHECK(r.edge_flip);
    }
    auto torus = comps_with(s, 6, 3, 3);
    REQUIRE(torus.size() == 2);
    for (int ci : torus) {
        const auto& c = s.components()[ci];
        CHECK(c.genus == 1);
        CHECK(c.edges == 12);
        auto r = atlas::conjugation_report(s, ci);
        CHECK(r.q_order == 12);
        CHECK(r.kernel_order == 2);
        CHECK(!r.edge_flip);
        CHECK(r.q_x == 3);
        CHECK(r.q_f == 3);
        check_report_consistency(s, r);
    }
    for (const auto& r : atlas::conjugation_reports(s)) check_report_consistency(s, r);
}

TEST_CASE("sweep invariants over small groups") {
    std::vector<group_table> groups;
    groups.push_back(group_table::symmetric(3));
    groups.push_back(group_table::alternating(4));
    groups.push_back(group_table::symmetric(4));
    groups.push_back(group_table::symmetric(5));
    groups.push_back(group_table::quaternion8());
    groups.push_back(group_table::sl2(3));
    groups.push_back(group_table::extraspecial_exp_p(3));
    for (const auto& g : groups) {
        surface_complex s(g);
        std::map<std::tuple<int, long long, int, int, int, long long, long long>, long long>
            counts;
        for (const auto& c : s.components())
            counts[{c.genus, c.faces, c.face_size, c.lambda1, c.lambda2, c.vertices,
                    c.edges}]++;
        for (const auto& r : atlas::conjugation_reports(s)) {
            check_report_consistency(s, r);
            const auto& c = s.components()[r.component];
            CHECK(r.orbit_size <= counts[{c.genus, c.faces, c.face_size, c.lambda1,
                                          c.lambda2, c.vertices, c.edges}]);
        }
    }
}

TEST_CASE("inner automorphisms reproduce the conjugation subquotients") {
    auto g = group_table::sl2(3);
    surface_complex s(g);
    std::set<std::vector<int>> inner_set;
    for (int a = 0; a < g.order(); a++) {
        std::vector<int> img(g.order());
        for (int x = 0; x < g.order(); x++) img[x] = g.conjugate(a, x);
        inner_set.insert(img);
    }
    std::vector<std::vector<int>> inner(inner_set.begin(), inner_set.end());
    CHECK((int)inner.size() == 12);  // SL2(3) modulo its center
    auto conj = atlas::conjugation_reports(s);
    auto via_inner = atlas::automorphism_reports(s, inner);
    REQUIRE(conj.size() == via_inner.size());
    for (size_t i = 0; i < conj.size(); i++) {
        CHECK(via_inner[i].q_order == conj[i].q_order);
        CHECK(via_inner[i].kernel_order * 2 == conj[i].kernel_order);
        CHECK(via_inner[i].vertex_orbits == conj[i].vertex_orbits);
        CHECK(via_inner[i].edge_flip == conj[i].edge_flip);
        CHECK(via_inner[i].q_x == conj[i].q_x);
        CHECK(via_inner[i].q_y == conj[i].q_y);
        CHECK(via_inner[i].q_f == conj[i].q_f);
        CHECK(via_inner[i].orbit_size == conj[i].orbit_size);
    }
}

TEST_CASE("the full automorphism group can merge component orbits") {
    auto g = group_table::alternating(4);
    surface_complex s(g);
    auto auts = atlas::automorphism_group(g);
    CHECK(auts.size() == 24);
    auto tetra = comps_with(s, 3, 3, 3);
    REQUIRE(tetra.size() == 2);
    for (int ci : tetra) {
        CHECK(atlas::conjugation_report(s, ci).orbit_size == 1);
        auto r = atlas::automorphism_report(s, auts, ci);
        CHECK(r.orbit_size == 2);
        CHECK(r.q_order == 12);
        check_report_consistency(s, r);
    }
    auto cube = comps_with(s, 4, 3, 3);
    REQUIRE(cube.size() == 1);
    CHECK(atlas::automorphism_report(s, auts, cube[0]).orbit_size == 1);
}

TEST_CASE("riemann hurwitz sphere quotients") {
    CHECK(atlas::sphere_quotient_genus(6, 0, {2, 2, 3}) == 0);
    CHECK(atlas::sphere_quotient_genus(24, 0, {4, 2, 3}) == 0);
    CHECK(atlas::sphere_quotient_genus(168, 3, {2, 3, 7}) == 0);
    CHECK(atlas::sphere_quotient_genus(18, 1, {3, 2, 6}) == 0);
    CHECK(atlas::sphere_quotient_genus(1, 0, {}) == 0);
    CHECK(atlas::sphere_quotient_genus(1, 1, {}) == 1);
    CHECK(atlas::sphere_quotient_genus(2, 0, {2, 2}) == 0);
    CHECK_THROWS_AS((void)atlas::sphere_quotient_genus(4, 0, {3}), atlas::theorem_error);
    CHECK_THROWS_AS((void)atlas::sphere_quotient_genus(2, 0, {}), atlas::theorem_error);
    CHECK_THROWS_AS((void)atlas::sphere_quotient_genus(0, 0, {}), atlas::usage_error);
    CHECK_THROWS_AS((void)atlas::sphere_quotient_genus(2, 0, {0}), atlas::usage_error);
}

TEST_CASE("degenerate and invalid inputs") {
    auto g = group_table::parse_spec("perm:(1 2)");
    surface_complex s(g);
    CHECK(s.component_count() == 0);
    CHECK(atlas::conjugation_reports(s).empty());
    CHECK_THROWS_AS((void)atlas::conjugation_report(s, 0), atlas::usage_error);

    auto s3 = group_table::symmetric(3);
    surface_complex ss3(s3);
    auto auts = atlas::automorphism_group(s3);
    CHECK(auts.size() == 6);
    CHECK_THROWS_AS((void)atlas::automorphism_report(ss3, auts, 99), atlas::usage_error);
    CHECK_THROWS_AS((void)atlas::conjugation_report(ss3, -1), atlas::usage_error);
}

TEST_CASE("restricted permutation budget keeps the arithmetic") {
    auto g = group_table::symmetric(4);
    surface_complex s(g);
    for (int ci = 0; ci < s.component_count(); ci++) {
        auto full = atlas::conjugation_report(s, ci);
        auto light = atlas::conjugation_report(s, ci, 0);
        CHECK(full.perm_verified);
        CHECK(!light.perm_verified);
        CHECK(full.q_order == light.q_order);
        CHECK(full.q_x == light.q_x);
        CHECK(full.q_y == light.q_y);
        CHECK(full.q_e == light.q_e);
        CHECK(full.q_f == light.q_f);
        CHECK(full.vertex_orbits == light.vertex_orbits);
        CHECK(full.orbit_size == light.orbit_size);
        check_report_consistency(s, light);
    }
}

TEST_CASE("reports are identical across job counts") {
    auto g = group_table::symmetric(5);
    surface_complex s(g);
    auto one = atlas::conjugation_reports(s, 1);
    auto four = atlas::conjugation_reports(s, 4);
    REQUIRE(one.size() == four.size());
    for (size_t i = 0; i < one.size(); i++) {
        CHECK(row_of(s, one[i]) == row_of(s, four[i]));
        CHECK(one[i].component == four[i].component);
        CHECK(one[i].edge_flip == four[i].edge_flip);
        CHECK(one[i].hurwitz_equality == four[i].hurwitz_equality);
        CHECK(one[i].perm_verified == four[i].perm_verified);
    }
}

}  // TEST_SUITE
