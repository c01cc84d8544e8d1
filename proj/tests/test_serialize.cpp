#include "doctest.h"

#include "atlas/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using atlas::atlas_document;
using atlas::group_table;
using atlas::surface_complex;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string golden_path(const char* name) {
    return std::string(GOLDEN_DIR) + "/" + name;
}

atlas_document census_doc(const std::string& spec) {
    auto g = group_table::parse_spec(spec);
    surface_complex s(g);
    return atlas::census_document(spec, s);
}

atlas_document conj_doc(const std::string& spec) {
    auto g = group_table::parse_spec(spec);
    surface_complex s(g);
    auto reports = atlas::conjugation_reports(s);
    return atlas::actions_document(spec, s, reports, false, 0);
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("census csv bytes are frozen") {
    auto doc = census_doc("S3");
    CHECK(atlas::render_csv(doc) ==
          "genus,faces,n,lambda1,lambda2,vertices,edges,count\n"
          "0,2,3,2,2,3,3,1\n"
          "0,3,4,2,3,5,6,1\n");
}

TEST_CASE("census csv matches the golden tables byte for byte") {
    CHECK(atlas::render_csv(census_doc("S3")) == slurp(golden_path("S3.csv")));
    CHECK(atlas::render_csv(census_doc("A4")) == slurp(golden_path("A4.csv")));
    CHECK(atlas::render_csv(census_doc("S4")) == slurp(golden_path("S4.csv")));
    CHECK(atlas::render_csv(census_doc("SL2(3)")) == slurp(golden_path("SL2_3.csv")));
}

TEST_CASE("census text renders every row and repeats exactly") {
    auto doc = census_doc("S4");
    auto text = atlas::render_text(doc);
    CHECK(text == atlas::render_text(doc));
    CHECK(text.find("census S4") != std::string::npos);
    CHECK(text.find("group order 24") != std::string::npos);
    CHECK(text.find("27 components") != std::string::npos);
    // one line per distinct type plus the banner and the header
    long long lines = 0;
    for (char ch : text)
        if (ch == '\n') lines++;
    CHECK(lines == (long long)doc.census.size() + 2);
}

TEST_CASE("documents round trip through json") {
    auto doc = census_doc("A4");
    auto text = atlas::render_json(doc);
    CHECK(text == atlas::render_json(doc));
    CHECK(text.back() == '\n');
    auto back = atlas::document_from_json(text);
    CHECK(back.version == doc.version);
    CHECK(back.spec == "A4");
    CHECK(back.kind == "census");
    CHECK(back.group_order == 12);
    CHECK(atlas::render_csv(back) == atlas::render_csv(doc));
    CHECK(atlas::render_text(back) == atlas::render_text(doc));
    CHECK(atlas::render_json(back) == text);

    auto adoc = conj_doc("D12");
    auto atext = atlas::render_json(adoc);
    auto aback = atlas::document_from_json(atext);
    CHECK(aback.kind == "actions");
    CHECK(atlas::render_json(aback) == atext);
    CHECK(atlas::render_text(aback) == atlas::render_text(adoc));

    CHECK_THROWS_AS((void)atlas::document_from_json("{"), atlas::usage_error);
    CHECK_THROWS_AS((void)atlas::document_from_json("{\"tool\":\"other\"}"),
                    atlas::usage_error);
}

TEST_CASE("golden diff pinpoints drift") {
    auto doc = census_doc("S3");
    auto golden = atlas::load_golden_csv(golden_path("S3.csv"));
    CHECK(atlas::diff_census(doc.census, golden).empty());

    auto bumped = golden;
    bumped[0].count++;
    auto d1 = atlas::diff_census(doc.census, bumped);
    REQUIRE(d1.size() == 1);
    CHECK(d1[0].find("count") != std::string::npos);

    auto missing = golden;
    missing.pop_back();
    auto d2 = atlas::diff_census(doc.census, missing);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].find("not in golden") != std::string::npos);

    auto extra = golden;
    extra.push_back({7, 7, 7, 7, 7, 7, 7, 7});
    auto d3 = atlas::diff_census(doc.census, extra);
    REQUIRE(d3.size() == 1);
    CHECK(d3[0].find("missing") != std::string::npos);
}

TEST_CASE("malformed golden files are rejected") {
    auto write_tmp = [](const char* name, const std::string& body) {
        std::string path = std::string("/tmp/") + name;
        std::ofstream out(path, std::ios::binary);
        out << body;
        return path;
    };
    CHECK_THROWS_AS((void)atlas::load_golden_csv("/tmp/does_not_exist_atlas.csv"),
                    atlas::usage_error);
    CHECK_THROWS_AS(
        (void)atlas::load_golden_csv(write_tmp("atlas_bad_header.csv", "a,b,c\n1,2,3\n")),
        atlas::usage_error);
    CHECK_THROWS_AS((void)atlas::load_golden_csv(write_tmp(
                        "atlas_bad_number.csv",
                        "genus,faces,n,lambda1,lambda2,vertices,edges,count\n0,2,x,2,2,3,3,1\n")),
                    atlas::usage_error);
    CHECK_THROWS_AS((void)atlas::load_golden_csv(write_tmp(
                        "atlas_short_row.csv",
                        "genus,faces,n,lambda1,lambda2,vertices,edges,count\n0,2,3\n")),
                    atlas::usage_error);
}

TEST_CASE("action summaries aggregate by type and structure") {
    // the two D16 squares of type {4,2} behave differently: the reflection
    // squares flip an edge (|Q| = 8) while the mixed squares do not (|Q| = 4),
    // so the census row splits into two summary rows
    auto doc = conj_doc("D16");
    long long total = 0;
    for (const auto& s : doc.actions) total += s.type.count;
    CHECK(total == doc.component_count);
    int squares = 0;
    for (const auto& s : doc.actions) {
        if (s.type.face_size != 4 || s.type.lambda1 != 2 || s.type.lambda2 != 2) continue;
        squares++;
        if (s.edge_flip) {
            CHECK(s.q_order == 8);
            CHECK(s.type.count == 2);
            CHECK(s.q_f == 4);
        } else {
            CHECK(s.q_order == 4);
            CHECK(s.type.count == 4);
            CHECK(s.q_f == 2);
        }
        CHECK(s.kernel_order == 2);
        CHECK(s.quotient_genus == 0);
    }
    CHECK(squares == 2);

    auto a5 = conj_doc("A5");
    bool dodeca = false;
    for (const auto& s : a5.actions) {
        if (s.type.face_size == 5 && s.type.lambda1 == 3) {
            dodeca = true;
            CHECK(s.q_order == 60);
            CHECK(s.type.count == 2);
            CHECK(s.edge_flip);
        }
    }
    CHECK(dodeca);
}

TEST_CASE("automorphism summaries record the acting group") {
    auto g = group_table::extraspecial_exp_p(3);
    surface_complex s(g);
    auto auts = atlas::automorphism_group(g);
    auto reports = atlas::automorphism_reports(s, auts);
    auto doc = atlas::actions_document("ES(3)", s, reports, true, (long long)auts.size());
    CHECK(doc.via_automorphisms);
    CHECK(doc.automorphism_count == 432);
    REQUIRE(doc.actions.size() == 1);
    CHECK(doc.actions[0].q_order == 18);
    CHECK(doc.actions[0].type.count == 24);
    auto text = atlas::render_text(doc);
    CHECK(text.find("automorphisms") != std::string::npos);
    auto back = atlas::document_from_json(atlas::render_json(doc));
    CHECK(back.automorphism_count == 432);
    CHECK(atlas::render_text(back) == text);
}

TEST_CASE("component export is self contained") {
    auto g = group_table::symmetric(3);
    surface_complex s(g);
    // the triangular sphere (two faces, three vertices, six triangles built
    // from the transposition pairs) sits wherever construction order put it
    int sphere = -1;
    for (int i = 0; i < s.component_count(); i++)
        if (s.components()[i].triangles == 6) sphere = i;
    REQUIRE(sphere >= 0);
    auto text = atlas::export_component_json(s, sphere);
    CHECK(text == atlas::export_component_json(s, sphere));
    atlas::verify_export_document(text);

    auto doc = nlohmann::ordered_json::parse(text);
    CHECK(doc["triangles"].size() == 6);
    CHECK(doc["faces"].size() == 2);
    CHECK(doc["vertices"].size() == 3);
    CHECK(doc["rim"].size() == 6);
    CHECK(doc["spoke_x"].size() == 6);
    CHECK(doc["spoke_y"].size() == 6);
    CHECK(doc["invariants"]["genus"] == 0);
    CHECK(doc["invariants"]["edges"] == 3);
    // names travel with the triangles so the document stands alone
    CHECK(doc["triangles"][0].contains("x_name"));

    // tampering with an adjacency is caught by the independent re-check
    auto bad = doc;
    bad["rim"][0] = bad["rim"][1];
    CHECK_THROWS_AS(atlas::verify_export_document(bad.dump()), atlas::theorem_error);
    auto bad2 = doc;
    bad2["invariants"]["genus"] = 5;
    CHECK_THROWS_AS(atlas::verify_export_document(bad2.dump()), atlas::theorem_error);
    CHECK_THROWS_AS(atlas::verify_export_document("not json"), atlas::usage_error);

    CHECK_THROWS_AS((void)atlas::export_component_json(s, 99), atlas::usage_error);

    // every component of a nontrivial group round trips
    auto a4 = group_table::alternating(4);
    surface_complex sa4(a4);
    for (int i = 0; i < sa4.component_count(); i++)
        atlas::verify_export_document(atlas::export_component_json(sa4, i));
}

TEST_CASE("cover reports render deterministically") {
    auto g = group_table::sl2(3);
    atlas::cover_analysis cov(g, g.center(), true);
    auto text = atlas::render_cover_text(cov);
    CHECK(text == atlas::render_cover_text(cov));
    CHECK(text.find("kernel order 2") != std::string::npos);
    CHECK(text.find("monodromy") != std::string::npos);
    CHECK(text.find("central") != std::string::npos);

    auto jtext = atlas::render_cover_json(cov);
    CHECK(jtext == atlas::render_cover_json(cov));
    auto doc = nlohmann::ordered_json::parse(jtext);
    CHECK(doc["bases"].size() == 5);  // the quotient is the tetrahedral group
    CHECK(doc["kernel_order"] == 2);
    CHECK(doc["central"] == true);
    long long lifted = 0;
    for (const auto& b : doc["bases"])
        for (const auto& c : b["classes"]) lifted += (long long)c["multiplicity"];
    CHECK(lifted == 4 * 5);  // kernel^2 lifted pairs per base component
}

TEST_CASE("cache stores and recalls documents") {
    std::string dir = "/tmp/atlas_cache_test";
    std::remove((dir + "/index").c_str());
    setenv("ATLAS_CACHE_DIR", dir.c_str(), 1);
    CHECK(atlas::cache_dir() == dir);

    auto k1 = atlas::cache_key("census", "S3");
    auto k2 = atlas::cache_key("census", "S4");
    auto k3 = atlas::cache_key("actions-conjugation", "S3");
    CHECK(k1 != k2);
    CHECK(k1 != k3);
    CHECK(k1 == atlas::cache_key("census", "S3"));

    auto doc = census_doc("S3");
    auto payload = atlas::render_json(doc);
    CHECK(!atlas::cache_load(k1 + "fresh").has_value());
    atlas::cache_store(k1, payload);
    auto got = atlas::cache_load(k1);
    REQUIRE(got.has_value());
    CHECK(*got == payload);
    auto back = atlas::document_from_json(*got);
    CHECK(atlas::render_csv(back) == atlas::render_csv(doc));
    unsetenv("ATLAS_CACHE_DIR");
}

}  // TEST_SUITE
