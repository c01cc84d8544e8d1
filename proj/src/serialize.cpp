#include "atlas/serialize.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <unistd.h>

#include "json.hpp"

namespace atlas {

namespace {

using ojson = nlohmann::ordered_json;

std::string schlafli(const census_row& c) {
    std::string s = "{" + std::to_string(c.face_size) + "," + std::to_string(c.lambda1);
    if (c.lambda2 != c.lambda1) s += "-" + std::to_string(c.lambda2);
    return s + "}";
}

std::string schlafli(const component_info& c) {
    census_row r;
    r.face_size = c.face_size;
    r.lambda1 = c.lambda1;
    r.lambda2 = c.lambda2;
    return schlafli(r);
}

// rows[0] is the header; every column is padded to its widest cell and
// right-aligned, except a left-aligned first column when left_first is set
std::string format_table(const std::vector<std::vector<std::string>>& rows,
                         bool left_first) {
    std::vector<size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (size_t i = 0; i < row.size(); i++) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); i++) {
            if (i) out += "  ";
            std::string pad(width[i] - row[i].size(), ' ');
            if (i == 0 && left_first)
                out += row[i] + pad;
            else
                out += pad + row[i];
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

std::string census_csv_row(const census_row& r) {
    std::ostringstream out;
    out << r.genus << ',' << r.faces << ',' << r.face_size << ',' << r.lambda1 << ','
        << r.lambda2 << ',' << r.vertices << ',' << r.edges << ',' << r.count;
    return out.str();
}

constexpr const char* census_csv_header = "genus,faces,n,lambda1,lambda2,vertices,edges,count";

long long parse_ll(const std::string& tok) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (tok.empty() || errno != 0 || end != tok.c_str() + tok.size())
        throw usage_error("bad number in csv: '" + tok + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

ojson census_row_json(const census_row& r) {
    ojson j;
    j["genus"] = r.genus;
    j["faces"] = r.faces;
    j["n"] = r.face_size;
    j["lambda1"] = r.lambda1;
    j["lambda2"] = r.lambda2;
    j["vertices"] = r.vertices;
    j["edges"] = r.edges;
    j["count"] = r.count;
    return j;
}

census_row census_row_from_json(const ojson& j) {
    census_row r;
    r.genus = j.at("genus").get<int>();
    r.faces = j.at("faces").get<long long>();
    r.face_size = j.at("n").get<int>();
    r.lambda1 = j.at("lambda1").get<int>();
    r.lambda2 = j.at("lambda2").get<int>();
    r.vertices = j.at("vertices").get<long long>();
    r.edges = j.at("edges").get<long long>();
    r.count = j.at("count").get<long long>();
    return r;
}

ojson type_json(const component_info& c) {
    ojson j;
    j["genus"] = c.genus;
    j["faces"] = c.faces;
    j["n"] = c.face_size;
    j["lambda1"] = c.lambda1;
    j["lambda2"] = c.lambda2;
    j["vertices"] = c.vertices;
    j["edges"] = c.edges;
    return j;
}

}  // namespace

atlas_document census_document(const std::string& spec, const surface_complex& s) {
    atlas_document d;
    d.version = atlas_version;
    d.kind = "census";
    d.spec = spec;
    d.group_order = s.group().order();
    d.triangle_count = s.triangle_count();
    d.component_count = s.component_count();
    d.census = s.census();
    return d;
}

atlas_document actions_document(const std::string& spec, const surface_complex& s,
                                const std::vector<action_report>& reports, bool via_aut,
                                long long aut_count) {
    if ((long long)reports.size() != s.component_count())
        throw usage_error("need exactly one report per component");
    atlas_document d = census_document(spec, s);
    d.kind = "actions";
    d.via_automorphisms = via_aut;
    d.automorphism_count = via_aut ? aut_count : 0;
    using key_t = std::tuple<int, long long, int, int, int, long long, long long, long long,
                             long long, long long, int, bool, long long, long long, long long,
                             long long, long long, bool>;
    std::map<key_t, long long> agg;
    for (const auto& r : reports) {
        const auto& c = s.components()[r.component];
        agg[key_t{c.genus, c.faces, c.face_size, c.lambda1, c.lambda2, c.vertices, c.edges,
                  r.stabilizer_order, r.kernel_order, r.q_order, r.vertex_orbits, r.edge_flip,
                  r.q_x, r.q_y, r.q_e, r.q_f, r.quotient_genus, r.hurwitz_equality}]++;
    }
    for (const auto& [k, cnt] : agg) {
        action_summary a;
        a.type.genus = std::get<0>(k);
        a.type.faces = std::get<1>(k);
        a.type.face_size = std::get<2>(k);
        a.type.lambda1 = std::get<3>(k);
        a.type.lambda2 = std::get<4>(k);
        a.type.vertices = std::get<5>(k);
        a.type.edges = std::get<6>(k);
        a.type.count = cnt;
        a.stabilizer_order = std::get<7>(k);
        a.kernel_order = std::get<8>(k);
        a.q_order = std::get<9>(k);
        a.vertex_classes = std::get<10>(k);
        a.edge_flip = std::get<11>(k);
        a.q_x = std::get<12>(k);
        a.q_y = std::get<13>(k);
        a.q_e = std::get<14>(k);
        a.q_f = std::get<15>(k);
        a.quotient_genus = std::get<16>(k);
        a.hurwitz_equality = std::get<17>(k);
        d.actions.push_back(a);
    }
    return d;
}

std::string render_text(const atlas_document& d) {
    std::ostringstream out;
    if (d.kind == "census") {
        out << "census " << d.spec << ": group order " << d.group_order << ", "
            << d.triangle_count << " triangles, " << d.component_count << " components\n";
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"genus", "faces", "n", "lambda1", "lambda2", "vertices", "edges",
                        "count"});
        for (const auto& r : d.census)
            rows.push_back({std::to_string(r.genus), std::to_string(r.faces),
                            std::to_string(r.face_size), std::to_string(r.lambda1),
                            std::to_string(r.lambda2), std::to_string(r.vertices),
                            std::to_string(r.edges), std::to_string(r.count)});
        out << format_table(rows, false);
        return out.str();
    }
    out << "actions " << d.spec << " (";
    if (d.via_automorphisms)
        out << "automorphisms " << d.automorphism_count;
    else
        out << "conjugation";
    out << "): group order " << d.group_order << ", " << d.triangle_count << " triangles, "
        << d.component_count << " components\n";
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"type", "genus", "faces", "vertices", "edges", "comps", "|Q|", "classes",
                    "flip", "q_x", "q_y", "q_e", "q_f", "kernel", "q_genus", "hurwitz"});
    for (const auto& a : d.actions) {
        const char* hur = a.type.genus < 2 ? "-" : (a.hurwitz_equality ? "equality" : "ok");
        rows.push_back({schlafli(a.type), std::to_string(a.type.genus),
                        std::to_string(a.type.faces), std::to_string(a.type.vertices),
                        std::to_string(a.type.edges), std::to_string(a.type.count),
                        std::to_string(a.q_order), std::to_string(a.vertex_classes),
                        a.edge_flip ? "yes" : "no", std::to_string(a.q_x),
                        std::to_string(a.q_y), std::to_string(a.q_e), std::to_string(a.q_f),
                        std::to_string(a.kernel_order), std::to_string(a.quotient_genus),
                        hur});
    }
    out << format_table(rows, true);
    return out.str();
}

std::string render_csv(const atlas_document& d) {
    std::ostringstream out;
    if (d.kind == "census") {
        out << census_csv_header << '\n';
        for (const auto& r : d.census) out << census_csv_row(r) << '\n';
        return out.str();
    }
    out << "genus,faces,n,lambda1,lambda2,vertices,edges,components,stabilizer,kernel,q,"
           "vertex_classes,edge_flip,q_x,q_y,q_e,q_f,quotient_genus,hurwitz_equality\n";
    for (const auto& a : d.actions) {
        out << a.type.genus << ',' << a.type.faces << ',' << a.type.face_size << ','
            << a.type.lambda1 << ',' << a.type.lambda2 << ',' << a.type.vertices << ','
            << a.type.edges << ',' << a.type.count << ',' << a.stabilizer_order << ','
            << a.kernel_order << ',' << a.q_order << ',' << a.vertex_classes << ','
            << (a.edge_flip ? 1 : 0) << ',' << a.q_x << ',' << a.q_y << ',' << a.q_e << ','
            << a.q_f << ',' << a.quotient_genus << ',' << (a.hurwitz_equality ? 1 : 0)
            << '\n';
    }
    return out.str();
}

std::string render_json(const atlas_document& d) {
    ojson j;
    j["tool"] = "atlas";
    j["version"] = d.version;
    j["kind"] = d.kind;
    j["spec"] = d.spec;
    j["group_order"] = d.group_order;
    j["triangles"] = d.triangle_count;
    j["components"] = d.component_count;
    if (d.kind == "actions") {
        j["action"] = d.via_automorphisms ? "automorphisms" : "conjugation";
        if (d.via_automorphisms) j["automorphism_count"] = d.automorphism_count;
    }
    j["census"] = ojson::array();
    for (const auto& r : d.census) j["census"].push_back(census_row_json(r));
    if (d.kind == "actions") {
        j["summaries"] = ojson::array();
        for (const auto& a : d.actions) {
            ojson s = census_row_json(a.type);
            s.erase("count");
            s["components"] = a.type.count;
            s["stabilizer"] = a.stabilizer_order;
            s["kernel"] = a.kernel_order;
            s["q"] = a.q_order;
            s["vertex_classes"] = a.vertex_classes;
            s["edge_flip"] = a.edge_flip;
            s["q_x"] = a.q_x;
            s["q_y"] = a.q_y;
            s["q_e"] = a.q_e;
            s["q_f"] = a.q_f;
            s["quotient_genus"] = a.quotient_genus;
            s["hurwitz_equality"] = a.hurwitz_equality;
            j["summaries"].push_back(s);
        }
    }
    return j.dump(2) + "\n";
}

atlas_document document_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception&) {
        throw usage_error("malformed document json");
    }
    try {
        if (!j.is_object() || j.value("tool", std::string()) != "atlas")
            throw usage_error("not an atlas document");
        atlas_document d;
        d.version = j.at("version").get<std::string>();
        d.kind = j.at("kind").get<std::string>();
        if (d.kind != "census" && d.kind != "actions")
            throw usage_error("unknown document kind '" + d.kind + "'");
        d.spec = j.at("spec").get<std::string>();
        d.group_order = j.at("group_order").get<long long>();
        d.triangle_count = j.at("triangles").get<long long>();
        d.component_count = j.at("components").get<long long>();
        for (const auto& r : j.at("census")) d.census.push_back(census_row_from_json(r));
        long long total = 0;
        for (const auto& r : d.census) total += r.count;
        if (total != d.component_count)
            throw usage_error("census counts do not sum to the component count");
        if (d.kind == "actions") {
            d.via_automorphisms = j.at("action").get<std::string>() == "automorphisms";
            if (d.via_automorphisms)
                d.automorphism_count = j.at("automorphism_count").get<long long>();
            for (const auto& sj : j.at("summaries")) {
                action_summary a;
                a.type.genus = sj.at("genus").get<int>();
                a.type.faces = sj.at("faces").get<long long>();
                a.type.face_size = sj.at("n").get<int>();
                a.type.lambda1 = sj.at("lambda1").get<int>();
                a.type.lambda2 = sj.at("lambda2").get<int>();
                a.type.vertices = sj.at("vertices").get<long long>();
                a.type.edges = sj.at("edges").get<long long>();
                a.type.count = sj.at("components").get<long long>();
                a.stabilizer_order = sj.at("stabilizer").get<long long>();
                a.kernel_order = sj.at("kernel").get<long long>();
                a.q_order = sj.at("q").get<long long>();
                a.vertex_classes = sj.at("vertex_classes").get<int>();
                a.edge_flip = sj.at("edge_flip").get<bool>();
                a.q_x = sj.at("q_x").get<long long>();
                a.q_y = sj.at("q_y").get<long long>();
                a.q_e = sj.at("q_e").get<long long>();
                a.q_f = sj.at("q_f").get<long long>();
                a.quotient_genus = sj.at("quotient_genus").get<long long>();
                a.hurwitz_equality = sj.at("hurwitz_equality").get<bool>();
                d.actions.push_back(a);
            }
            long long summed = 0;
            for (const auto& a : d.actions) summed += a.type.count;
            if (summed != d.component_count)
                throw usage_error("summary counts do not sum to the component count");
        }
        return d;
    } catch (const nlohmann::json::exception&) {
        throw usage_error("malformed document json");
    }
}

std::vector<census_row> load_golden_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw usage_error("cannot open golden file " + path);
    std::string line;
    if (!std::getline(in, line)) throw usage_error("empty golden file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != census_csv_header)
        throw usage_error("unexpected golden header: '" + line + "'");
    std::vector<census_row> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 8) throw usage_error("bad golden row: '" + line + "'");
        census_row r;
        r.genus = (int)parse_ll(f[0]);
        r.faces = parse_ll(f[1]);
        r.face_size = (int)parse_ll(f[2]);
        r.lambda1 = (int)parse_ll(f[3]);
        r.lambda2 = (int)parse_ll(f[4]);
        r.vertices = parse_ll(f[5]);
        r.edges = parse_ll(f[6]);
        r.count = parse_ll(f[7]);
        rows.push_back(r);
    }
    return rows;
}

std::vector<std::string> diff_census(const std::vector<census_row>& computed,
                                     const std::vector<census_row>& golden) {
    using key_t = std::tuple<int, long long, int, int, int, long long, long long>;
    auto key = [](const census_row& r) {
        return key_t{r.genus, r.faces, r.face_size, r.lambda1, r.lambda2, r.vertices,
                     r.edges};
    };
    std::map<key_t, long long> a, b;
    for (const auto& r : computed) a[key(r)] += r.count;
    for (const auto& r : golden) b[key(r)] += r.count;
    auto describe = [](const key_t& k) {
        std::ostringstream out;
        out << "genus=" << std::get<0>(k) << ",faces=" << std::get<1>(k)
            << ",n=" << std::get<2>(k) << ",lambda1=" << std::get<3>(k)
            << ",lambda2=" << std::get<4>(k) << ",vertices=" << std::get<5>(k)
            << ",edges=" << std::get<6>(k);
        return out.str();
    };
    std::vector<std::string> out;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            out.push_back("not in golden: " + describe(ia->first) + ",count=" +
                          std::to_string(ia->second));
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            out.push_back("missing from computed: " + describe(ib->first) + ",count=" +
                          std::to_string(ib->second));
            ++ib;
        } else {
            if (ia->second != ib->second)
                out.push_back("count mismatch at " + describe(ia->first) + ": computed " +
                              std::to_string(ia->second) + ", golden " +
                              std::to_string(ib->second));
            ++ia;
            ++ib;
        }
    }
    return out;
}

std::string render_cover_text(const cover_analysis& cov) {
    std::ostringstream out;
    const auto& gamma = cov.cover().group();
    out << "cover: group order " << gamma.order() << ", quotient order "
        << cov.quotient_group().order() << ", kernel order " << cov.kernel().size()
        << ", central: " << (cov.central() ? "yes" : "no") << "\n";
    out << "kernel:";
    for (int k : cov.kernel()) out << ' ' << gamma.name(k);
    out << "\n";
    for (const auto& b : cov.reports()) {
        const auto& base = cov.base().components()[b.base_component];
        out << "base " << b.base_component << ": " << schlafli(base) << " genus "
            << base.genus << " (F=" << base.faces << ", V=" << base.vertices
            << ", E=" << base.edges << ")";
        if (b.class_vertices_x > 0)
            out << ", vertex classes " << b.class_vertices_x << "+" << b.class_vertices_y;
        long long pairs = 0;
        for (const auto& cl : b.classes) pairs += cl.multiplicity;
        out << ", lifted pairs " << pairs << "\n";
        for (const auto& cl : b.classes) {
            const auto& up = cov.cover().components()[cl.cover_component];
            out << "  m=" << cl.multiplicity << "  (l,lx,ly)=(" << cl.ell << ","
                << cl.ell_x << "," << cl.ell_y << ")";
            if (cov.central()) out << "  monodromy " << cl.monodromy_order;
            out << "  -> component " << cl.cover_component << ": " << schlafli(up)
                << " genus " << up.genus << "\n";
        }
        if (!b.groupings.empty()) {
            out << "  groupings:";
            for (const auto& grp : b.groupings) {
                out << " {";
                for (size_t i = 0; i < grp.size(); i++) out << (i ? " " : "") << grp[i];
                out << "}";
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string render_cover_json(const cover_analysis& cov) {
    const auto& gamma = cov.cover().group();
    ojson j;
    j["tool"] = "atlas";
    j["version"] = atlas_version;
    j["kind"] = "cover";
    j["group_order"] = gamma.order();
    j["quotient_order"] = cov.quotient_group().order();
    j["kernel_order"] = (long long)cov.kernel().size();
    j["central"] = cov.central();
    j["kernel"] = ojson::array();
    for (int k : cov.kernel()) j["kernel"].push_back(gamma.name(k));
    j["bases"] = ojson::array();
    for (const auto& b : cov.reports()) {
        ojson bj;
        bj["base_component"] = b.base_component;
        bj["type"] = type_json(cov.base().components()[b.base_component]);
        bj["x_hat"] = b.x_hat;
        bj["y_hat"] = b.y_hat;
        bj["class_vertices_x"] = b.class_vertices_x;
        bj["class_vertices_y"] = b.class_vertices_y;
        bj["classes"] = ojson::array();
        for (const auto& cl : b.classes) {
            ojson cj;
            cj["cover_component"] = cl.cover_component;
            cj["type"] = type_json(cov.cover().components()[cl.cover_component]);
            cj["multiplicity"] = cl.multiplicity;
            cj["l"] = cl.ell;
            cj["l_x"] = cl.ell_x;
            cj["l_y"] = cl.ell_y;
            if (cov.central()) cj["monodromy_order"] = cl.monodromy_order;
            bj["classes"].push_back(cj);
        }
        bj["groupings"] = b.groupings;
        j["bases"].push_back(bj);
    }
    return j.dump(2) + "\n";
}

std::string export_component_json(const surface_complex& s, int component,
                                  const std::string& spec) {
    if (component < 0 || component >= s.component_count())
        throw usage_error("component index out of range");
    const group_table& g = s.group();
    const component_info& c = s.components()[component];

    std::vector<long long> tris;
    tris.reserve(c.triangles);
    std::unordered_set<long long> seen{c.least_triangle};
    std::vector<long long> stack{c.least_triangle};
    while (!stack.empty()) {
        long long t = stack.back();
        stack.pop_back();
        tris.push_back(t);
        for (long long u : {s.rim(t), s.spoke_y(t)})
            if (seen.insert(u).second) stack.push_back(u);
    }
    std::sort(tris.begin(), tris.end());

    ojson j;
    j["tool"] = "atlas";
    j["version"] = atlas_version;
    j["kind"] = "component";
    if (!spec.empty()) j["spec"] = spec;
    j["component"] = component;
    j["group_order"] = g.order();
    ojson inv;
    inv["genus"] = c.genus;
    inv["faces"] = c.faces;
    inv["n"] = c.face_size;
    inv["lambda1"] = c.lambda1;
    inv["lambda2"] = c.lambda2;
    inv["vertices"] = c.vertices;
    inv["edges"] = c.edges;
    inv["triangles"] = c.triangles;
    inv["vertex_classes"] = c.vertex_orbits;
    inv["ref_x"] = c.ref_x;
    inv["ref_y"] = c.ref_y;
    j["invariants"] = inv;

    j["triangles"] = ojson::array();
    j["rim"] = ojson::array();
    j["spoke_x"] = ojson::array();
    j["spoke_y"] = ojson::array();
    for (long long t : tris) {
        auto [x, y] = s.tri_pair(t);
        ojson tj;
        tj["id"] = t;
        tj["x"] = x;
        tj["y"] = y;
        tj["x_name"] = g.name(x);
        tj["y_name"] = g.name(y);
        j["triangles"].push_back(tj);
        j["rim"].push_back(s.rim(t));
        j["spoke_x"].push_back(s.spoke_x(t));
        j["spoke_y"].push_back(s.spoke_y(t));
    }

    j["faces"] = ojson::array();
    {
        std::unordered_set<long long> done;
        std::vector<std::vector<long long>> faces;
        for (long long t : tris) {
            if (done.count(t)) continue;
            std::vector<long long> orbit{t};
            done.insert(t);
            for (long long u = s.spoke_y(t); u != t; u = s.spoke_y(u)) {
                orbit.push_back(u);
                done.insert(u);
            }
            // rotate so the least triangle leads
            auto least = std::min_element(orbit.begin(), orbit.end());
            std::rotate(orbit.begin(), least, orbit.end());
            faces.push_back(std::move(orbit));
        }
        std::sort(faces.begin(), faces.end());
        for (auto& f : faces) j["faces"].push_back(f);
    }

    j["vertices"] = ojson::array();
    {
        std::unordered_set<long long> done;
        std::vector<std::vector<long long>> verts;
        for (long long t : tris) {
            for (int slot = 0; slot < 2; slot++) {
                long long corner = 2 * t + slot;
                if (done.count(corner)) continue;
                auto orbit = s.vertex_corner_orbit(corner);
                for (long long cc : orbit) done.insert(cc);
                auto least = std::min_element(orbit.begin(), orbit.end());
                std::rotate(orbit.begin(), least, orbit.end());
                verts.push_back(std::move(orbit));
            }
        }
        std::sort(verts.begin(), verts.end());
        for (auto& v : verts) j["vertices"].push_back(v);
    }

    return j.dump(2) + "\n";
}

void verify_export_document(const std::string& json_text) {
    ojson j;
    try {
        j = ojson::parse(json_text);
    } catch (const std::exception&) {
        throw usage_error("malformed component json");
    }

    long long order = 0, genus = 0, nfaces = 0, n = 0, l1 = 0, l2 = 0, nvert = 0,
              nedge = 0, ntris = 0, refx = 0, refy = 0;
    std::vector<long long> ids;
    std::unordered_map<long long, long long> rim, sx, sy;
    std::vector<std::vector<long long>> faces, verts;
    try {
        if (!j.is_object() || j.value("tool", std::string()) != "atlas" ||
            j.value("kind", std::string()) != "component")
            throw usage_error("not a component document");
        order = j.at("group_order").get<long long>();
        if (order <= 0) throw usage_error("nonpositive group order");
        const auto& inv = j.at("invariants");
        genus = inv.at("genus").get<long long>();
        nfaces = inv.at("faces").get<long long>();
        n = inv.at("n").get<long long>();
        l1 = inv.at("lambda1").get<long long>();
        l2 = inv.at("lambda2").get<long long>();
        nvert = inv.at("vertices").get<long long>();
        nedge = inv.at("edges").get<long long>();
        ntris = inv.at("triangles").get<long long>();
        refx = inv.at("ref_x").get<long long>();
        refy = inv.at("ref_y").get<long long>();
        const auto& tj = j.at("triangles");
        const auto& rj = j.at("rim");
        const auto& xj = j.at("spoke_x");
        const auto& yj = j.at("spoke_y");
        if (rj.size() != tj.size() || xj.size() != tj.size() || yj.size() != tj.size())
            throw usage_error("adjacency arrays do not match the triangle list");
        for (size_t i = 0; i < tj.size(); i++) {
            long long id = tj[i].at("id").get<long long>();
            long long x = tj[i].at("x").get<long long>();
            long long y = tj[i].at("y").get<long long>();
            if (id != x * order + y) throw usage_error("triangle id does not encode its pair");
            if (!ids.empty() && id <= ids.back())
                throw usage_error("triangle list is not sorted");
            ids.push_back(id);
            rim[id] = rj[i].get<long long>();
            sx[id] = xj[i].get<long long>();
            sy[id] = yj[i].get<long long>();
        }
        for (const auto& f : j.at("faces")) faces.push_back(f.get<std::vector<long long>>());
        for (const auto& v : j.at("vertices"))
            verts.push_back(v.get<std::vector<long long>>());
    } catch (const nlohmann::json::exception&) {
        throw usage_error("malformed component json");
    }

    check((long long)ids.size() == ntris, "triangle count disagrees with invariants");
    check(ntris == 2 * nedge, "edges are not half the triangles");
    check(!ids.empty(), "empty component document");
    {
        auto [rx, ry] = std::pair<long long, long long>{ids[0] / order, ids[0] % order};
        check(rx == refx && ry == refy, "reference pair is not the least triangle");
    }

    std::unordered_set<long long> idset(ids.begin(), ids.end());
    for (long long t : ids) {
        for (const auto* mp : {&rim, &sx, &sy})
            check(idset.count(mp->at(t)) > 0, "adjacency leaves the component");
        check(rim.at(t) != t, "rim fixes a triangle");
        check(rim.at(rim.at(t)) == t, "rim is not an involution");
        check(sx.at(sy.at(t)) == t && sy.at(sx.at(t)) == t,
              "spokes are not inverse bijections");
    }

    // faces are exactly the spoke cycles, listed least-first in walk order
    std::unordered_set<long long> covered;
    check((long long)faces.size() == nfaces, "face count disagrees with invariants");
    for (const auto& f : faces) {
        check((long long)f.size() == n, "face size disagrees with invariants");
        check(f[0] == *std::min_element(f.begin(), f.end()), "face does not lead with its least triangle");
        for (size_t i = 0; i < f.size(); i++) {
            check(idset.count(f[i]) > 0, "face lists a foreign triangle");
            check(covered.insert(f[i]).second, "faces overlap");
            check(sy.at(f[i]) == f[(i + 1) % f.size()], "face is not a spoke cycle");
        }
    }
    check((long long)covered.size() == ntris, "faces do not cover the triangles");
    check(2 * nedge == n * nfaces, "edge and face counts disagree");

    // vertices are the orbits of the alternating corner walk, derived here
    // from the adjacency maps alone
    auto corner_rim = [&](long long cc) {
        long long t = cc >> 1, slot = cc & 1;
        return 2 * rim.at(t) + (1 - slot);
    };
    auto corner_spoke = [&](long long cc) {
        long long t = cc >> 1, slot = cc & 1;
        if (slot) return 2 * sy.at(t);
        return 2 * sx.at(t) + 1;
    };
    check((long long)verts.size() == nvert, "vertex count disagrees with invariants");
    std::unordered_set<long long> corner_covered;
    long long valency_sum = 0, seen_l1 = 0, seen_l2 = 0;
    for (const auto& v : verts) {
        check(!v.empty() && v.size() % 2 == 0, "vertex orbit has odd length");
        check(v[0] == *std::min_element(v.begin(), v.end()),
              "vertex does not lead with its least corner");
        std::unordered_set<long long> vset(v.begin(), v.end());
        check(vset.size() == v.size(), "vertex orbit repeats a corner");
        for (long long cc : v) {
            check(idset.count(cc >> 1) > 0, "vertex lists a foreign corner");
            check(corner_covered.insert(cc).second, "vertices overlap");
        }
        // connected closure under the two corner moves
        std::vector<long long> queue{v[0]};
        std::unordered_set<long long> reach{v[0]};
        while (!queue.empty()) {
            long long cc = queue.back();
            queue.pop_back();
            for (long long next : {corner_rim(cc), corner_spoke(cc)}) {
                check(vset.count(next) > 0, "corner walk leaves the vertex orbit");
                if (reach.insert(next).second) queue.push_back(next);
            }
        }
        check(reach.size() == v.size(), "vertex orbit is not a single walk");
        long long val = (long long)v.size() / 2;
        check(val == l1 || val == l2, "vertex valency disagrees with invariants");
        if (val == l1) seen_l1++;
        if (val == l2) seen_l2++;
        valency_sum += val;
    }
    check((long long)corner_covered.size() == 2 * ntris, "vertices do not cover the corners");
    check(valency_sum == 2 * nedge, "valencies do not sum to twice the edges");
    check(seen_l1 > 0 && seen_l2 > 0, "a declared valency is never realized");

    // single connected component under rim and spoke moves
    {
        std::vector<long long> queue{ids[0]};
        std::unordered_set<long long> reach{ids[0]};
        while (!queue.empty()) {
            long long t = queue.back();
            queue.pop_back();
            for (long long u : {rim.at(t), sy.at(t)})
                if (reach.insert(u).second) queue.push_back(u);
        }
        check((long long)reach.size() == ntris, "document describes more than one component");
    }

    check(nvert - nedge + nfaces == 2 - 2 * genus, "Euler characteristic disagrees with the genus");
}

std::string cache_dir() {
    if (const char* d = std::getenv("ATLAS_CACHE_DIR")) return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME")) return std::string(x) + "/atlas";
    if (const char* h = std::getenv("HOME")) return std::string(h) + "/.cache/atlas";
    return "/tmp/atlas-cache";
}

std::string cache_key(const std::string& kind, const std::string& spec) {
    unsigned long long h = 1469598103934665603ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        h ^= 0x1f;
        h *= 1099511628211ULL;
    };
    mix(atlas_version);
    mix(kind);
    mix(spec);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

std::optional<std::string> cache_load(const std::string& key) {
    std::ifstream in(cache_dir() + "/" + key + ".json", std::ios::binary);
    if (!in.good()) return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    if (!in.good() && !in.eof()) return std::nullopt;
    return out.str();
}

void cache_store(const std::string& key, const std::string& contents) {
    try {
        std::filesystem::path dir(cache_dir());
        std::filesystem::create_directories(dir);
        std::filesystem::path tmp = dir / (key + ".tmp" + std::to_string(getpid()));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << contents;
            if (!out.good()) {
                std::filesystem::remove(tmp);
                return;
            }
        }
        std::filesystem::rename(tmp, dir / (key + ".json"));
    } catch (const std::exception&) {
        // the cache is an optimization; failing to write one is not an error
    }
}

}  // namespace atlas
