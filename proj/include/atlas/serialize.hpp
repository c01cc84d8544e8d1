#pragma once

#include "atlas/actions.hpp"
#include "atlas/cover.hpp"
#include "atlas/surface.hpp"

#include <optional>
#include <string>
#include <vector>

namespace atlas {

inline constexpr const char* atlas_version = "1.0.0";

// One aggregated row of an action run: every component sharing the same
// combinatorial type and the same symmetry structure. A census type can
// split into several rows when same-looking components carry different
// symmetry (dihedral order 16 is the smallest example).
struct action_summary {
    census_row type;  // count = number of components aggregated into this row
    long long stabilizer_order = 0;
    long long kernel_order = 0;
    long long q_order = 0;
    int vertex_classes = 0;
    bool edge_flip = false;
    long long q_x = 0, q_y = 0, q_e = 0, q_f = 0;
    long long quotient_genus = 0;
    bool hurwitz_equality = false;
};

// Self-describing result of a census or action run. Renderable as text, CSV,
// or JSON; the JSON form round trips through document_from_json, which is
// what the on-disk cache stores. The seconds field is wall time for the
// producing run and is never serialized, keeping every output byte
// deterministic for fixed inputs.
struct atlas_document {
    std::string version;  // tool version that produced the document
    std::string kind;     // "census" or "actions"
    std::string spec;
    bool via_automorphisms = false;
    long long automorphism_count = 0;  // only meaningful via automorphisms
    long long group_order = 0;
    long long triangle_count = 0;
    long long component_count = 0;
    std::vector<census_row> census;        // sorted canonically
    std::vector<action_summary> actions;   // empty for kind "census"
    double seconds = 0;
};

atlas_document census_document(const std::string& spec, const surface_complex& s);

// Aggregates per-component reports (one per component, in component order)
// into summary rows. aut_count is |Aut(G)| when via_aut is set.
atlas_document actions_document(const std::string& spec, const surface_complex& s,
                                const std::vector<action_report>& reports, bool via_aut,
                                long long aut_count);

std::string render_text(const atlas_document& d);
std::string render_csv(const atlas_document& d);
std::string render_json(const atlas_document& d);
atlas_document document_from_json(const std::string& text);  // usage_error if malformed

// Golden census tables: CSV with the fixed header
// genus,faces,n,lambda1,lambda2,vertices,edges,count
std::vector<census_row> load_golden_csv(const std::string& path);
// Human-readable discrepancies, empty exactly when the two agree row for row.
std::vector<std::string> diff_census(const std::vector<census_row>& computed,
                                     const std::vector<census_row>& golden);

// Branched cover reports, one block per base component with its lift classes.
std::string render_cover_text(const cover_analysis& cov);
std::string render_cover_json(const cover_analysis& cov);

// A self-contained JSON description of one component: triangles with element
// names, the three adjacency maps, face and vertex orbits, invariants.
std::string export_component_json(const surface_complex& s, int component,
                                  const std::string& spec = "");
// Re-checks an exported document using only its own data: adjacency
// involutions, orbit closure, counts, Euler characteristic. Throws
// usage_error for malformed documents and theorem_error for inconsistent
// ones.
void verify_export_document(const std::string& json_text);

// Result cache. Directory: ATLAS_CACHE_DIR, else XDG_CACHE_HOME/atlas, else
// ~/.cache/atlas. Keys are content hashes of (version, kind, spec); values
// are whole documents. Store is atomic and best effort; load returns nullopt
// on any miss.
std::string cache_dir();
std::string cache_key(const std::string& kind, const std::string& spec);
std::optional<std::string> cache_load(const std::string& key);
void cache_store(const std::string& key, const std::string& contents);

}  // namespace atlas
