// atlas: build the canonical surface complex of a finite nonabelian group and
// report its census, symmetry, and covering structure.
//
// Exit codes: 0 success, 1 violated invariant or golden mismatch, 2 usage or
// parse problem, 3 resource cap exceeded.

#include "atlas/serialize.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

namespace {

using namespace atlas;

void emit(const std::string& out_path, const std::string& bytes) {
    if (out_path.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f.good()) throw usage_error("cannot open output file " + out_path);
    f << bytes;
    if (!f.good()) throw usage_error("cannot write output file " + out_path);
}

std::string render(const atlas_document& doc, const std::string& format) {
    if (format == "csv") return render_csv(doc);
    if (format == "json") return render_json(doc);
    return render_text(doc);
}

// Serve a census or actions document from the cache when possible, else
// compute it and store the JSON form. Rendering always starts from the
// document, so cached and fresh runs emit identical bytes. Timing goes to
// stderr only; stdout stays deterministic.
atlas_document obtain_document(const std::string& kind, const std::string& spec,
                               bool no_cache, bool timing,
                               const std::function<atlas_document()>& make) {
    const std::string key = cache_key(kind, spec);
    if (!no_cache) {
        if (auto hit = cache_load(key)) {
            try {
                auto doc = document_from_json(*hit);
                if (timing)
                    std::cerr << "timing: " << kind << " " << spec << " served from cache\n";
                return doc;
            } catch (const usage_error&) {
                // stale or corrupt entry: recompute and overwrite below
            }
        }
    }
    auto t0 = std::chrono::steady_clock::now();
    auto doc = make();
    doc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (timing)
        std::cerr << "timing: " << kind << " " << spec << " computed in " << doc.seconds
                  << "s\n";
    if (!no_cache) cache_store(key, render_json(doc));
    return doc;
}

void warn_if_empty(const atlas_document& doc) {
    if (doc.component_count == 0)
        std::cerr << "warning: " << doc.spec << " is abelian; the complex is empty\n";
}

std::vector<int> resolve_kernel(const group_table& g, const std::string& tokens) {
    std::vector<int> gens;
    std::string cur;
    auto flush = [&] {
        size_t a = cur.find_first_not_of(' ');
        size_t b = cur.find_last_not_of(' ');
        if (a == std::string::npos) throw usage_error("empty kernel generator token");
        std::string nm = cur.substr(a, b - a + 1);
        auto idx = g.index_of_name(nm);
        if (!idx) throw usage_error("unknown element name '" + nm + "' in " + g.spec());
        gens.push_back(*idx);
        cur.clear();
    };
    for (char ch : tokens) {
        if (ch == ',')
            flush();
        else
            cur += ch;
    }
    flush();
    return g.subgroup_closure(gens);
}

struct cli_options {
    std::string spec;
    std::string format = "text";
    std::string out;
    std::string kernel_tokens;
    std::string golden_file;
    bool no_cache = false;
    bool timing = false;
    bool use_aut = false;
    bool kernel_center = false;
    bool central = false;
    int jobs = 1;
    int component = 0;
};

int run_census(const cli_options& o) {
    auto doc = obtain_document("census", o.spec, o.no_cache, o.timing, [&] {
        auto g = group_table::parse_spec(o.spec);
        surface_complex s(g);
        return census_document(o.spec, s);
    });
    warn_if_empty(doc);
    emit(o.out, render(doc, o.format));
    return 0;
}

int run_actions(const cli_options& o) {
    const std::string kind = o.use_aut ? "actions-automorphisms" : "actions-conjugation";
    auto doc = obtain_document(kind, o.spec, o.no_cache, o.timing, [&] {
        auto g = group_table::parse_spec(o.spec);
        surface_complex s(g);
        if (o.use_aut) {
            auto auts = automorphism_group(g);
            auto reports = automorphism_reports(s, auts, o.jobs);
            return actions_document(o.spec, s, reports, true, (long long)auts.size());
        }
        auto reports = conjugation_reports(s, o.jobs);
        return actions_document(o.spec, s, reports, false, 0);
    });
    warn_if_empty(doc);
    emit(o.out, render(doc, o.format));
    return 0;
}

int run_cover(const cli_options& o) {
    if (o.kernel_tokens.empty() && !o.kernel_center)
        throw usage_error("cover needs --kernel or --kernel-center");
    auto t0 = std::chrono::steady_clock::now();
    auto g = group_table::parse_spec(o.spec);
    std::vector<int> kernel =
        o.kernel_center ? g.center() : resolve_kernel(g, o.kernel_tokens);
    cover_analysis cov(g, kernel, o.central);
    auto bytes = o.format == "json" ? render_cover_json(cov) : render_cover_text(cov);
    if (o.timing)
        std::cerr << "timing: cover " << o.spec << " computed in "
                  << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                         .count()
                  << "s\n";
    emit(o.out, bytes);
    return 0;
}

int run_diff_golden(const cli_options& o) {
    auto doc = obtain_document("census", o.spec, o.no_cache, o.timing, [&] {
        auto g = group_table::parse_spec(o.spec);
        surface_complex s(g);
        return census_document(o.spec, s);
    });
    auto golden = load_golden_csv(o.golden_file);
    auto diffs = diff_census(doc.census, golden);
    if (diffs.empty()) {
        std::cout << "census matches golden table: " << doc.component_count
                  << " components in " << doc.census.size() << " rows\n";
        return 0;
    }
    for (const auto& line : diffs) std::cout << line << "\n";
    return 1;
}

int run_export(const cli_options& o) {
    auto t0 = std::chrono::steady_clock::now();
    auto g = group_table::parse_spec(o.spec);
    surface_complex s(g);
    auto bytes = export_component_json(s, o.component, o.spec);
    verify_export_document(bytes);
    if (o.timing)
        std::cerr << "timing: export " << o.spec << " computed in "
                  << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                         .count()
                  << "s\n";
    emit(o.out, bytes);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "atlas: canonical surface complexes of finite nonabelian groups.\n"
        "Group specs: S<n>, A<n>, D<2n>, Q8, SL2(<p>), PSL2(<p>), ES(<p>),\n"
        "perm:<cycles>[,<cycles>...] such as \"perm:(1 2 3)(4 5),(1 2)\"."};
    app.require_subcommand(1);
    app.set_version_flag("--version", atlas_version);

    cli_options o;
    o.jobs = (int)std::thread::hardware_concurrency();
    if (o.jobs <= 0) o.jobs = 1;

    auto add_spec = [&](CLI::App* cmd) {
        cmd->add_option("spec", o.spec, "group spec")->required();
    };
    auto add_output = [&](CLI::App* cmd, const std::vector<std::string>& formats) {
        if (!formats.empty())
            cmd->add_option("--format", o.format, "output format")
                ->check(CLI::IsMember(formats))
                ->capture_default_str();
        cmd->add_option("--out", o.out, "write to a file instead of stdout");
        cmd->add_flag("--timing", o.timing, "print wall time to stderr");
    };
    auto add_cache = [&](CLI::App* cmd) {
        cmd->add_flag("--no-cache", o.no_cache, "bypass the result cache");
    };

    auto* census = app.add_subcommand("census", "component census of the surface complex");
    add_spec(census);
    add_output(census, {"text", "csv", "json"});
    add_cache(census);

    auto* actions =
        app.add_subcommand("actions", "symmetry summaries of the group action per type");
    add_spec(actions);
    actions->add_flag("--aut", o.use_aut, "act by the full automorphism group");
    actions->add_option("--jobs", o.jobs, "parallel component analyses")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output(actions, {"text", "csv", "json"});
    add_cache(actions);

    auto* cover =
        app.add_subcommand("cover", "branched covering over the quotient by a normal subgroup");
    add_spec(cover);
    auto* kopt = cover->add_option("--kernel", o.kernel_tokens,
                                   "comma separated element names generating the kernel");
    cover->add_flag("--kernel-center", o.kernel_center, "use the center as the kernel")
        ->excludes(kopt);
    cover->add_flag("--central", o.central,
                    "verify the extra structure of a central kernel (monodromy, groupings)");
    add_output(cover, {"text", "json"});

    auto* diff = app.add_subcommand("diff-golden", "compare the census against a golden CSV");
    add_spec(diff);
    diff->add_option("golden", o.golden_file, "golden CSV file")->required();
    diff->add_flag("--timing", o.timing, "print wall time to stderr");
    add_cache(diff);

    auto* exp = app.add_subcommand("export", "self contained JSON for one component");
    add_spec(exp);
    exp->add_option("--component", o.component, "component index")->required();
    add_output(exp, {});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (census->parsed()) return run_census(o);
        if (actions->parsed()) return run_actions(o);
        if (cover->parsed()) return run_cover(o);
        if (diff->parsed()) return run_diff_golden(o);
        if (exp->parsed()) return run_export(o);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const theorem_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
