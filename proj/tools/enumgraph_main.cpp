#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "enumgraph/analysis.hpp"
#include "enumgraph/errors.hpp"
#include "enumgraph/manifest.hpp"
#include "enumgraph/refgraph.hpp"
#include "enumgraph/reports.hpp"
#include "enumgraph/vulnid.hpp"

namespace fs = std::filesystem;
using namespace enumgraph;

namespace {

/// Missing analysis prerequisite (exit 4), as opposed to a broken snapshot
/// (exit 2) or a broken inventory (exit 3).
struct AnalysisInputError : Error {
    using Error::Error;
};

struct RunConfig {
    fs::path snapshot_dir = "data/snapshots";
    fs::path manifest_path;  // defaults to <snapshot_dir>/manifest.json
    fs::path out_dir = ".";
    bool parity = false;
    bool include_rejected = false;
    bool assume_any_version_matches = false;

    fs::path manifest() const {
        return manifest_path.empty() ? snapshot_dir / "manifest.json" : manifest_path;
    }
};

Manifest restricted_to(const Manifest& manifest, const std::set<SourceKind>& wanted,
                       bool missing_is_analysis_error) {
    Manifest out;
    for (const auto& e : manifest.entries)
        if (wanted.count(e.source)) out.entries.push_back(e);
    for (SourceKind k : wanted)
        if (!out.find(k)) {
            std::string msg = std::string("required source '") + source_kind_name(k) +
                              "' is not in the manifest";
            if (missing_is_analysis_error) throw AnalysisInputError(msg);
            throw ManifestError(msg);
        }
    return out;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    if (!out) throw Error("cannot write " + path.string());
}

int cmd_ingest(const RunConfig& config) {
    Manifest manifest = Manifest::load(config.manifest());
    SnapshotSet set = load_all(manifest, config.snapshot_dir);
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const Snapshot& snap = set.snapshots[i];
        std::cout << "source=" << source_kind_name(snap.source)
                  << " version=" << (snap.version_label.empty() ? "?" : snap.version_label)
                  << " date=" << (snap.retrieval_date.empty() ? "?" : snap.retrieval_date)
                  << " sha256=" << snap.content_digest << ": ";
        switch (snap.source) {
            case SourceKind::Nvd: {
                std::size_t rejected = 0;
                for (const auto& c : set.cves)
                    if (c.status == CveStatus::Rejected) ++rejected;
                std::cout << set.cves.size() << " cves, " << rejected << " rejected\n";
                break;
            }
            case SourceKind::Cwe:
                std::cout << set.cwes.size() << " cwes, " << set.owasp.size()
                          << " owasp categories\n";
                break;
            case SourceKind::Capec:
                std::cout << set.capecs.size() << " capecs\n";
                break;
            case SourceKind::Attack: {
                std::size_t active = 0;
                for (const auto& t : set.techniques)
                    if (!t.revoked && !t.deprecated) ++active;
                std::cout << active << " techniques, " << (set.techniques.size() - active)
                          << " retired, " << set.tactics.size() << " tactics\n";
                break;
            }
            case SourceKind::OwaspMap:
                std::cout << "\n";
                break;
        }
    }
    std::cout << "warnings=" << set.warnings.size() << "\n";
    return 0;
}

int cmd_identify(const RunConfig& config, const fs::path& inventory_file) {
    AssetInventory inventory = AssetInventory::parse_file(inventory_file);
    Manifest manifest =
        restricted_to(Manifest::load(config.manifest()), {SourceKind::Nvd}, false);
    SnapshotSet set = load_all(manifest, config.snapshot_dir);

    IdentifyOptions options;
    options.assume_any_version_matches = config.assume_any_version_matches;
    std::vector<std::string> warnings;
    std::vector<VulnMatch> matches =
        identify_vulnerabilities(set.cves, inventory, options, &warnings);

    fs::create_directories(config.out_dir);
    write_file(config.out_dir / "identify.json", reports::identify_json(matches, set.snapshots));
    write_file(config.out_dir / "identify.csv", reports::identify_csv(matches, set.snapshots));
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "matches=" << matches.size() << " assets=" << inventory.assets.size()
              << " cves=" << set.cves.size() << "\n";
    return 0;
}

std::set<SourceKind> sources_for(const std::string& which) {
    if (which == "table3") return {SourceKind::Attack};
    if (which == "netvis") return {SourceKind::Attack, SourceKind::Capec};
    if (which == "fig3") return {SourceKind::Nvd, SourceKind::Cwe, SourceKind::Capec};
    if (which == "fig4")
        return {SourceKind::Nvd, SourceKind::Cwe, SourceKind::Capec, SourceKind::Attack};
    if (which == "fig5" || which == "coverage") return {SourceKind::Cwe, SourceKind::Capec};
    return {SourceKind::Nvd, SourceKind::Cwe, SourceKind::Capec, SourceKind::Attack};  // all
}

int cmd_analyze(const RunConfig& config, const std::string& which) {
    Manifest manifest =
        restricted_to(Manifest::load(config.manifest()), sources_for(which), true);
    SnapshotSet set = load_all(manifest, config.snapshot_dir);
    const bool all = which == "all";

    fs::create_directories(config.out_dir);
    AnalysisOptions options;
    options.include_rejected = config.include_rejected;
    options.auto_extend_top = !config.parity;

    RefGraph graph;
    bool need_graph = all || which == "netvis" || which == "fig3" || which == "fig4" ||
                      which == "fig5" || which == "coverage";
    if (need_graph)
        graph = RefGraph::build(set.cves, set.cwes, set.capecs, set.techniques, set.owasp,
                                set.snapshots);

    if (all || which == "table3") {
        auto ranking = data_source_ranking(set.techniques);
        std::size_t active = 0;
        for (const auto& t : set.techniques)
            if (!t.revoked && !t.deprecated) ++active;
        write_file(config.out_dir / "table3.csv", reports::table3_csv(ranking, set.snapshots));
        write_file(config.out_dir / "table3.json",
                   reports::table3_json(ranking, active, set.snapshots));
        std::cout << "table3: " << ranking.size() << " data sources over " << active
                  << " techniques\n";
    }
    if (all || which == "netvis") {
        reports::NetvisReport report;
        for (const auto& t : set.techniques)
            if (!t.revoked && !t.deprecated) ++report.total_techniques;
        report.visibility = network_visible_techniques(set.techniques);
        report.total_tactics = set.tactics.size();
        report.capec_coverage = network_capec_coverage(graph, report.visibility.technique_ids);
        report.capec_catalog_version = set.capec_catalog_version;
        write_file(config.out_dir / "netvis.json", reports::netvis_json(report, set.snapshots));
        write_file(config.out_dir / "netvis.csv", reports::netvis_csv(report, set.snapshots));
        std::cout << "netvis: " << report.visibility.technique_ids.size() << " of "
                  << report.total_techniques << " techniques network-visible\n"
                  << "netvis: tactic coverage " << report.visibility.tactics.size() << "/"
                  << report.total_tactics << "\n"
                  << "netvis: " << report.capec_coverage.techniques_with_capec
                  << " techniques with capec, " << report.capec_coverage.distinct_capecs
                  << " distinct capecs\n";
    }
    if (all || which == "fig3") {
        Histogram h = cve_capec_histogram(graph, BucketSpec::fig3(), options);
        write_file(config.out_dir / "fig3.csv", reports::histogram_csv(h));
        write_file(config.out_dir / "fig3.json", reports::histogram_json("fig3", h));
        std::cout << "fig3: denominator=" << h.denominator << "\n";
    }
    if (all || which == "fig4") {
        Histogram h = cve_attack_histogram(graph, BucketSpec::fig4(), options);
        write_file(config.out_dir / "fig4.csv", reports::histogram_csv(h));
        write_file(config.out_dir / "fig4.json", reports::histogram_json("fig4", h));
        double with_technique = h.percentages.empty() ? 0.0 : round2(100.0 - h.percentages[0]);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", with_technique);
        std::cout << "fig4: denominator=" << h.denominator << " with-technique=" << buf << "%\n";
    }
    if (all || which == "fig5") {
        auto counts = owasp_counts(graph, set.owasp);
        write_file(config.out_dir / "fig5.csv", reports::fig5_csv(counts, set.snapshots));
        write_file(config.out_dir / "fig5.json", reports::fig5_json(counts, set.snapshots));
        std::cout << "fig5: " << counts.size() << " categories\n";
    }
    if (all || which == "coverage") {
        double coverage = graph.cwe_capec_coverage();
        std::size_t active_cwes = graph.nodes_of_kind(NodeKind::Cwe).size();
        write_file(config.out_dir / "coverage.json",
                   reports::coverage_json(coverage, active_cwes, set.snapshots));
        write_file(config.out_dir / "coverage.csv",
                   reports::coverage_csv(coverage, active_cwes, set.snapshots));
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", coverage);
        std::cout << "coverage: " << buf << " over " << active_cwes << " cwes\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"security enumeration toolkit: snapshot ingestion, cross-reference graph, "
                 "vulnerability identification, and figure reproduction"};
    app.require_subcommand(1);

    RunConfig config;
    if (const char* env = std::getenv("ENUMGRAPH_SNAPSHOT_DIR")) config.snapshot_dir = env;
    app.add_option("--snapshot-dir", config.snapshot_dir,
                   "directory holding the pinned snapshot files")
        ->capture_default_str();
    app.add_option("--manifest", config.manifest_path,
                   "manifest file (default <snapshot-dir>/manifest.json)");
    app.add_option("--out", config.out_dir, "directory for report files")->capture_default_str();
    app.add_flag("--parity", config.parity,
                 "pin bucket labels and rounding to the published figures");
    app.add_flag("--include-rejected", config.include_rejected,
                 "count REJECTED CVEs in histogram denominators");
    app.add_flag("--assume-any-version-matches", config.assume_any_version_matches,
                 "let ANY-version inventory names satisfy version-bounded clauses");

    auto* ingest = app.add_subcommand("ingest", "load snapshots and print record counts");
    ingest->fallthrough();

    fs::path inventory_file;
    auto* identify =
        app.add_subcommand("identify", "match an asset inventory against the NVD snapshot");
    identify->add_option("inventory", inventory_file, "TAB-separated asset inventory file")
        ->required();
    identify->fallthrough();

    std::string which = "all";
    auto* analyze = app.add_subcommand("analyze", "reproduce the published analyses");
    analyze->add_option("which", which, "table3|netvis|fig3|fig4|fig5|coverage|all")
        ->check(CLI::IsMember({"table3", "netvis", "fig3", "fig4", "fig5", "coverage", "all"}));
    analyze->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(config);
        if (identify->parsed()) return cmd_identify(config, inventory_file);
        return cmd_analyze(config, which);
    } catch (const InventoryError& e) {
        std::cerr << "inventory error: " << e.what() << "\n";
        return 3;
    } catch (const AnalysisInputError& e) {
        std::cerr << "analysis input error: " << e.what() << "\n";
        return 4;
    } catch (const ManifestError& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return 2;
    } catch (const DigestMismatch& e) {
        std::cerr << "digest error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaMismatch& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const DuplicateCveId& e) {
        std::cerr << "feed error: " << e.what() << "\n";
        return 2;
    } catch (const CpeParseError& e) {
        std::cerr << "feed error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownKillChain& e) {
        std::cerr << "bundle error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
