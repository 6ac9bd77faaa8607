#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "enumgraph/records.hpp"

namespace enumgraph {

/// Asset inventory: labelled hosts with the CPE names a scanner or agent
/// produced for them. Names must be concrete (no wildcards in
/// part/vendor/product) — identification against wildcard inventories is
/// refused rather than guessed.
struct AssetInventory {
    struct Asset {
        std::string label;
        std::vector<cpe::Name> names;
    };

    std::vector<Asset> assets;

    /// One line per product: `<asset_label><TAB><cpe 2.3 formatted string>`.
    /// Repeated labels merge into one asset. Blank lines and lines starting
    /// with '#' are skipped. Throws InventoryError with the offending
    /// 1-based line number; an inventory without any asset is an error.
    static AssetInventory parse(std::istream& in);
    static AssetInventory parse_file(const std::filesystem::path& file);
};

/// One matched (clause, inventory name) pair plus how the version bounds
/// were settled: "no-bounds", "in-range", or "assumed-any-version".
struct EvidencePair {
    std::string asset_label;
    CpeMatchClause clause;
    cpe::Name name;
    std::string version_verdict;
};

struct VulnMatch {
    std::string cve_id;
    std::string asset_label;
    std::vector<EvidencePair> matched_clauses;  // non-empty by construction
};

/// Pure clause-level test: does `name` fall inside the clause's criterion
/// and version window? The clause's `vulnerable` flag is not consulted here;
/// it governs evidence and verdicts at tree level.
bool evaluate_clause(const CpeMatchClause& clause, const cpe::Name& name,
                     bool assume_any_version_matches = false);

struct ApplicabilityVerdict {
    bool applies = false;  // some asset satisfies the tree structurally
    /// vulnerable=true matches from satisfying assets; vulnerable=false
    /// clauses gate AND satisfaction but never appear here
    std::vector<EvidencePair> evidence;
};

/// Evaluates the AND/OR tree per asset. Throws MalformedNode when a node
/// carries neither children nor clauses.
ApplicabilityVerdict evaluate_applicability(const ApplicabilityNode& node,
                                            const AssetInventory& inventory,
                                            bool assume_any_version_matches = false);

struct IdentifyOptions {
    bool assume_any_version_matches = false;
    bool use_index = true;  // vendor:product inverted index over clause criteria
    bool parallel = true;
};

/// All (published CVE, asset) pairs whose applicability tree holds with at
/// least one vulnerable matched clause; sorted by cve_id then asset_label.
/// CVEs with malformed trees are skipped with a warning, never guessed.
std::vector<VulnMatch> identify_vulnerabilities(const std::vector<CveEntry>& cves,
                                                const AssetInventory& inventory,
                                                const IdentifyOptions& options = {},
                                                std::vector<std::string>* warnings = nullptr);

/// Plain single-threaded full scan; the reference the parallel/indexed path
/// is checked against in tests and the benchmark.
std::vector<VulnMatch> identify_vulnerabilities_serial(
    const std::vector<CveEntry>& cves, const AssetInventory& inventory,
    bool assume_any_version_matches = false, std::vector<std::string>* warnings = nullptr);

}  // namespace enumgraph
