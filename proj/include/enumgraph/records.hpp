#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "enumgraph/cpe.hpp"

namespace enumgraph {

/// Typed records produced by ingestion. "Set" fields are kept as sorted,
/// duplicate-free vectors so every downstream artifact is deterministic.

template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// ---------------------------------------------------------------- NVD / CVE

enum class CveStatus { Published, Rejected };

/// One version bound from an NVD cpe_match clause.
struct VersionBound {
    std::string text;
    bool inclusive = true;

    bool operator==(const VersionBound&) const = default;
};

struct CpeMatchClause {
    cpe::Name criterion;
    bool vulnerable = true;
    std::optional<VersionBound> version_start;
    std::optional<VersionBound> version_end;

    bool operator==(const CpeMatchClause&) const = default;
};

/// AND/OR applicability tree as shipped in NVD `configurations.nodes`.
struct ApplicabilityNode {
    enum class Op { And, Or };

    Op op = Op::Or;
    std::vector<ApplicabilityNode> children;
    std::vector<CpeMatchClause> matches;

    bool operator==(const ApplicabilityNode&) const = default;
};

struct CveEntry {
    std::string id;  // CVE-<year>-<digits>
    std::string description;
    CveStatus status = CveStatus::Published;
    std::vector<std::string> cwe_ids;  // "CWE-502", may include NVD placeholders
    std::optional<ApplicabilityNode> configuration;
    std::vector<std::string> references;

    bool operator==(const CveEntry&) const = default;
};

// ---------------------------------------------------------------- catalogs

enum class CatalogStatus { Active, Deprecated };

struct CweEntry {
    int id = 0;
    std::string name;
    std::vector<int> parent_ids;         // ChildOf targets
    std::vector<int> related_capec_ids;  // Related_Attack_Patterns
    CatalogStatus status = CatalogStatus::Active;

    bool operator==(const CweEntry&) const = default;
};

struct CapecEntry {
    int id = 0;
    std::string name;
    std::vector<int> parent_ids;
    std::vector<std::string> technique_ids;  // "T1566" / "T1566.001"
    std::optional<std::string> severity;
    CatalogStatus status = CatalogStatus::Active;

    bool operator==(const CapecEntry&) const = default;
};

struct AttackTechnique {
    std::string id;  // T#### or T####.###
    std::string stix_id;
    std::string name;
    std::vector<std::string> tactics;       // tactic shortnames
    std::vector<std::string> data_sources;  // "<source>: <component>" verbatim
    bool is_subtechnique = false;
    bool revoked = false;
    bool deprecated = false;

    bool operator==(const AttackTechnique&) const = default;
};

struct Tactic {
    std::string shortname;  // e.g. "initial-access"
    std::string name;       // e.g. "Initial Access"

    bool operator==(const Tactic&) const = default;
};

/// One row of the CWE-1344 view (OWASP Top Ten 2021).
struct OwaspMapping {
    std::string category;  // "A1".."A10"
    std::string category_name;
    std::vector<int> cwe_ids;

    bool operator==(const OwaspMapping&) const = default;
};

// ---------------------------------------------------------------- provenance

enum class SourceKind { Nvd, Cwe, Capec, Attack, OwaspMap };

const char* source_kind_name(SourceKind k);

struct Snapshot {
    SourceKind source = SourceKind::Nvd;
    std::string version_label;
    std::string retrieval_date;  // ISO calendar date
    std::string content_digest;  // sha256 hex

    bool operator==(const Snapshot&) const = default;
};

/// Normalized "CWE-502" / "CAPEC-98" node id texts used graph-wide.
std::string cwe_node_id(int id);
std::string capec_node_id(int id);

/// Parses "CWE-502" → 502; returns nullopt for placeholders like
/// "NVD-CWE-noinfo" that reference no real weakness.
std::optional<int> parse_cwe_ref(const std::string& text);

}  // namespace enumgraph
