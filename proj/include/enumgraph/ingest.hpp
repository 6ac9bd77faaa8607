#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "enumgraph/records.hpp"

namespace enumgraph {

/// Loaders for the pinned snapshot files. Each loader fills the returned
/// Snapshot's content_digest from the raw bytes it read; version_label and
/// retrieval_date come from the manifest layer (see manifest.hpp).
///
/// Loaders throw SchemaMismatch on unparseable input and the more specific
/// errors listed per function. Non-fatal oddities (dangling ids, skipped
/// objects) are appended to `warnings`.

struct NvdData {
    std::vector<CveEntry> cves;
    Snapshot snapshot;
    std::vector<std::string> warnings;
};

/// NVD JSON 1.1 yearly feeds; plain or gzip files. Throws DuplicateCveId
/// when one id appears twice across the file list and CpeParseError (with
/// the CVE id) when a cpe23Uri does not parse. Legacy 2.2 URIs found in
/// old feed items are converted to 2.3 names.
NvdData load_nvd_feeds(const std::vector<std::filesystem::path>& files);

struct CweData {
    std::vector<CweEntry> cwes;
    std::vector<OwaspMapping> owasp;
    Snapshot snapshot;
    std::string catalog_version;
    std::vector<std::string> warnings;
};

/// CWE 4.x XML catalog. The CWE-1344 view becomes the OwaspMapping set; if
/// the view is absent, `owasp` stays empty and a warning is recorded (the
/// OWASP breakdown then throws MissingView1344 when asked for).
CweData load_cwe_catalog(const std::filesystem::path& file);

struct CapecData {
    std::vector<CapecEntry> capecs;
    Snapshot snapshot;
    std::string catalog_version;
    std::vector<std::string> warnings;
};

/// CAPEC 3.x XML catalog; ATT&CK taxonomy mappings normalized to T-numbers.
CapecData load_capec_catalog(const std::filesystem::path& file);

struct AttackData {
    std::vector<AttackTechnique> techniques;  // revoked/deprecated included, flagged
    std::vector<Tactic> tactics;
    Snapshot snapshot;
    std::vector<std::string> warnings;
};

/// Enterprise ATT&CK STIX 2.x JSON bundle. Kill-chain phases outside the
/// bundle's declared tactics throw UnknownKillChain.
AttackData load_attack_bundle(const std::filesystem::path& file);

}  // namespace enumgraph
