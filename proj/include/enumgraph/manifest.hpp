#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "enumgraph/ingest.hpp"
#include "enumgraph/records.hpp"

namespace enumgraph {

/// Snapshot manifest: a JSON file in the snapshot directory listing, per
/// source, the data files with their sha256 digests plus version label and
/// retrieval date. Layout:
///
///   { "sources": [ { "source": "nvd" | "cwe" | "capec" | "attack",
///                    "version_label": "...",
///                    "retrieval_date": "YYYY-MM-DD",
///                    "files": [ { "path": "relative/path", "sha256": "..." } ] } ] }
///
/// A source's combined content digest is the sha256 of the concatenated
/// per-file digests in listed order (equal to the file digest for
/// single-file sources' concatenation of one).

struct ManifestFile {
    std::filesystem::path path;  // relative to the snapshot directory
    std::string sha256;
};

struct ManifestEntry {
    SourceKind source = SourceKind::Nvd;
    std::string version_label;
    std::string retrieval_date;
    std::vector<ManifestFile> files;
};

struct Manifest {
    std::vector<ManifestEntry> entries;

    /// Throws ManifestError on missing file, bad JSON, or unknown source.
    static Manifest load(const std::filesystem::path& file);

    const ManifestEntry* find(SourceKind k) const;
};

/// Everything one coherent snapshot set loads into.
struct SnapshotSet {
    std::vector<CveEntry> cves;
    std::vector<CweEntry> cwes;
    std::vector<OwaspMapping> owasp;
    std::vector<CapecEntry> capecs;
    std::vector<AttackTechnique> techniques;
    std::vector<Tactic> tactics;
    std::vector<Snapshot> snapshots;  // one per manifest source, same order
    std::string cwe_catalog_version;
    std::string capec_catalog_version;
    std::vector<std::string> warnings;
};

/// Verifies every listed file's digest (DigestMismatch on disagreement),
/// then runs the per-source loaders and stamps manifest metadata onto the
/// resulting Snapshot records.
SnapshotSet load_all(const Manifest& manifest, const std::filesystem::path& snapshot_dir);

std::string sha256_hex(std::string_view bytes);
std::string sha256_hex_file(const std::filesystem::path& file);

/// Reads a whole file; transparently gunzips when the gzip magic is present.
std::string read_file_bytes(const std::filesystem::path& file);

}  // namespace enumgraph
