#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "enumgraph/records.hpp"

namespace enumgraph {

enum class NodeKind { Cve, Cwe, Capec, Technique, OwaspCategory, Cpe };
enum class EdgeKind {
    CveHasCwe,
    CweHasCapec,
    CapecMapsTechnique,
    OwaspHasCwe,
    CveHasCpe,
    ParentOf
};

const char* node_kind_name(NodeKind k);
const char* edge_kind_name(EdgeKind k);

struct NodeRef {
    NodeKind kind = NodeKind::Cve;
    std::string id;

    bool operator==(const NodeRef&) const = default;
};

/// A cross-reference whose target is absent from the loaded catalogs
/// (deprecated, revoked, or simply unknown). Reported, never materialized.
struct DanglingRef {
    EdgeKind kind = EdgeKind::CveHasCwe;
    std::string source_id;
    std::string target_id;

    bool operator==(const DanglingRef&) const = default;
};

/// The unified cross-enumeration graph. Nodes are interned to dense indices;
/// adjacency is kept per edge kind in both directions. Immutable once built;
/// all queries are const and safe to run in parallel.
class RefGraph {
public:
    static RefGraph build(const std::vector<CveEntry>& cves, const std::vector<CweEntry>& cwes,
                          const std::vector<CapecEntry>& capecs,
                          const std::vector<AttackTechnique>& techniques,
                          const std::vector<OwaspMapping>& owasp,
                          std::vector<Snapshot> snapshots = {});

    // --- node access ---
    std::size_t node_count() const { return nodes_.size(); }
    const NodeRef& node(std::uint32_t index) const { return nodes_[index]; }
    std::optional<std::uint32_t> node_index(NodeKind kind, const std::string& id) const;
    const std::vector<std::uint32_t>& nodes_of_kind(NodeKind kind) const;
    bool cve_rejected(std::uint32_t index) const;

    // --- adjacency (sorted, duplicate-free index lists) ---
    const std::vector<std::uint32_t>& out_edges(std::uint32_t node, EdgeKind kind) const;
    const std::vector<std::uint32_t>& in_edges(std::uint32_t node, EdgeKind kind) const;

    // --- contracted queries (ids like "CAPEC-98", "T1566"; sorted) ---
    std::vector<std::string> capecs_for_cve(const std::string& cve_id) const;
    std::vector<std::string> techniques_for_cve(const std::string& cve_id) const;
    std::vector<std::string> capecs_for_technique(const std::string& technique_id) const;

    /// Active CWEs with at least one CWE_HAS_CAPEC edge over all active CWEs.
    /// Throws EmptyDomain when the graph holds no CWE nodes.
    double cwe_capec_coverage() const;

    const std::vector<DanglingRef>& dangling() const { return dangling_; }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }

    /// One edge per line, `<kind>\t<source id>\t<target id>`, sorted by
    /// kind then ids — deterministic for diffing.
    void export_edge_list(std::ostream& out) const;

private:
    struct EdgeStore {
        std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> fwd, rev;
    };

    std::uint32_t intern(NodeKind kind, std::string id);
    void add_edge(EdgeKind kind, std::uint32_t from, std::uint32_t to);
    void check_hierarchy_acyclic(NodeKind kind) const;

    std::vector<NodeRef> nodes_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::array<std::vector<std::uint32_t>, 6> by_kind_;
    std::array<EdgeStore, 6> edges_;
    std::vector<bool> rejected_;
    std::vector<DanglingRef> dangling_;
    std::vector<Snapshot> snapshots_;
};

}  // namespace enumgraph
