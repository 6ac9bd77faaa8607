#include "enumgraph/refgraph.hpp"

#include <algorithm>
#include <set>

#include "enumgraph/errors.hpp"

namespace enumgraph {

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Cve: return "CVE";
        case NodeKind::Cwe: return "CWE";
        case NodeKind::Capec: return "CAPEC";
        case NodeKind::Technique: return "TECHNIQUE";
        case NodeKind::OwaspCategory: return "OWASP_CATEGORY";
        case NodeKind::Cpe: return "CPE";
    }
    return "?";
}

const char* edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::CveHasCwe: return "CVE_HAS_CWE";
        case EdgeKind::CweHasCapec: return "CWE_HAS_CAPEC";
        case EdgeKind::CapecMapsTechnique: return "CAPEC_MAPS_TECHNIQUE";
        case EdgeKind::OwaspHasCwe: return "OWASP_HAS_CWE";
        case EdgeKind::CveHasCpe: return "CVE_HAS_CPE";
        case EdgeKind::ParentOf: return "PARENT_OF";
    }
    return "?";
}

namespace {

std::string intern_key(NodeKind kind, const std::string& id) {
    return std::string(1, static_cast<char>('0' + static_cast<int>(kind))) + id;
}

const std::vector<std::uint32_t>& empty_list() {
    static const std::vector<std::uint32_t> empty;
    return empty;
}

void collect_criteria(const ApplicabilityNode& node, std::set<std::string>& out) {
    for (const auto& clause : node.matches) out.insert(clause.criterion.format());
    for (const auto& child : node.children) collect_criteria(child, out);
}

}  // namespace

std::uint32_t RefGraph::intern(NodeKind kind, std::string id) {
    auto [it, inserted] =
        index_.try_emplace(intern_key(kind, id), static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) {
        nodes_.push_back(NodeRef{kind, std::move(id)});
        by_kind_[static_cast<int>(kind)].push_back(it->second);
        rejected_.push_back(false);
    }
    return it->second;
}

void RefGraph::add_edge(EdgeKind kind, std::uint32_t from, std::uint32_t to) {
    auto& store = edges_[static_cast<int>(kind)];
    store.fwd[from].push_back(to);
    store.rev[to].push_back(from);
}

std::optional<std::uint32_t> RefGraph::node_index(NodeKind kind, const std::string& id) const {
    auto it = index_.find(intern_key(kind, id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::uint32_t>& RefGraph::nodes_of_kind(NodeKind kind) const {
    return by_kind_[static_cast<int>(kind)];
}

bool RefGraph::cve_rejected(std::uint32_t index) const { return rejected_[index]; }

const std::vector<std::uint32_t>& RefGraph::out_edges(std::uint32_t node, EdgeKind kind) const {
    const auto& fwd = edges_[static_cast<int>(kind)].fwd;
    auto it = fwd.find(node);
    return it == fwd.end() ? empty_list() : it->second;
}

const std::vector<std::uint32_t>& RefGraph::in_edges(std::uint32_t node, EdgeKind kind) const {
    const auto& rev = edges_[static_cast<int>(kind)].rev;
    auto it = rev.find(node);
    return it == rev.end() ? empty_list() : it->second;
}

void RefGraph::check_hierarchy_acyclic(NodeKind kind) const {
    // iterative three-color DFS over PARENT_OF restricted to one catalog
    enum : unsigned char { White, Grey, Black };
    std::vector<unsigned char> color(nodes_.size(), White);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack;
    for (std::uint32_t root : nodes_of_kind(kind)) {
        if (color[root] != White) continue;
        stack.emplace_back(root, 0);
        color[root] = Grey;
        while (!stack.empty()) {
            auto& [n, next] = stack.back();
            const auto& kids = out_edges(n, EdgeKind::ParentOf);
            if (next == kids.size()) {
                color[n] = Black;
                stack.pop_back();
                continue;
            }
            std::uint32_t child = kids[next++];
            if (color[child] == Grey)
                throw CyclicHierarchy(std::string(node_kind_name(kind)) +
                                      " hierarchy contains a cycle through " + nodes_[child].id);
            if (color[child] == White) {
                color[child] = Grey;
                stack.emplace_back(child, 0);
            }
        }
    }
}

RefGraph RefGraph::build(const std::vector<CveEntry>& cves, const std::vector<CweEntry>& cwes,
                         const std::vector<CapecEntry>& capecs,
                         const std::vector<AttackTechnique>& techniques,
                         const std::vector<OwaspMapping>& owasp, std::vector<Snapshot> snapshots) {
    RefGraph g;
    g.snapshots_ = std::move(snapshots);

    // nodes: deprecated/revoked catalog entries stay out; rejected CVEs stay
    // in (flagged) so analyses can pick their denominator
    std::set<int> active_cwes, active_capecs;
    std::set<std::string> active_techniques;
    for (const auto& w : cwes)
        if (w.status == CatalogStatus::Active) {
            g.intern(NodeKind::Cwe, cwe_node_id(w.id));
            active_cwes.insert(w.id);
        }
    for (const auto& p : capecs)
        if (p.status == CatalogStatus::Active) {
            g.intern(NodeKind::Capec, capec_node_id(p.id));
            active_capecs.insert(p.id);
        }
    for (const auto& t : techniques)
        if (!t.revoked && !t.deprecated) {
            g.intern(NodeKind::Technique, t.id);
            active_techniques.insert(t.id);
        }
    for (const auto& o : owasp) g.intern(NodeKind::OwaspCategory, o.category);
    for (const auto& c : cves) {
        std::uint32_t idx = g.intern(NodeKind::Cve, c.id);
        g.rejected_[idx] = c.status == CveStatus::Rejected;
    }

    auto dangle = [&g](EdgeKind kind, const std::string& src, const std::string& dst) {
        g.dangling_.push_back(DanglingRef{kind, src, dst});
    };

    for (const auto& w : cwes) {
        if (w.status != CatalogStatus::Active) continue;
        std::uint32_t self = *g.node_index(NodeKind::Cwe, cwe_node_id(w.id));
        for (int parent : w.parent_ids) {
            if (active_cwes.count(parent))
                g.add_edge(EdgeKind::ParentOf, *g.node_index(NodeKind::Cwe, cwe_node_id(parent)),
                           self);
            else
                dangle(EdgeKind::ParentOf, cwe_node_id(parent), cwe_node_id(w.id));
        }
        for (int capec : w.related_capec_ids) {
            if (active_capecs.count(capec))
                g.add_edge(EdgeKind::CweHasCapec, self,
                           *g.node_index(NodeKind::Capec, capec_node_id(capec)));
            else
                dangle(EdgeKind::CweHasCapec, cwe_node_id(w.id), capec_node_id(capec));
        }
    }

    for (const auto& p : capecs) {
        if (p.status != CatalogStatus::Active) continue;
        std::uint32_t self = *g.node_index(NodeKind::Capec, capec_node_id(p.id));
        for (int parent : p.parent_ids) {
            if (active_capecs.count(parent))
                g.add_edge(EdgeKind::ParentOf,
                           *g.node_index(NodeKind::Capec, capec_node_id(parent)), self);
            else
                dangle(EdgeKind::ParentOf, capec_node_id(parent), capec_node_id(p.id));
        }
        for (const auto& tid : p.technique_ids) {
            if (active_techniques.count(tid))
                g.add_edge(EdgeKind::CapecMapsTechnique, self,
                           *g.node_index(NodeKind::Technique, tid));
            else
                dangle(EdgeKind::CapecMapsTechnique, capec_node_id(p.id), tid);
        }
    }

    for (const auto& o : owasp) {
        std::uint32_t self = *g.node_index(NodeKind::OwaspCategory, o.category);
        for (int cwe : o.cwe_ids) {
            if (active_cwes.count(cwe))
                g.add_edge(EdgeKind::OwaspHasCwe, self,
                           *g.node_index(NodeKind::Cwe, cwe_node_id(cwe)));
            else
                dangle(EdgeKind::OwaspHasCwe, o.category, cwe_node_id(cwe));
        }
    }

    for (const auto& c : cves) {
        std::uint32_t self = *g.node_index(NodeKind::Cve, c.id);
        for (const auto& ref : c.cwe_ids) {
            auto cwe = parse_cwe_ref(ref);
            if (!cwe) continue;  // NVD placeholder, not a weakness reference
            if (active_cwes.count(*cwe))
                g.add_edge(EdgeKind::CveHasCwe, self,
                           *g.node_index(NodeKind::Cwe, cwe_node_id(*cwe)));
            else
                dangle(EdgeKind::CveHasCwe, c.id, cwe_node_id(*cwe));
        }
        if (c.configuration) {
            std::set<std::string> criteria;
            collect_criteria(*c.configuration, criteria);
            for (const auto& criterion : criteria)
                g.add_edge(EdgeKind::CveHasCpe, self, g.intern(NodeKind::Cpe, criterion));
        }
    }

    for (auto& store : g.edges_) {
        for (auto& [n, list] : store.fwd) sort_unique(list);
        for (auto& [n, list] : store.rev) sort_unique(list);
    }
    g.check_hierarchy_acyclic(NodeKind::Cwe);
    g.check_hierarchy_acyclic(NodeKind::Capec);
    return g;
}

std::vector<std::string> RefGraph::capecs_for_cve(const std::string& cve_id) const {
    auto cve = node_index(NodeKind::Cve, cve_id);
    if (!cve) throw UnknownNode("no CVE node " + cve_id);
    std::set<std::uint32_t> capecs;
    for (std::uint32_t cwe : out_edges(*cve, EdgeKind::CveHasCwe))
        for (std::uint32_t capec : out_edges(cwe, EdgeKind::CweHasCapec)) capecs.insert(capec);
    std::vector<std::string> out;
    out.reserve(capecs.size());
    for (std::uint32_t c : capecs) out.push_back(nodes_[c].id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> RefGraph::techniques_for_cve(const std::string& cve_id) const {
    auto cve = node_index(NodeKind::Cve, cve_id);
    if (!cve) throw UnknownNode("no CVE node " + cve_id);
    std::set<std::uint32_t> techniques;
    for (std::uint32_t cwe : out_edges(*cve, EdgeKind::CveHasCwe))
        for (std::uint32_t capec : out_edges(cwe, EdgeKind::CweHasCapec))
            for (std::uint32_t t : out_edges(capec, EdgeKind::CapecMapsTechnique))
                techniques.insert(t);
    std::vector<std::string> out;
    out.reserve(techniques.size());
    for (std::uint32_t t : techniques) out.push_back(nodes_[t].id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> RefGraph::capecs_for_technique(const std::string& technique_id) const {
    auto t = node_index(NodeKind::Technique, technique_id);
    if (!t) throw UnknownNode("no technique node " + technique_id);
    std::vector<std::string> out;
    for (std::uint32_t capec : in_edges(*t, EdgeKind::CapecMapsTechnique))
        out.push_back(nodes_[capec].id);
    std::sort(out.begin(), out.end());
    return out;
}

double RefGraph::cwe_capec_coverage() const {
    const auto& cwes = nodes_of_kind(NodeKind::Cwe);
    if (cwes.empty()) throw EmptyDomain("graph holds no CWE nodes");
    std::size_t mapped = 0;
    for (std::uint32_t cwe : cwes)
        if (!out_edges(cwe, EdgeKind::CweHasCapec).empty()) ++mapped;
    return static_cast<double>(mapped) / static_cast<double>(cwes.size());
}

void RefGraph::export_edge_list(std::ostream& out) const {
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (int k = 0; k < 6; ++k) {
        const char* kind = edge_kind_name(static_cast<EdgeKind>(k));
        for (const auto& [from, targets] : edges_[k].fwd)
            for (std::uint32_t to : targets)
                rows.emplace_back(kind, nodes_[from].id, nodes_[to].id);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [kind, from, to] : rows) out << kind << '\t' << from << '\t' << to << '\n';
}

}  // namespace enumgraph
