#include "enumgraph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "enumgraph/errors.hpp"

namespace enumgraph {

double round2(double value) { return std::floor(value * 100.0 + 0.5) / 100.0; }

BucketSpec BucketSpec::fig3() {
    return BucketSpec{{{"0", 0, 0},
                       {"1-2", 1, 2},
                       {"3-5", 3, 5},
                       {"6-8", 6, 8},
                       {"9-15", 9, 15},
                       {"16-59", 16, 59}}};
}

BucketSpec BucketSpec::fig4() {
    return BucketSpec{{{"0", 0, 0},
                       {"1", 1, 1},
                       {"2", 2, 2},
                       {"3-5", 3, 5},
                       {"6-10", 6, 10},
                       {">10", 11, std::nullopt}}};
}

std::size_t BucketSpec::bucket_for(int count) const {
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        const Bucket& b = buckets[i];
        if (count >= b.lower && (!b.upper || count <= *b.upper)) return i;
    }
    throw BucketGap("no bucket covers count " + std::to_string(count));
}

BucketSpec BucketSpec::extended_to(int max_count) const {
    BucketSpec out = *this;
    if (out.buckets.empty()) return out;
    Bucket& top = out.buckets.back();
    if (!top.upper || *top.upper >= max_count) return out;
    top.upper = max_count;
    top.label = std::to_string(top.lower) + "-" + std::to_string(max_count);
    return out;
}

std::vector<DataSourceCount> data_source_ranking(const std::vector<AttackTechnique>& techniques) {
    std::map<std::string, int> counts;
    for (const auto& t : techniques) {
        if (t.revoked || t.deprecated) continue;
        std::set<std::string> sources;  // one hit per source per technique
        for (const auto& ds : t.data_sources) {
            auto colon = ds.find(':');
            std::string source = colon == std::string::npos ? ds : ds.substr(0, colon);
            while (!source.empty() && source.back() == ' ') source.pop_back();
            if (!source.empty()) sources.insert(std::move(source));
        }
        for (const auto& s : sources) ++counts[s];
    }
    std::vector<DataSourceCount> out;
    out.reserve(counts.size());
    for (const auto& [name, count] : counts) out.push_back(DataSourceCount{name, count});
    std::sort(out.begin(), out.end(), [](const DataSourceCount& a, const DataSourceCount& b) {
        if (a.technique_count != b.technique_count) return a.technique_count > b.technique_count;
        return a.data_source < b.data_source;
    });
    return out;
}

const std::vector<std::string> kNetworkSensorStrings = {
    "Network Traffic: Network Connection Creation",
    "Network Traffic: Network Traffic Content",
    "Network Traffic: Network Traffic Flow",
};

NetworkVisibility network_visible_techniques(const std::vector<AttackTechnique>& techniques,
                                             const std::vector<std::string>& sensor_strings) {
    NetworkVisibility out;
    std::set<std::string> tactics;
    for (const auto& t : techniques) {
        if (t.revoked || t.deprecated) continue;
        bool visible = false;
        for (const auto& ds : t.data_sources)
            if (std::find(sensor_strings.begin(), sensor_strings.end(), ds) !=
                sensor_strings.end()) {
                visible = true;
                break;
            }
        if (!visible) continue;
        out.technique_ids.push_back(t.id);
        tactics.insert(t.tactics.begin(), t.tactics.end());
    }
    std::sort(out.technique_ids.begin(), out.technique_ids.end());
    out.tactics.assign(tactics.begin(), tactics.end());
    return out;
}

NetworkCapecCoverage network_capec_coverage(const RefGraph& graph,
                                            const std::vector<std::string>& technique_ids) {
    NetworkCapecCoverage out;
    std::set<std::string> capecs;
    for (const auto& id : technique_ids) {
        auto node = graph.node_index(NodeKind::Technique, id);
        if (!node) continue;
        const auto& incoming = graph.in_edges(*node, EdgeKind::CapecMapsTechnique);
        if (incoming.empty()) continue;
        ++out.techniques_with_capec;
        for (std::uint32_t capec : incoming) capecs.insert(graph.node(capec).id);
    }
    out.distinct_capecs = static_cast<int>(capecs.size());
    return out;
}

namespace {

enum class MappingDepth { Capecs, Techniques };

/// Per-CVE mapped-set sizes over the selected population. The parallel path
/// and the serial path share this code; scratch vectors keep it allocation-
/// light.
std::vector<int> per_cve_counts(const RefGraph& graph, MappingDepth depth, bool include_rejected,
                                bool parallel) {
    const auto& cves = graph.nodes_of_kind(NodeKind::Cve);
    std::vector<std::uint32_t> population;
    population.reserve(cves.size());
    for (std::uint32_t cve : cves)
        if (include_rejected || !graph.cve_rejected(cve)) population.push_back(cve);

    const int n = static_cast<int>(population.size());
    std::vector<int> sizes(n);
#pragma omp parallel if (parallel)
    {
        std::vector<std::uint32_t> capecs, techniques;
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i) {
            capecs.clear();
            for (std::uint32_t cwe : graph.out_edges(population[i], EdgeKind::CveHasCwe))
                for (std::uint32_t capec : graph.out_edges(cwe, EdgeKind::CweHasCapec))
                    capecs.push_back(capec);
            sort_unique(capecs);
            if (depth == MappingDepth::Capecs) {
                sizes[i] = static_cast<int>(capecs.size());
                continue;
            }
            techniques.clear();
            for (std::uint32_t capec : capecs)
                for (std::uint32_t t : graph.out_edges(capec, EdgeKind::CapecMapsTechnique))
                    techniques.push_back(t);
            sort_unique(techniques);
            sizes[i] = static_cast<int>(techniques.size());
        }
    }
    return sizes;
}

Histogram bucketize(const std::vector<int>& sizes, const BucketSpec& spec,
                    const std::vector<Snapshot>& snapshots) {
    Histogram h;
    h.denominator = static_cast<std::int64_t>(sizes.size());
    h.counts.assign(spec.buckets.size(), 0);
    for (int s : sizes) ++h.counts[spec.bucket_for(s)];
    for (const auto& b : spec.buckets) h.labels.push_back(b.label);
    h.percentages.reserve(spec.buckets.size());
    for (std::int64_t c : h.counts)
        h.percentages.push_back(
            h.denominator == 0 ? 0.0
                               : round2(100.0 * static_cast<double>(c) /
                                        static_cast<double>(h.denominator)));
    h.snapshot_set = snapshots;
    return h;
}

}  // namespace

namespace {

Histogram histogram_for(const RefGraph& graph, MappingDepth depth, const BucketSpec& spec,
                        const AnalysisOptions& options) {
    std::vector<int> sizes =
        per_cve_counts(graph, depth, options.include_rejected, options.parallel);
    if (options.auto_extend_top && !sizes.empty())
        return bucketize(sizes, spec.extended_to(*std::max_element(sizes.begin(), sizes.end())),
                         graph.snapshots());
    return bucketize(sizes, spec, graph.snapshots());
}

}  // namespace

Histogram cve_capec_histogram(const RefGraph& graph, const BucketSpec& spec,
                              const AnalysisOptions& options) {
    return histogram_for(graph, MappingDepth::Capecs, spec, options);
}

Histogram cve_attack_histogram(const RefGraph& graph, const BucketSpec& spec,
                               const AnalysisOptions& options) {
    return histogram_for(graph, MappingDepth::Techniques, spec, options);
}

std::vector<OwaspCount> owasp_counts(const RefGraph& graph,
                                     const std::vector<OwaspMapping>& owasp) {
    if (graph.nodes_of_kind(NodeKind::OwaspCategory).empty())
        throw MissingView1344("no OWASP Top Ten categories in the graph (view 1344 missing)");
    std::vector<OwaspCount> out;
    for (const auto& mapping : owasp) {
        auto node = graph.node_index(NodeKind::OwaspCategory, mapping.category);
        if (!node) continue;
        OwaspCount row;
        row.category = mapping.category;
        row.category_name = mapping.category_name;
        const auto& cwes = graph.out_edges(*node, EdgeKind::OwaspHasCwe);
        row.cwe_count = static_cast<int>(cwes.size());
        std::set<std::uint32_t> capecs;
        for (std::uint32_t cwe : cwes) {
            const auto& mapped = graph.out_edges(cwe, EdgeKind::CweHasCapec);
            capecs.insert(mapped.begin(), mapped.end());
        }
        row.capec_count = static_cast<int>(capecs.size());
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace enumgraph
