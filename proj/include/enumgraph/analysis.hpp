#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enumgraph/refgraph.hpp"

namespace enumgraph {

/// Ordered, disjoint count buckets covering 0..infinity.
struct Bucket {
    std::string label;
    int lower = 0;
    std::optional<int> upper;  // nullopt = unbounded
};

struct BucketSpec {
    std::vector<Bucket> buckets;

    /// CVE→CAPEC buckets: 0, 1–2, 3–5, 6–8, 9–15, 16–59. The bounded top
    /// bucket reflects the figure's observed maximum; on other snapshots use
    /// extended_to() unless parity is wanted.
    static BucketSpec fig3();
    /// CVE→technique buckets: 0, 1, 2, 3–5, 6–10, >10 (unbounded top).
    static BucketSpec fig4();

    /// Index of the bucket holding `count`; throws BucketGap when no bucket
    /// covers it.
    std::size_t bucket_for(int count) const;

    /// Same spec with the top bucket stretched (and relabelled) to cover at
    /// least `max_count`. No-op when already covered.
    BucketSpec extended_to(int max_count) const;
};

struct Histogram {
    std::vector<std::string> labels;
    std::vector<std::int64_t> counts;
    std::vector<double> percentages;  // of denominator, two decimals, half-up
    std::int64_t denominator = 0;
    std::vector<Snapshot> snapshot_set;
};

struct DataSourceCount {
    std::string data_source;  // source name only, component stripped
    int technique_count = 0;

    bool operator==(const DataSourceCount&) const = default;
};

struct AnalysisOptions {
    bool include_rejected = false;  // count REJECTED CVEs in denominators
    bool parallel = true;
    /// Stretch a bounded top bucket to the observed maximum instead of
    /// raising BucketGap (off = parity with the published labels).
    bool auto_extend_top = false;
};

/// Round-half-up to two decimals (the figures' precision).
double round2(double value);

/// Techniques per data source, each technique at most once per source even
/// across multiple components; sorted by descending count, ties by name.
/// Revoked/deprecated techniques never count.
std::vector<DataSourceCount> data_source_ranking(const std::vector<AttackTechnique>& techniques);

/// The three data-source strings that make a technique visible in network
/// telemetry.
extern const std::vector<std::string> kNetworkSensorStrings;

struct NetworkVisibility {
    std::vector<std::string> technique_ids;  // sorted
    std::vector<std::string> tactics;        // union of their tactics, sorted
};

NetworkVisibility network_visible_techniques(
    const std::vector<AttackTechnique>& techniques,
    const std::vector<std::string>& sensor_strings = kNetworkSensorStrings);

struct NetworkCapecCoverage {
    int techniques_with_capec = 0;
    int distinct_capecs = 0;
};

NetworkCapecCoverage network_capec_coverage(const RefGraph& graph,
                                            const std::vector<std::string>& technique_ids);

/// Per-CVE |capecs_for_cve| bucketed over the selected CVE population.
Histogram cve_capec_histogram(const RefGraph& graph, const BucketSpec& spec,
                              const AnalysisOptions& options = {});

/// Per-CVE |techniques_for_cve| bucketed likewise.
Histogram cve_attack_histogram(const RefGraph& graph, const BucketSpec& spec,
                               const AnalysisOptions& options = {});

struct OwaspCount {
    std::string category;
    std::string category_name;
    int cwe_count = 0;
    int capec_count = 0;

    bool operator==(const OwaspCount&) const = default;
};

/// Per OWASP 2021 category: member CWEs present in the catalog and the
/// deduplicated union of their related CAPECs. Throws MissingView1344 when
/// the graph has no OWASP nodes.
std::vector<OwaspCount> owasp_counts(const RefGraph& graph,
                                     const std::vector<OwaspMapping>& owasp);

}  // namespace enumgraph
