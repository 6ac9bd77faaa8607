// Serial reference vs the OpenMP/indexed kernels on a synthetic corpus:
// identification (full scan, indexed, parallel) and per-CVE set-size
// aggregation (serial vs parallel).

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "enumgraph/analysis.hpp"
#include "enumgraph/refgraph.hpp"
#include "enumgraph/vulnid.hpp"

using namespace enumgraph;

namespace {

CpeMatchClause clause_of(const std::string& text, bool vulnerable = true) {
    CpeMatchClause c;
    c.criterion = cpe::Name::parse(text);
    c.vulnerable = vulnerable;
    return c;
}

std::vector<CveEntry> synthetic_cves(int count) {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> vendor(0, 99), product(0, 199), version(1, 9), shape(0, 9);
    std::vector<CveEntry> cves;
    for (int i = 0; i < count; ++i) {
        CveEntry c;
        c.id = "CVE-2020-" + std::to_string(100000 + i);
        int sh = shape(rng);
        ApplicabilityNode root;
        std::string vp = ":v" + std::to_string(vendor(rng)) + ":p" + std::to_string(product(rng));
        if (sh < 5) {
            for (int k = 0; k <= sh % 3; ++k)
                root.matches.push_back(clause_of("cpe:2.3:a" + vp + ":" +
                                                 std::to_string(version(rng)) +
                                                 ".0:*:*:*:*:*:*:*"));
        } else if (sh < 8) {
            CpeMatchClause w = clause_of("cpe:2.3:a" + vp + ":*:*:*:*:*:*:*:*");
            int lo = version(rng);
            w.version_start = VersionBound{std::to_string(lo) + ".0", true};
            w.version_end = VersionBound{std::to_string(lo + 2) + ".0", false};
            root.matches.push_back(w);
        } else {
            root.op = ApplicabilityNode::Op::And;
            ApplicabilityNode app, platform;
            app.matches.push_back(clause_of("cpe:2.3:a" + vp + ":" +
                                            std::to_string(version(rng)) + ".0:*:*:*:*:*:*:*"));
            platform.matches.push_back(clause_of(
                "cpe:2.3:o:osv:os" + std::to_string(product(rng) % 4) + ":*:*:*:*:*:*:*:*",
                false));
            root.children.push_back(app);
            root.children.push_back(platform);
        }
        c.configuration = root;
        cves.push_back(std::move(c));
    }
    return cves;
}

AssetInventory synthetic_inventory(int assets) {
    std::mt19937 rng(2424);
    std::uniform_int_distribution<int> vendor(0, 99), product(0, 199), version(1, 10),
        n_names(1, 6), os(0, 5);
    AssetInventory inv;
    for (int a = 0; a < assets; ++a) {
        AssetInventory::Asset asset;
        asset.label = "asset" + std::to_string(a);
        int n = n_names(rng);
        for (int k = 0; k < n; ++k)
            asset.names.push_back(cpe::Name::parse(
                "cpe:2.3:a:v" + std::to_string(vendor(rng)) + ":p" +
                std::to_string(product(rng)) + ":" + std::to_string(version(rng)) +
                ".0:*:*:*:*:*:*:*"));
        asset.names.push_back(cpe::Name::parse("cpe:2.3:o:osv:os" + std::to_string(os(rng)) +
                                               ":1:*:*:*:*:*:*:*"));
        inv.assets.push_back(std::move(asset));
    }
    return inv;
}

const std::vector<CveEntry>& corpus() {
    static std::vector<CveEntry> cves = synthetic_cves(20000);
    return cves;
}

const AssetInventory& inventory() {
    static AssetInventory inv = synthetic_inventory(50);
    return inv;
}

RefGraph synthetic_graph() {
    std::mt19937 rng(1717);
    std::uniform_int_distribution<int> capec_ref(1, 400), n_refs(0, 4), tech(1, 300);
    std::vector<CweEntry> cwes;
    for (int id = 1; id <= 900; ++id) {
        CweEntry w;
        w.id = id;
        w.name = "cwe" + std::to_string(id);
        int n = n_refs(rng);
        for (int k = 0; k < n; ++k) w.related_capec_ids.push_back(capec_ref(rng));
        sort_unique(w.related_capec_ids);
        cwes.push_back(w);
    }
    std::vector<CapecEntry> capecs;
    for (int id = 1; id <= 400; ++id) {
        CapecEntry c;
        c.id = id;
        c.name = "capec" + std::to_string(id);
        int n = n_refs(rng) / 2;
        for (int k = 0; k < n; ++k) c.technique_ids.push_back("T1" + std::to_string(tech(rng)));
        sort_unique(c.technique_ids);
        capecs.push_back(c);
    }
    std::vector<AttackTechnique> techniques;
    for (int id = 1; id <= 300; ++id) {
        AttackTechnique t;
        t.id = "T1" + std::to_string(id);
        t.name = t.id;
        t.tactics = {"execution"};
        techniques.push_back(t);
    }
    std::vector<CveEntry> cves;
    std::uniform_int_distribution<int> cwe_pick(1, 1100);  // some dangle
    for (int i = 0; i < 150000; ++i) {
        CveEntry c;
        c.id = "CVE-2019-" + std::to_string(100000 + i);
        int n = n_refs(rng) / 2;
        for (int k = 0; k < n; ++k) c.cwe_ids.push_back(cwe_node_id(cwe_pick(rng)));
        sort_unique(c.cwe_ids);
        cves.push_back(std::move(c));
    }
    return RefGraph::build(cves, cwes, capecs, techniques, {}, {});
}

const RefGraph& graph() {
    static RefGraph g = synthetic_graph();
    return g;
}

}  // namespace

static void BM_identify_serial_fullscan(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(identify_vulnerabilities_serial(corpus(), inventory()));
}
BENCHMARK(BM_identify_serial_fullscan)->Unit(benchmark::kMillisecond);

static void BM_identify_parallel_fullscan(benchmark::State& state) {
    IdentifyOptions options;
    options.use_index = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(identify_vulnerabilities(corpus(), inventory(), options));
}
BENCHMARK(BM_identify_parallel_fullscan)->Unit(benchmark::kMillisecond);

static void BM_identify_indexed_parallel(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(identify_vulnerabilities(corpus(), inventory()));
}
BENCHMARK(BM_identify_indexed_parallel)->Unit(benchmark::kMillisecond);

static void BM_capec_histogram_serial(benchmark::State& state) {
    AnalysisOptions options;
    options.parallel = false;
    options.auto_extend_top = true;
    for (auto _ : state)
        benchmark::DoNotOptimize(cve_capec_histogram(graph(), BucketSpec::fig3(), options));
}
BENCHMARK(BM_capec_histogram_serial)->Unit(benchmark::kMillisecond);

static void BM_capec_histogram_parallel(benchmark::State& state) {
    AnalysisOptions options;
    options.auto_extend_top = true;
    for (auto _ : state)
        benchmark::DoNotOptimize(cve_capec_histogram(graph(), BucketSpec::fig3(), options));
}
BENCHMARK(BM_capec_histogram_parallel)->Unit(benchmark::kMillisecond);

static void BM_attack_histogram_parallel(benchmark::State& state) {
    AnalysisOptions options;
    options.auto_extend_top = true;
    for (auto _ : state)
        benchmark::DoNotOptimize(cve_attack_histogram(graph(), BucketSpec::fig4(), options));
}
BENCHMARK(BM_attack_histogram_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
