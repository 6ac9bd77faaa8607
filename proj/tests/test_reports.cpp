#include <doctest.h>

#include <filesystem>
#include <nlohmann/json.hpp>

#include "enumgraph/analysis.hpp"
#include "enumgraph/ingest.hpp"
#include "enumgraph/reports.hpp"
#include "enumgraph/vulnid.hpp"

using namespace enumgraph;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = ENUMGRAPH_FIXTURE_DIR;

struct FixtureSet {
    NvdData nvd;
    CweData cwe;
    CapecData capec;
    AttackData attack;
};

const FixtureSet& fixture_set() {
    static FixtureSet s{
        load_nvd_feeds({kFixtures / "nvd/nvdcve-1.1-mini.json"}),
        load_cwe_catalog(kFixtures / "cwe/cwec-mini.xml"),
        load_capec_catalog(kFixtures / "capec/capec-mini.xml"),
        load_attack_bundle(kFixtures / "attack/attack-mini.json"),
    };
    return s;
}

std::vector<Snapshot> fixture_snapshots() {
    const FixtureSet& s = fixture_set();
    return {s.nvd.snapshot, s.cwe.snapshot, s.capec.snapshot, s.attack.snapshot};
}

RefGraph fixture_graph() {
    const FixtureSet& s = fixture_set();
    return RefGraph::build(s.nvd.cves, s.cwe.cwes, s.capec.capecs, s.attack.techniques,
                           s.cwe.owasp, fixture_snapshots());
}

}  // namespace

TEST_CASE("identical inputs yield identical report bytes") {
    auto run = [] {
        RefGraph g = fixture_graph();
        std::vector<std::string> outs;
        outs.push_back(reports::table3_csv(data_source_ranking(fixture_set().attack.techniques),
                                           g.snapshots()));
        outs.push_back(
            reports::histogram_json("fig3", cve_capec_histogram(g, BucketSpec::fig3())));
        outs.push_back(
            reports::fig5_json(owasp_counts(g, fixture_set().cwe.owasp), g.snapshots()));
        return outs;
    };
    CHECK(run() == run());
}

TEST_CASE("CSV reports open with one provenance line per snapshot") {
    std::string csv = reports::table3_csv(data_source_ranking(fixture_set().attack.techniques),
                                          fixture_snapshots());
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> headers;
    while (std::getline(in, line) && line.rfind("# snapshot ", 0) == 0) headers.push_back(line);
    REQUIRE(headers.size() == 4);
    CHECK(headers[0].find("# snapshot nvd") == 0);
    CHECK(headers[1].find("# snapshot cwe version=4.6") == 0);
    CHECK(headers[1].find("sha256=") != std::string::npos);
    CHECK(headers[3].find("# snapshot attack") == 0);
    CHECK(line == "data_source,technique_count");  // then the real header
}

TEST_CASE("JSON reports embed the same provenance as a snapshots array") {
    std::string text = reports::histogram_json("fig3", cve_capec_histogram(fixture_graph(),
                                                                           BucketSpec::fig3()));
    nlohmann::json doc = nlohmann::json::parse(text);
    CHECK(doc["title"] == "fig3");
    REQUIRE(doc["snapshots"].size() == 4);
    CHECK(doc["snapshots"][1]["source"] == "cwe");
    CHECK(doc["snapshots"][1]["version_label"] == "4.6");
    CHECK(doc["snapshots"][1]["content_digest"].get<std::string>().size() == 64);
    CHECK(doc["denominator"] == 5);
    CHECK(doc["rows"][0]["bucket"] == "0");
    CHECK(doc["rows"][0]["count"] == 3);
    CHECK(doc["rows"][0]["percent"] == "60.00");
}

TEST_CASE("histogram CSV keeps two-decimal percentages") {
    std::string csv = reports::histogram_csv(cve_capec_histogram(fixture_graph(),
                                                                 BucketSpec::fig3()));
    CHECK(csv.find("0,3,60.00\n") != std::string::npos);
    CHECK(csv.find("1-2,1,20.00\n") != std::string::npos);
    CHECK(csv.find("16-59,0,0.00\n") != std::string::npos);
}

TEST_CASE("CSV fields with commas or quotes are quoted and escaped") {
    std::vector<OwaspCount> rows{{"A1", "Injection, \"quoted\"", 3, 4}};
    std::string csv = reports::fig5_csv(rows, {});
    CHECK(csv.find("A1,\"Injection, \"\"quoted\"\"\",3,4\n") != std::string::npos);

    // plain names stay unquoted
    std::string plain = reports::fig5_csv({{"A2", "Cryptographic Failures", 1, 2}}, {});
    CHECK(plain.find("A2,Cryptographic Failures,1,2\n") != std::string::npos);
}

TEST_CASE("network-visibility report carries counts, ids, and the catalog version") {
    RefGraph g = fixture_graph();
    reports::NetvisReport r;
    for (const auto& t : fixture_set().attack.techniques)
        if (!t.revoked && !t.deprecated) ++r.total_techniques;
    r.visibility = network_visible_techniques(fixture_set().attack.techniques);
    r.total_tactics = fixture_set().attack.tactics.size();
    r.capec_coverage = network_capec_coverage(g, r.visibility.technique_ids);
    r.capec_catalog_version = fixture_set().capec.catalog_version;

    nlohmann::json doc = nlohmann::json::parse(reports::netvis_json(r, g.snapshots()));
    CHECK(doc["total_techniques"] == 5);
    CHECK(doc["network_visible_techniques"] == 4);
    CHECK(doc["tactics_covered"] == 2);
    CHECK(doc["total_tactics"] == 14);
    CHECK(doc["techniques_with_capec"] == 2);
    CHECK(doc["distinct_capecs"] == 2);
    CHECK(doc["capec_catalog_version"] == "3.6");
    CHECK(doc["technique_ids"][0] == "T1001");

    std::string csv = reports::netvis_csv(r, g.snapshots());
    CHECK(csv.find("network_visible_techniques,4\n") != std::string::npos);
    CHECK(csv.find("total_tactics,14\n") != std::string::npos);
}

TEST_CASE("coverage report uses four decimals") {
    RefGraph g = fixture_graph();
    std::string json = reports::coverage_json(g.cwe_capec_coverage(),
                                              g.nodes_of_kind(NodeKind::Cwe).size(),
                                              g.snapshots());
    nlohmann::json doc = nlohmann::json::parse(json);
    CHECK(doc["cwe_capec_coverage"] == "0.5000");
    CHECK(doc["active_cwes"] == 6);
    CHECK(reports::coverage_csv(1.0 / 3.0, 3, {}).find("cwe_capec_coverage,0.3333\n") !=
          std::string::npos);
}

TEST_CASE("identification report replays criterion, matched name, and bounds") {
    AssetInventory inv = AssetInventory::parse_file(kFixtures / "inventory/multi.tsv");
    std::vector<VulnMatch> matches = identify_vulnerabilities(fixture_set().nvd.cves, inv);
    REQUIRE(matches.size() == 4);

    nlohmann::json doc =
        nlohmann::json::parse(reports::identify_json(matches, fixture_snapshots()));
    REQUIRE(doc["matches"].size() == 4);
    const auto& curl = doc["matches"][2];  // CVE-2020-8285 on web01
    CHECK(curl["cve_id"] == "CVE-2020-8285");
    CHECK(curl["asset_label"] == "web01");
    const auto& clause = curl["matched_clauses"][0];
    CHECK(clause["criterion"] == "cpe:2.3:a:haxx:curl:*:*:*:*:*:*:*:*");
    CHECK(clause["matched_name"] == "cpe:2.3:a:haxx:curl:7.50.0:*:*:*:*:*:*:*");
    CHECK(clause["version_verdict"] == "in-range");
    CHECK(clause["version_start"]["text"] == "7.21.0");
    CHECK(clause["version_start"]["inclusive"] == true);
    CHECK(clause["version_end"]["text"] == "7.73.0");

    std::string csv = reports::identify_csv(matches, fixture_snapshots());
    CHECK(csv.find("cve_id,asset_label,matched_criterion\n") != std::string::npos);
    CHECK(csv.find("CVE-2021-3100,db01,cpe:2.3:a:examplesoft:webapp:*:*:*:*:*:*:*:*\n") !=
          std::string::npos);
}
