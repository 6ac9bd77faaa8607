#include <doctest.h>

#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "enumgraph/errors.hpp"
#include "enumgraph/ingest.hpp"
#include "enumgraph/vulnid.hpp"

using namespace enumgraph;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = ENUMGRAPH_FIXTURE_DIR;

cpe::Name name_of(const std::string& text) { return cpe::Name::parse(text); }

CpeMatchClause clause_of(const std::string& criterion, bool vulnerable = true) {
    CpeMatchClause c;
    c.criterion = name_of(criterion);
    c.vulnerable = vulnerable;
    return c;
}

const NvdData& mini_feed() {
    static NvdData d = load_nvd_feeds({kFixtures / "nvd/nvdcve-1.1-mini.json"});
    return d;
}

/// Full deep rendering of a match list so result sets can be compared across
/// the serial, indexed, and parallel paths.
std::string render(const std::vector<VulnMatch>& matches) {
    std::ostringstream out;
    for (const auto& m : matches) {
        out << m.cve_id << '\t' << m.asset_label << '\n';
        for (const auto& e : m.matched_clauses)
            out << "  " << e.clause.criterion.format() << " ~ " << e.name.format() << " ["
                << e.version_verdict << "]\n";
    }
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------- inventory

TEST_CASE("inventory: single-line file") {
    AssetInventory inv = AssetInventory::parse_file(kFixtures / "inventory/log4j.tsv");
    REQUIRE(inv.assets.size() == 1);
    CHECK(inv.assets[0].label == "host1");
    REQUIRE(inv.assets[0].names.size() == 1);
    CHECK(inv.assets[0].names[0].format() == "cpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*");
}

TEST_CASE("inventory: repeated labels merge, comments and blanks are skipped") {
    AssetInventory inv = AssetInventory::parse_file(kFixtures / "inventory/multi.tsv");
    REQUIRE(inv.assets.size() == 3);  // first-seen order
    CHECK(inv.assets[0].label == "web01");
    CHECK(inv.assets[0].names.size() == 3);  // merged across the blank line
    CHECK(inv.assets[1].label == "db01");
    CHECK(inv.assets[1].names.size() == 2);
    CHECK(inv.assets[2].label == "old01");
    CHECK(inv.assets[2].names.size() == 1);
}

TEST_CASE("inventory: rejection carries the offending line number") {
    try {
        AssetInventory::parse_file(kFixtures / "inventory/bad.tsv");
        FAIL("expected InventoryError");
    } catch (const InventoryError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("TAB") != std::string::npos);
    }

    try {
        AssetInventory::parse_file(kFixtures / "inventory/wildcard.tsv");
        FAIL("expected InventoryError");
    } catch (const InventoryError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("product") != std::string::npos);
    }

    CHECK_THROWS_AS(AssetInventory::parse_file(kFixtures / "inventory/empty.tsv"),
                    InventoryError);
}

TEST_CASE("inventory: CRLF lines, empty labels, and bad CPE strings") {
    std::istringstream crlf("host1\tcpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*\r\n");
    AssetInventory inv = AssetInventory::parse(crlf);
    CHECK(inv.assets[0].names[0].version().value() == "2.0");

    std::istringstream nolabel("\tcpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*\n");
    CHECK_THROWS_AS(AssetInventory::parse(nolabel), InventoryError);

    std::istringstream badcpe("h\tcpe:2.3:a:only:four\n");
    try {
        AssetInventory::parse(badcpe);
        FAIL("expected InventoryError");
    } catch (const InventoryError& e) {
        CHECK(e.line() == 1);
    }
}

// ---------------------------------------------------------------- clause level

TEST_CASE("clause: exact criterion, no bounds") {
    CpeMatchClause c = clause_of("cpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*");
    CHECK(evaluate_clause(c, name_of("cpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*")));
    // update differs
    CHECK_FALSE(evaluate_clause(c, name_of("cpe:2.3:a:apache:log4j:2.0:rc2:*:*:*:*:*:*")));
    // vendor differs
    CHECK_FALSE(evaluate_clause(c, name_of("cpe:2.3:a:eclipse:log4j:2.0:rc1:*:*:*:*:*:*")));
}

TEST_CASE("clause: version window on an ANY-version criterion") {
    CpeMatchClause c = clause_of("cpe:2.3:a:apache:log4j:*:*:*:*:*:*:*:*");
    c.version_start = VersionBound{"2.0.1", true};
    c.version_end = VersionBound{"2.15.0", false};

    auto log4j = [](const char* v) {
        return cpe::Name::parse(std::string("cpe:2.3:a:apache:log4j:") + v +
                                ":*:*:*:*:*:*:*");
    };
    CHECK(evaluate_clause(c, log4j("2.14.1")));
    CHECK(evaluate_clause(c, log4j("2.0.1")));        // inclusive start
    CHECK_FALSE(evaluate_clause(c, log4j("2.15.0")));  // exclusive end
    CHECK_FALSE(evaluate_clause(c, log4j("2.0")));     // before the window
    CHECK_FALSE(evaluate_clause(c, log4j("2.16.0")));

    // an ANY inventory version only satisfies a window when explicitly allowed
    CHECK_FALSE(evaluate_clause(c, log4j("*")));
    CHECK(evaluate_clause(c, log4j("*"), /*assume_any_version_matches=*/true));
    // NA never does
    CHECK_FALSE(evaluate_clause(c, log4j("-")));
    CHECK_FALSE(evaluate_clause(c, log4j("-"), true));
}

TEST_CASE("clause windows agree with an index-based oracle over a version grid") {
    // ascending by construction; indices stand in for order
    const std::vector<std::string> grid{"1.0", "1.5", "2.0", "2.0.1", "2.5", "3.0", "10.0"};
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        REQUIRE(cpe::compare_versions(grid[i], grid[i + 1]) == cpe::VersionOrder::Less);

    int checked = 0;
    for (int si = -1; si < static_cast<int>(grid.size()); ++si)
        for (int s_incl = 0; s_incl < 2; ++s_incl)
            for (int ei = -1; ei < static_cast<int>(grid.size()); ++ei)
                for (int e_incl = 0; e_incl < 2; ++e_incl)
                    for (std::size_t vi = 0; vi < grid.size(); ++vi) {
                        CpeMatchClause c = clause_of("cpe:2.3:a:v:p:*:*:*:*:*:*:*:*");
                        if (si >= 0) c.version_start = VersionBound{grid[si], s_incl == 1};
                        if (ei >= 0) c.version_end = VersionBound{grid[ei], e_incl == 1};
                        bool want =
                            (si < 0 || static_cast<int>(vi) > si ||
                             (static_cast<int>(vi) == si && s_incl == 1)) &&
                            (ei < 0 || static_cast<int>(vi) < ei ||
                             (static_cast<int>(vi) == ei && e_incl == 1));
                        cpe::Name n = name_of("cpe:2.3:a:v:p:" + grid[vi] + ":*:*:*:*:*:*:*");
                        CHECK_MESSAGE(evaluate_clause(c, n) == want, "version ", grid[vi],
                                      " against [", si, ",", ei, "]");
                        ++checked;
                    }
    CHECK(checked == 8 * 2 * 8 * 2 * 7);
}

// ---------------------------------------------------------------- tree level

namespace {

AssetInventory one_asset(const std::string& label, const std::vector<std::string>& names) {
    AssetInventory inv;
    AssetInventory::Asset a;
    a.label = label;
    for (const auto& n : names) a.names.push_back(name_of(n));
    inv.assets.push_back(std::move(a));
    return inv;
}

}  // namespace

TEST_CASE("tree: plain OR accepts on any matched clause") {
    ApplicabilityNode node;
    node.op = ApplicabilityNode::Op::Or;
    node.matches.push_back(clause_of("cpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*"));
    node.matches.push_back(clause_of("cpe:2.3:a:apache:log4j:2.0:rc2:*:*:*:*:*:*"));

    auto v = evaluate_applicability(node, one_asset("h", {"cpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*"}));
    CHECK(v.applies);
    REQUIRE(v.evidence.size() == 1);
    CHECK(v.evidence[0].asset_label == "h");
    CHECK(v.evidence[0].version_verdict == "no-bounds");

    // both clauses can be satisfied by different names of one asset
    auto both = evaluate_applicability(
        node, one_asset("h", {"cpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*",
                              "cpe:2.3:a:apache:log4j:2.0:rc2:*:*:*:*:*:*"}));
    CHECK(both.applies);
    CHECK(both.evidence.size() == 2);

    auto miss = evaluate_applicability(node, one_asset("h", {"cpe:2.3:a:apache:tomcat:9.0:*:*:*:*:*:*:*"}));
    CHECK_FALSE(miss.applies);
    CHECK(miss.evidence.empty());
}

TEST_CASE("tree: AND of app and platform, with a non-vulnerable platform clause") {
    // the CVE-2021-3100 shape: AND( OR(app window), OR(platform, vulnerable=false) )
    const CveEntry* cve = nullptr;
    for (const auto& c : mini_feed().cves)
        if (c.id == "CVE-2021-3100") cve = &c;
    REQUIRE(cve != nullptr);
    const ApplicabilityNode& tree = *cve->configuration;

    auto full = evaluate_applicability(
        tree, one_asset("db01", {"cpe:2.3:a:examplesoft:webapp:1.5:*:*:*:*:*:*:*",
                                 "cpe:2.3:o:debian:debian_linux:11.0:*:*:*:*:*:*:*"}));
    CHECK(full.applies);
    REQUIRE(full.evidence.size() == 1);  // platform clause satisfies but never testifies
    CHECK(full.evidence[0].clause.criterion.product().value() == "webapp");
    CHECK(full.evidence[0].version_verdict == "in-range");

    // app alone: the AND fails without its platform leg
    auto app_only = evaluate_applicability(
        tree, one_asset("db01", {"cpe:2.3:a:examplesoft:webapp:1.5:*:*:*:*:*:*:*"}));
    CHECK_FALSE(app_only.applies);
    CHECK(app_only.evidence.empty());

    // platform alone: structurally half-true, and crucially evidence-free
    auto os_only = evaluate_applicability(
        tree, one_asset("db01", {"cpe:2.3:o:debian:debian_linux:11.0:*:*:*:*:*:*:*"}));
    CHECK_FALSE(os_only.applies);
    CHECK(os_only.evidence.empty());
}

TEST_CASE("tree: a node with neither children nor clauses is malformed") {
    ApplicabilityNode empty;
    CHECK_THROWS_AS(
        evaluate_applicability(empty, one_asset("h", {"cpe:2.3:a:v:p:1:*:*:*:*:*:*:*"})),
        MalformedNode);
}

TEST_CASE("randomized: tree evaluation agrees with an independent recursive oracle") {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> product(0, 4), coin(0, 1), small(0, 2);

    // clause & name universe: five products of one vendor, version windows off
    auto criterion = [&](int p) {
        return "cpe:2.3:a:vend:prod" + std::to_string(p) + ":*:*:*:*:*:*:*:*";
    };
    auto inv_name = [&](int p) {
        return "cpe:2.3:a:vend:prod" + std::to_string(p) + ":1.0:*:*:*:*:*:*:*";
    };

    std::function<ApplicabilityNode(int)> gen = [&](int depth) {
        ApplicabilityNode n;
        n.op = coin(rng) ? ApplicabilityNode::Op::And : ApplicabilityNode::Op::Or;
        int kids = depth < 3 ? small(rng) : 0;
        for (int i = 0; i < kids; ++i) n.children.push_back(gen(depth + 1));
        int leaves = small(rng);
        if (kids == 0 && leaves == 0) leaves = 1;  // keep the node well-formed
        for (int i = 0; i < leaves; ++i)
            n.matches.push_back(clause_of(criterion(product(rng)), coin(rng) == 1));
        return n;
    };

    for (int round = 0; round < 1200; ++round) {
        ApplicabilityNode tree = gen(1);

        std::set<int> owned;
        int n_owned = small(rng) + 1;
        for (int i = 0; i < n_owned; ++i) owned.insert(product(rng));
        std::vector<std::string> names;
        for (int p : owned) names.push_back(inv_name(p));
        AssetInventory inv = one_asset("box", names);

        // independent evaluator: clause truth is just product ownership
        std::function<bool(const ApplicabilityNode&)> oracle =
            [&](const ApplicabilityNode& n) -> bool {
            auto sat = [&](const CpeMatchClause& c) {
                return owned.count(c.criterion.product().value().back() - '0') > 0;
            };
            if (n.op == ApplicabilityNode::Op::And) {
                for (const auto& ch : n.children)
                    if (!oracle(ch)) return false;
                for (const auto& m : n.matches)
                    if (!sat(m)) return false;
                return true;
            }
            for (const auto& ch : n.children)
                if (oracle(ch)) return true;
            for (const auto& m : n.matches)
                if (sat(m)) return true;
            return false;
        };

        ApplicabilityVerdict got = evaluate_applicability(tree, inv);
        CHECK(got.applies == oracle(tree));
        if (!got.applies) CHECK(got.evidence.empty());
        for (const auto& e : got.evidence) {
            CHECK(e.clause.vulnerable);
            CHECK(evaluate_clause(e.clause, e.name));  // every pair replays
        }
    }
}

// ---------------------------------------------------------------- identification

TEST_CASE("identify: the Log4Shell asset is found with replayable evidence") {
    AssetInventory inv = AssetInventory::parse_file(kFixtures / "inventory/log4j.tsv");
    std::vector<VulnMatch> matches = identify_vulnerabilities(mini_feed().cves, inv);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].cve_id == "CVE-2021-44228");
    CHECK(matches[0].asset_label == "host1");
    REQUIRE(matches[0].matched_clauses.size() == 1);
    const EvidencePair& e = matches[0].matched_clauses[0];
    CHECK(e.version_verdict == "no-bounds");
    CHECK(evaluate_clause(e.clause, e.name));
}

TEST_CASE("identify: mixed inventory picks up each expected pair, in order") {
    AssetInventory inv = AssetInventory::parse_file(kFixtures / "inventory/multi.tsv");
    std::vector<VulnMatch> matches = identify_vulnerabilities(mini_feed().cves, inv);
    REQUIRE(matches.size() == 4);
    CHECK(matches[0].cve_id == "CVE-1999-0001");  // via converted 2.2 URI
    CHECK(matches[0].asset_label == "old01");
    CHECK(matches[1].cve_id == "CVE-2020-0601");
    CHECK(matches[1].asset_label == "web01");
    CHECK(matches[2].cve_id == "CVE-2020-8285");
    CHECK(matches[2].asset_label == "web01");
    CHECK(matches[2].matched_clauses.at(0).version_verdict == "in-range");
    CHECK(matches[3].cve_id == "CVE-2021-3100");
    CHECK(matches[3].asset_label == "db01");
    // log4j 2.16.0 on web01 stayed clean: no CVE-2021-44228 row
    for (const auto& m : matches) CHECK(m.cve_id != "CVE-2021-44228");
}

TEST_CASE("identify: rejected entries never match") {
    CveEntry e;
    e.id = "CVE-2021-99999";
    e.status = CveStatus::Rejected;
    ApplicabilityNode node;
    node.matches.push_back(clause_of("cpe:2.3:a:apache:log4j:2.0:rc1:*:*:*:*:*:*"));
    e.configuration = node;
    AssetInventory inv = AssetInventory::parse_file(kFixtures / "inventory/log4j.tsv");

    CHECK(identify_vulnerabilities({e}, inv).empty());
    e.status = CveStatus::Published;
    CHECK(identify_vulnerabilities({e}, inv).size() == 1);
}

TEST_CASE("identify: ANY-version inventory names only count when assumption is on") {
    AssetInventory inv = one_asset("vague", {"cpe:2.3:a:apache:log4j:*:*:*:*:*:*:*:*"});
    IdentifyOptions opt;
    CHECK(identify_vulnerabilities(mini_feed().cves, inv, opt).empty());

    opt.assume_any_version_matches = true;
    std::vector<VulnMatch> matches = identify_vulnerabilities(mini_feed().cves, inv, opt);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].cve_id == "CVE-2021-44228");
    bool assumed = false;
    for (const auto& e : matches[0].matched_clauses)
        assumed |= e.version_verdict == "assumed-any-version";
    CHECK(assumed);
}

TEST_CASE("identify: malformed trees and undecidable comparisons skip with a warning") {
    std::vector<CveEntry> cves = mini_feed().cves;
    CveEntry broken;
    broken.id = "CVE-2021-77777";
    broken.configuration = ApplicabilityNode{};  // no children, no clauses
    cves.push_back(broken);

    CveEntry undecidable;
    undecidable.id = "CVE-2021-77778";
    ApplicabilityNode node;
    node.matches.push_back(clause_of("cpe:2.3:a:apache:log4j:2.0*:*:*:*:*:*:*:*"));
    undecidable.configuration = node;
    cves.push_back(undecidable);

    // an inventory version with its own wildcard meets the wildcarded clause
    AssetInventory inv = one_asset("host1", {"cpe:2.3:a:apache:log4j:*0*:*:*:*:*:*:*:*"});

    for (bool parallel : {false, true}) {
        std::vector<std::string> warnings;
        IdentifyOptions opt;
        opt.parallel = parallel;
        std::vector<VulnMatch> matches = identify_vulnerabilities(cves, inv, opt, &warnings);
        CHECK(matches.empty());
        REQUIRE(warnings.size() == 2);
        CHECK(warnings[0].find("CVE-2021-77777 skipped") != std::string::npos);
        CHECK(warnings[1].find("CVE-2021-77778 skipped") != std::string::npos);
    }

    std::vector<std::string> serial_warnings;
    identify_vulnerabilities_serial(cves, inv, false, &serial_warnings);
    CHECK(serial_warnings.size() == 2);
}

TEST_CASE("identify: serial, indexed, and full-scan parallel paths agree on fixtures") {
    AssetInventory inv = AssetInventory::parse_file(kFixtures / "inventory/multi.tsv");
    std::string serial = render(identify_vulnerabilities_serial(mini_feed().cves, inv));

    for (bool use_index : {false, true})
        for (bool parallel : {false, true}) {
            IdentifyOptions opt;
            opt.use_index = use_index;
            opt.parallel = parallel;
            CHECK(render(identify_vulnerabilities(mini_feed().cves, inv, opt)) == serial);
        }
}

namespace {

/// Synthetic corpus: windows, exact versions, platform ANDs, a few rejected.
std::vector<CveEntry> synthetic_cves(std::mt19937& rng, int count) {
    std::uniform_int_distribution<int> vendor(0, 9), product(0, 19), version(1, 9),
        shape(0, 9);
    std::vector<CveEntry> cves;
    for (int i = 0; i < count; ++i) {
        CveEntry c;
        c.id = "CVE-2020-" + std::to_string(20000 + i);
        int sh = shape(rng);
        ApplicabilityNode root;
        std::string vp = ":v" + std::to_string(vendor(rng)) + ":p" + std::to_string(product(rng));
        if (sh < 5) {  // OR of exact versions
            for (int k = 0; k <= sh % 3; ++k)
                root.matches.push_back(clause_of("cpe:2.3:a" + vp + ":" +
                                                 std::to_string(version(rng)) +
                                                 ".0:*:*:*:*:*:*:*"));
        } else if (sh < 8) {  // version window
            CpeMatchClause w = clause_of("cpe:2.3:a" + vp + ":*:*:*:*:*:*:*:*");
            int lo = version(rng);
            w.version_start = VersionBound{std::to_string(lo) + ".0", true};
            w.version_end = VersionBound{std::to_string(lo + 2) + ".0", false};
            root.matches.push_back(w);
        } else {  // app AND platform
            root.op = ApplicabilityNode::Op::And;
            ApplicabilityNode app, platform;
            app.matches.push_back(clause_of("cpe:2.3:a" + vp + ":" +
                                            std::to_string(version(rng)) + ".0:*:*:*:*:*:*:*"));
            platform.matches.push_back(clause_of(
                "cpe:2.3:o:osv:os" + std::to_string(product(rng) % 4) + ":*:*:*:*:*:*:*:*",
                /*vulnerable=*/false));
            root.children.push_back(app);
            root.children.push_back(platform);
        }
        c.configuration = root;
        if (sh == 9 && i % 7 == 0) c.status = CveStatus::Rejected;
        cves.push_back(std::move(c));
    }
    return cves;
}

AssetInventory synthetic_inventory(std::mt19937& rng, int assets) {
    std::uniform_int_distribution<int> vendor(0, 9), product(0, 19), version(1, 10),
        n_names(1, 4), os(0, 5);
    AssetInventory inv;
    for (int a = 0; a < assets; ++a) {
        AssetInventory::Asset asset;
        asset.label = "asset" + std::to_string(a);
        int n = n_names(rng);
        for (int k = 0; k < n; ++k)
            asset.names.push_back(
                name_of("cpe:2.3:a:v" + std::to_string(vendor(rng)) + ":p" +
                        std::to_string(product(rng)) + ":" + std::to_string(version(rng)) +
                        ".0:*:*:*:*:*:*:*"));
        asset.names.push_back(name_of("cpe:2.3:o:osv:os" + std::to_string(os(rng)) +
                                      ":1:*:*:*:*:*:*:*"));
        inv.assets.push_back(std::move(asset));
    }
    return inv;
}

}  // namespace

TEST_CASE("randomized: the indexed parallel kernel equals the serial reference") {
    std::mt19937 rng(77001);
    std::vector<CveEntry> cves = synthetic_cves(rng, 1500);
    AssetInventory inv = synthetic_inventory(rng, 25);

    std::string serial = render(identify_vulnerabilities_serial(cves, inv));
    CHECK_FALSE(serial.empty());  // corpus is dense enough to actually match

    IdentifyOptions opt;
    CHECK(render(identify_vulnerabilities(cves, inv, opt)) == serial);
    opt.use_index = false;
    CHECK(render(identify_vulnerabilities(cves, inv, opt)) == serial);
    opt.parallel = false;
    CHECK(render(identify_vulnerabilities(cves, inv, opt)) == serial);

    // with the assumption flag flipped the paths still agree with each other
    std::string serial_any = render(identify_vulnerabilities_serial(cves, inv, true));
    IdentifyOptions any;
    any.assume_any_version_matches = true;
    CHECK(render(identify_vulnerabilities(cves, inv, any)) == serial_any);
}

TEST_CASE("randomized: growing the inventory never loses existing matches") {
    std::mt19937 rng(77002);
    std::vector<CveEntry> cves = synthetic_cves(rng, 400);
    AssetInventory small = synthetic_inventory(rng, 10);
    AssetInventory large = small;
    AssetInventory extra = synthetic_inventory(rng, 5);
    for (auto& a : extra.assets) {
        a.label = "late-" + a.label;
        large.assets.push_back(a);
    }

    auto key = [](const VulnMatch& m) { return m.cve_id + "/" + m.asset_label; };
    std::set<std::string> before, after;
    for (const auto& m : identify_vulnerabilities(cves, small)) before.insert(key(m));
    for (const auto& m : identify_vulnerabilities(cves, large)) after.insert(key(m));
    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
}
