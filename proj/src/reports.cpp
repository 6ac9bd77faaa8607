#include "enumgraph/reports.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

namespace enumgraph::reports {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string two_decimals(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

std::string four_decimals(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::string provenance_lines(const std::vector<Snapshot>& snapshots) {
    std::string out;
    for (const auto& s : snapshots)
        out += std::string("# snapshot ") + source_kind_name(s.source) + " version=" +
               (s.version_label.empty() ? "?" : s.version_label) + " date=" +
               (s.retrieval_date.empty() ? "?" : s.retrieval_date) + " sha256=" +
               (s.content_digest.empty() ? "?" : s.content_digest) + "\n";
    return out;
}

ordered_json provenance_json(const std::vector<Snapshot>& snapshots) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : snapshots)
        arr.push_back({{"source", source_kind_name(s.source)},
                       {"version_label", s.version_label},
                       {"retrieval_date", s.retrieval_date},
                       {"content_digest", s.content_digest}});
    return arr;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string table3_csv(const std::vector<DataSourceCount>& ranking,
                       const std::vector<Snapshot>& snapshots) {
    std::string out = provenance_lines(snapshots);
    out += "data_source,technique_count\n";
    for (const auto& row : ranking)
        out += csv_field(row.data_source) + "," + std::to_string(row.technique_count) + "\n";
    return out;
}

std::string table3_json(const std::vector<DataSourceCount>& ranking, std::size_t total_techniques,
                        const std::vector<Snapshot>& snapshots) {
    ordered_json doc;
    doc["title"] = "table3";
    doc["snapshots"] = provenance_json(snapshots);
    doc["total_techniques"] = total_techniques;
    ordered_json rows = ordered_json::array();
    for (const auto& row : ranking)
        rows.push_back(
            {{"data_source", row.data_source}, {"technique_count", row.technique_count}});
    doc["rows"] = std::move(rows);
    return dump(doc);
}

std::string histogram_csv(const Histogram& histogram) {
    std::string out = provenance_lines(histogram.snapshot_set);
    out += "bucket,count,percent\n";
    for (std::size_t i = 0; i < histogram.labels.size(); ++i)
        out += csv_field(histogram.labels[i]) + "," + std::to_string(histogram.counts[i]) + "," +
               two_decimals(histogram.percentages[i]) + "\n";
    return out;
}

std::string histogram_json(const std::string& title, const Histogram& histogram) {
    ordered_json doc;
    doc["title"] = title;
    doc["snapshots"] = provenance_json(histogram.snapshot_set);
    doc["denominator"] = histogram.denominator;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < histogram.labels.size(); ++i)
        rows.push_back({{"bucket", histogram.labels[i]},
                        {"count", histogram.counts[i]},
                        {"percent", two_decimals(histogram.percentages[i])}});
    doc["rows"] = std::move(rows);
    return dump(doc);
}

std::string fig5_csv(const std::vector<OwaspCount>& counts,
                     const std::vector<Snapshot>& snapshots) {
    std::string out = provenance_lines(snapshots);
    out += "category,category_name,cwe_count,capec_count\n";
    for (const auto& row : counts)
        out += row.category + "," + csv_field(row.category_name) + "," +
               std::to_string(row.cwe_count) + "," + std::to_string(row.capec_count) + "\n";
    return out;
}

std::string fig5_json(const std::vector<OwaspCount>& counts,
                      const std::vector<Snapshot>& snapshots) {
    ordered_json doc;
    doc["title"] = "fig5";
    doc["snapshots"] = provenance_json(snapshots);
    ordered_json rows = ordered_json::array();
    for (const auto& row : counts)
        rows.push_back({{"category", row.category},
                        {"category_name", row.category_name},
                        {"cwe_count", row.cwe_count},
                        {"capec_count", row.capec_count}});
    doc["rows"] = std::move(rows);
    return dump(doc);
}

std::string netvis_json(const NetvisReport& report, const std::vector<Snapshot>& snapshots) {
    ordered_json doc;
    doc["title"] = "netvis";
    doc["snapshots"] = provenance_json(snapshots);
    doc["total_techniques"] = report.total_techniques;
    doc["network_visible_techniques"] = report.visibility.technique_ids.size();
    doc["tactics_covered"] = report.visibility.tactics.size();
    doc["total_tactics"] = report.total_tactics;
    doc["techniques_with_capec"] = report.capec_coverage.techniques_with_capec;
    doc["distinct_capecs"] = report.capec_coverage.distinct_capecs;
    doc["capec_catalog_version"] = report.capec_catalog_version;
    doc["technique_ids"] = report.visibility.technique_ids;
    doc["tactics"] = report.visibility.tactics;
    return dump(doc);
}

std::string netvis_csv(const NetvisReport& report, const std::vector<Snapshot>& snapshots) {
    std::string out = provenance_lines(snapshots);
    out += "metric,value\n";
    out += "total_techniques," + std::to_string(report.total_techniques) + "\n";
    out += "network_visible_techniques," + std::to_string(report.visibility.technique_ids.size()) +
           "\n";
    out += "tactics_covered," + std::to_string(report.visibility.tactics.size()) + "\n";
    out += "total_tactics," + std::to_string(report.total_tactics) + "\n";
    out += "techniques_with_capec," + std::to_string(report.capec_coverage.techniques_with_capec) +
           "\n";
    out += "distinct_capecs," + std::to_string(report.capec_coverage.distinct_capecs) + "\n";
    return out;
}

std::string coverage_json(double coverage, std::size_t active_cwes,
                          const std::vector<Snapshot>& snapshots) {
    ordered_json doc;
    doc["title"] = "coverage";
    doc["snapshots"] = provenance_json(snapshots);
    doc["active_cwes"] = active_cwes;
    doc["cwe_capec_coverage"] = four_decimals(coverage);
    return dump(doc);
}

std::string coverage_csv(double coverage, std::size_t active_cwes,
                         const std::vector<Snapshot>& snapshots) {
    std::string out = provenance_lines(snapshots);
    out += "metric,value\n";
    out += "active_cwes," + std::to_string(active_cwes) + "\n";
    out += "cwe_capec_coverage," + four_decimals(coverage) + "\n";
    return out;
}

std::string identify_json(const std::vector<VulnMatch>& matches,
                          const std::vector<Snapshot>& snapshots) {
    ordered_json doc;
    doc["title"] = "identify";
    doc["snapshots"] = provenance_json(snapshots);
    ordered_json rows = ordered_json::array();
    for (const auto& m : matches) {
        ordered_json clauses = ordered_json::array();
        for (const auto& e : m.matched_clauses) {
            ordered_json clause;
            clause["criterion"] = e.clause.criterion.format();
            clause["matched_name"] = e.name.format();
            clause["version_verdict"] = e.version_verdict;
            if (e.clause.version_start)
                clause["version_start"] = {{"text", e.clause.version_start->text},
                                           {"inclusive", e.clause.version_start->inclusive}};
            if (e.clause.version_end)
                clause["version_end"] = {{"text", e.clause.version_end->text},
                                         {"inclusive", e.clause.version_end->inclusive}};
            clauses.push_back(std::move(clause));
        }
        rows.push_back({{"cve_id", m.cve_id},
                        {"asset_label", m.asset_label},
                        {"matched_clauses", std::move(clauses)}});
    }
    doc["matches"] = std::move(rows);
    return dump(doc);
}

std::string identify_csv(const std::vector<VulnMatch>& matches,
                         const std::vector<Snapshot>& snapshots) {
    std::string out = provenance_lines(snapshots);
    out += "cve_id,asset_label,matched_criterion\n";
    for (const auto& m : matches)
        for (const auto& e : m.matched_clauses)
            out += m.cve_id + "," + csv_field(m.asset_label) + "," +
                   csv_field(e.clause.criterion.format()) + "\n";
    return out;
}

}  // namespace enumgraph::reports
