#pragma once

#include <string>
#include <vector>

#include "enumgraph/analysis.hpp"
#include "enumgraph/vulnid.hpp"

namespace enumgraph::reports {

/// Deterministic report bodies: identical inputs yield identical bytes.
/// CSVs start with `# snapshot ...` provenance comment lines; JSON reports
/// embed the same provenance as a "snapshots" array.

std::string table3_csv(const std::vector<DataSourceCount>& ranking,
                       const std::vector<Snapshot>& snapshots);
std::string table3_json(const std::vector<DataSourceCount>& ranking, std::size_t total_techniques,
                        const std::vector<Snapshot>& snapshots);

std::string histogram_csv(const Histogram& histogram);
std::string histogram_json(const std::string& title, const Histogram& histogram);

std::string fig5_csv(const std::vector<OwaspCount>& counts, const std::vector<Snapshot>& snapshots);
std::string fig5_json(const std::vector<OwaspCount>& counts,
                      const std::vector<Snapshot>& snapshots);

struct NetvisReport {
    std::size_t total_techniques = 0;
    NetworkVisibility visibility;
    std::size_t total_tactics = 0;
    NetworkCapecCoverage capec_coverage;
    std::string capec_catalog_version;  // recorded so deviations are attributable
};

std::string netvis_json(const NetvisReport& report, const std::vector<Snapshot>& snapshots);
std::string netvis_csv(const NetvisReport& report, const std::vector<Snapshot>& snapshots);

std::string coverage_json(double coverage, std::size_t active_cwes,
                          const std::vector<Snapshot>& snapshots);
std::string coverage_csv(double coverage, std::size_t active_cwes,
                         const std::vector<Snapshot>& snapshots);

std::string identify_json(const std::vector<VulnMatch>& matches,
                          const std::vector<Snapshot>& snapshots);
std::string identify_csv(const std::vector<VulnMatch>& matches,
                         const std::vector<Snapshot>& snapshots);

}  // namespace enumgraph::reports
