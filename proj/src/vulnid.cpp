#include "enumgraph/vulnid.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "enumgraph/errors.hpp"

namespace enumgraph {

namespace {

// ANY counts as a wildcard here: "vendor: anything" is not an observation
bool concrete(const cpe::Attribute& a) {
    return a.is_na() || (a.is_literal() && !a.has_wildcard());
}

}  // namespace

AssetInventory AssetInventory::parse(std::istream& in) {
    AssetInventory inv;
    std::map<std::string, std::size_t> by_label;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw InventoryError(lineno, "expected <asset_label><TAB><cpe string>");
        std::string label = line.substr(0, tab);
        std::string text = line.substr(tab + 1);
        if (label.empty()) throw InventoryError(lineno, "empty asset label");
        cpe::Name name;
        try {
            name = cpe::Name::parse(text);
        } catch (const Error& e) {
            throw InventoryError(lineno, e.what());
        }
        for (std::size_t i : {cpe::kPart, cpe::kVendor, cpe::kProduct})
            if (!concrete(name.attribute(i)))
                throw InventoryError(lineno, std::string("wildcard in ") +
                                                 cpe::attribute_name(i) +
                                                 "; inventory names must be concrete");
        auto [it, inserted] = by_label.try_emplace(label, inv.assets.size());
        if (inserted) inv.assets.push_back(Asset{std::move(label), {}});
        inv.assets[it->second].names.push_back(std::move(name));
    }
    if (inv.assets.empty()) throw InventoryError(lineno ? lineno : 1, "inventory lists no assets");
    return inv;
}

AssetInventory AssetInventory::parse_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InventoryError(1, "cannot open " + file.string());
    return parse(in);
}

namespace {

bool version_in_bounds(const CpeMatchClause& clause, const cpe::Name& name,
                       bool assume_any, std::string& verdict) {
    if (!clause.version_start && !clause.version_end) {
        verdict = "no-bounds";
        return true;
    }
    const cpe::Attribute& v = name.version();
    if (!v.is_literal()) {
        // a bounded clause needs a concrete version to compare against
        if (v.is_any() && assume_any) {
            verdict = "assumed-any-version";
            return true;
        }
        return false;
    }
    std::string text = v.decoded();
    if (clause.version_start) {
        auto cmp = cpe::compare_versions(text, clause.version_start->text);
        if (cmp == cpe::VersionOrder::Less) return false;
        if (cmp == cpe::VersionOrder::Equal && !clause.version_start->inclusive) return false;
    }
    if (clause.version_end) {
        auto cmp = cpe::compare_versions(text, clause.version_end->text);
        if (cmp == cpe::VersionOrder::Greater) return false;
        if (cmp == cpe::VersionOrder::Equal && !clause.version_end->inclusive) return false;
    }
    verdict = "in-range";
    return true;
}

}  // namespace

bool evaluate_clause(const CpeMatchClause& clause, const cpe::Name& name,
                     bool assume_any_version_matches) {
    if (!cpe::name_match(clause.criterion, name).accepts) return false;
    std::string verdict;
    return version_in_bounds(clause, name, assume_any_version_matches, verdict);
}

namespace {

struct AssetEval {
    const AssetInventory::Asset* asset;
    bool assume_any;

    /// Returns structural truth; appends vulnerable matches to hits only
    /// when this node holds.
    bool eval(const ApplicabilityNode& node, std::vector<EvidencePair>& hits) const {
        if (node.children.empty() && node.matches.empty())
            throw MalformedNode("applicability node with neither children nor clauses");
        std::vector<EvidencePair> local;
        bool value;
        if (node.op == ApplicabilityNode::Op::And) {
            value = true;
            for (const auto& child : node.children)
                if (!eval(child, local)) {
                    value = false;
                    break;
                }
            if (value)
                for (const auto& clause : node.matches)
                    if (!clause_hit(clause, local)) {
                        value = false;
                        break;
                    }
        } else {
            value = false;
            for (const auto& child : node.children)
                if (eval(child, local)) value = true;
            for (const auto& clause : node.matches)
                if (clause_hit(clause, local)) value = true;
        }
        if (value) hits.insert(hits.end(), local.begin(), local.end());
        return value;
    }

    bool clause_hit(const CpeMatchClause& clause, std::vector<EvidencePair>& hits) const {
        for (const cpe::Name& name : asset->names) {
            if (!cpe::name_match(clause.criterion, name).accepts) continue;
            std::string verdict;
            if (!version_in_bounds(clause, name, assume_any, verdict)) continue;
            if (clause.vulnerable)
                hits.push_back(EvidencePair{asset->label, clause, name, verdict});
            return true;
        }
        return false;
    }
};

}  // namespace

ApplicabilityVerdict evaluate_applicability(const ApplicabilityNode& node,
                                            const AssetInventory& inventory,
                                            bool assume_any_version_matches) {
    ApplicabilityVerdict verdict;
    for (const auto& asset : inventory.assets) {
        AssetEval ev{&asset, assume_any_version_matches};
        std::vector<EvidencePair> hits;
        if (ev.eval(node, hits)) {
            verdict.applies = true;
            verdict.evidence.insert(verdict.evidence.end(), hits.begin(), hits.end());
        }
    }
    return verdict;
}

namespace {

/// vendor:product key for the inverted index; "*" / "-" act as sentinels.
using IndexKey = std::pair<std::string, std::string>;

void clause_keys(const ApplicabilityNode& node, std::set<IndexKey>& keys, bool& catch_all) {
    for (const auto& clause : node.matches) {
        const auto& vendor = clause.criterion.vendor();
        const auto& product = clause.criterion.product();
        if (vendor.is_any() || product.is_any() || (vendor.is_literal() && vendor.has_wildcard()) ||
            (product.is_literal() && product.has_wildcard()))
            catch_all = true;
        else
            keys.emplace(vendor.to_field(), product.to_field());
    }
    for (const auto& child : node.children) clause_keys(child, keys, catch_all);
}

std::vector<VulnMatch> collect_matches(const CveEntry& cve, const AssetInventory& inventory,
                                       bool assume_any) {
    std::vector<VulnMatch> out;
    if (cve.status != CveStatus::Published || !cve.configuration) return out;
    for (const auto& asset : inventory.assets) {
        AssetEval ev{&asset, assume_any};
        std::vector<EvidencePair> hits;
        if (ev.eval(*cve.configuration, hits) && !hits.empty())
            out.push_back(VulnMatch{cve.id, asset.label, std::move(hits)});
    }
    return out;
}

void sort_matches(std::vector<VulnMatch>& matches) {
    std::sort(matches.begin(), matches.end(), [](const VulnMatch& a, const VulnMatch& b) {
        return std::tie(a.cve_id, a.asset_label) < std::tie(b.cve_id, b.asset_label);
    });
}

}  // namespace

std::vector<VulnMatch> identify_vulnerabilities_serial(const std::vector<CveEntry>& cves,
                                                       const AssetInventory& inventory,
                                                       bool assume_any_version_matches,
                                                       std::vector<std::string>* warnings) {
    std::vector<VulnMatch> out;
    for (const auto& cve : cves) {
        try {
            auto matches = collect_matches(cve, inventory, assume_any_version_matches);
            out.insert(out.end(), std::make_move_iterator(matches.begin()),
                       std::make_move_iterator(matches.end()));
        } catch (const Error& e) {
            // malformed tree or an undecidable comparison: skip, never guess
            if (warnings) warnings->push_back(cve.id + " skipped: " + e.what());
        }
    }
    sort_matches(out);
    return out;
}

std::vector<VulnMatch> identify_vulnerabilities(const std::vector<CveEntry>& cves,
                                                const AssetInventory& inventory,
                                                const IdentifyOptions& options,
                                                std::vector<std::string>* warnings) {
    // candidate prefilter: a CVE can only match an asset when some clause
    // shares the asset's vendor:product key or uses ANY/wildcards there
    std::vector<std::uint32_t> candidates;
    if (options.use_index) {
        std::map<IndexKey, std::vector<std::uint32_t>> index;
        std::vector<std::uint32_t> catch_all;
        for (std::uint32_t i = 0; i < cves.size(); ++i) {
            const auto& cve = cves[i];
            if (cve.status != CveStatus::Published || !cve.configuration) continue;
            std::set<IndexKey> keys;
            bool is_catch_all = false;
            clause_keys(*cve.configuration, keys, is_catch_all);
            // a well-formed tree always yields at least one key; a clause-free
            // one is malformed and must still reach evaluation to be reported
            if (is_catch_all || keys.empty()) catch_all.push_back(i);
            for (const auto& key : keys) index[key].push_back(i);
        }
        std::set<std::uint32_t> selected(catch_all.begin(), catch_all.end());
        for (const auto& asset : inventory.assets)
            for (const auto& name : asset.names) {
                auto it = index.find({name.vendor().to_field(), name.product().to_field()});
                if (it != index.end()) selected.insert(it->second.begin(), it->second.end());
            }
        candidates.assign(selected.begin(), selected.end());
    } else {
        candidates.resize(cves.size());
        for (std::uint32_t i = 0; i < cves.size(); ++i) candidates[i] = i;
    }

    const int n = static_cast<int>(candidates.size());
    std::vector<std::vector<VulnMatch>> per_cve(n);
    std::vector<std::string> skip_notes(n);

#pragma omp parallel for schedule(dynamic, 64) if (options.parallel)
    for (int k = 0; k < n; ++k) {
        const auto& cve = cves[candidates[k]];
        try {
            per_cve[k] = collect_matches(cve, inventory, options.assume_any_version_matches);
        } catch (const Error& e) {
            skip_notes[k] = cve.id + " skipped: " + e.what();
        }
    }

    std::vector<VulnMatch> out;
    for (int k = 0; k < n; ++k) {
        if (!skip_notes[k].empty() && warnings) warnings->push_back(skip_notes[k]);
        out.insert(out.end(), std::make_move_iterator(per_cve[k].begin()),
                   std::make_move_iterator(per_cve[k].end()));
    }
    sort_matches(out);
    return out;
}

}  // namespace enumgraph
