#include <nlohmann/json.hpp>
#include <unordered_set>

#include "enumgraph/errors.hpp"
#include "enumgraph/ingest.hpp"
#include "enumgraph/manifest.hpp"

namespace enumgraph {

namespace {

using nlohmann::json;

bool is_plain_22(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

/// Unbinds one percent-encoded 2.2 URI component into 2.3 field text.
/// %01 / %02 are the legacy encodings of the ? and * wildcards.
std::string unbind_22_component(const std::string& in) {
    if (in.empty()) return "*";
    if (in == "-") return "-";
    std::string out;
    for (std::size_t i = 0; i < in.size(); ++i) {
        char c = in[i];
        if (c == '%' && i + 2 < in.size()) {
            int hi = hex_nibble(in[i + 1]), lo = hex_nibble(in[i + 2]);
            if (hi < 0 || lo < 0) throw IllegalCharacter("bad percent escape in 2.2 URI");
            char decoded = static_cast<char>(hi * 16 + lo);
            i += 2;
            if (decoded == 0x01) out += '?';
            else if (decoded == 0x02) out += '*';
            else if (is_plain_22(decoded)) out += decoded;
            else out += std::string("\\") + decoded;
        } else if (is_plain_22(c)) {
            out += c;
        } else {
            out += std::string("\\") + c;
        }
    }
    return out;
}

/// Converts a legacy `cpe:/part:vendor:...` URI into a 2.3 name. The packed
/// edition form `~ed~sw_ed~t_sw~t_hw~other` expands into the 2.3 fields.
cpe::Name cpe22_to_cpe23(const std::string& uri) {
    if (uri.rfind("cpe:/", 0) != 0) throw MalformedPrefix("not a 2.2 URI: " + uri);
    std::vector<std::string> comps;
    std::string cur;
    for (std::size_t i = 5; i < uri.size(); ++i) {
        if (uri[i] == ':') {
            comps.push_back(cur);
            cur.clear();
        } else {
            cur += uri[i];
        }
    }
    comps.push_back(cur);
    if (comps.size() > 7) throw WrongFieldCount("2.2 URI with more than 7 components");
    comps.resize(7);  // part, vendor, product, version, update, edition, language

    std::array<std::string, cpe::kAttributeCount> fields;
    fields.fill("*");
    fields[cpe::kPart] = comps[0].empty() ? "*" : comps[0];
    fields[cpe::kVendor] = unbind_22_component(comps[1]);
    fields[cpe::kProduct] = unbind_22_component(comps[2]);
    fields[cpe::kVersion] = unbind_22_component(comps[3]);
    fields[cpe::kUpdate] = unbind_22_component(comps[4]);
    fields[cpe::kLanguage] = unbind_22_component(comps[6]);
    if (!comps[5].empty() && comps[5][0] == '~') {
        std::array<std::string, 6> packed;  // leading empty, ed, sw_ed, t_sw, t_hw, other
        std::size_t slot = 0;
        for (char c : comps[5]) {
            if (c == '~') {
                if (++slot >= packed.size()) throw IllegalCharacter("overfull packed edition");
            } else {
                packed[slot] += c;
            }
        }
        fields[cpe::kEdition] = unbind_22_component(packed[1]);
        fields[cpe::kSwEdition] = unbind_22_component(packed[2]);
        fields[cpe::kTargetSw] = unbind_22_component(packed[3]);
        fields[cpe::kTargetHw] = unbind_22_component(packed[4]);
        fields[cpe::kOther] = unbind_22_component(packed[5]);
    } else {
        fields[cpe::kEdition] = unbind_22_component(comps[5]);
    }

    std::string formatted = "cpe:2.3";
    for (const auto& f : fields) formatted += ":" + f;
    return cpe::Name::parse(formatted);
}

struct FileResult {
    std::vector<CveEntry> cves;
    std::vector<std::string> warnings;
};

CpeMatchClause parse_clause(const json& m, const std::string& cve_id,
                            std::vector<std::string>& warnings) {
    CpeMatchClause clause;
    clause.vulnerable = m.value("vulnerable", true);
    try {
        if (m.contains("cpe23Uri"))
            clause.criterion = cpe::Name::parse(m["cpe23Uri"].get<std::string>());
        else if (m.contains("cpe22Uri"))
            clause.criterion = cpe22_to_cpe23(m["cpe22Uri"].get<std::string>());
        else
            throw SchemaMismatch("cpe_match without a CPE URI");
    } catch (const Error& e) {
        throw CpeParseError(cve_id, e.what());
    }
    if (m.contains("versionStartIncluding"))
        clause.version_start = VersionBound{m["versionStartIncluding"].get<std::string>(), true};
    else if (m.contains("versionStartExcluding"))
        clause.version_start = VersionBound{m["versionStartExcluding"].get<std::string>(), false};
    if (m.contains("versionEndIncluding"))
        clause.version_end = VersionBound{m["versionEndIncluding"].get<std::string>(), true};
    else if (m.contains("versionEndExcluding"))
        clause.version_end = VersionBound{m["versionEndExcluding"].get<std::string>(), false};
    if (clause.version_start && clause.version_end &&
        cpe::compare_versions(clause.version_start->text, clause.version_end->text) ==
            cpe::VersionOrder::Greater)
        warnings.push_back(cve_id + ": inverted version bounds [" + clause.version_start->text +
                           ", " + clause.version_end->text + "], kept as stated");
    return clause;
}

ApplicabilityNode parse_node(const json& n, const std::string& cve_id,
                             std::vector<std::string>& warnings) {
    ApplicabilityNode node;
    node.op = n.value("operator", "OR") == "AND" ? ApplicabilityNode::Op::And
                                                 : ApplicabilityNode::Op::Or;
    if (n.contains("children"))
        for (const auto& c : n["children"]) node.children.push_back(parse_node(c, cve_id, warnings));
    if (n.contains("cpe_match"))
        for (const auto& m : n["cpe_match"]) node.matches.push_back(parse_clause(m, cve_id, warnings));
    return node;
}

FileResult parse_feed(const std::string& bytes, const std::string& label) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception& e) {
        throw SchemaMismatch(label + ": not valid JSON: " + e.what());
    }
    if (!doc.contains("CVE_Items") || !doc["CVE_Items"].is_array())
        throw SchemaMismatch(label + ": no CVE_Items array (not an NVD 1.1 feed)");

    FileResult out;
    out.cves.reserve(doc["CVE_Items"].size());
    for (const auto& item : doc["CVE_Items"]) {
        CveEntry e;
        try {
            e.id = item.at("cve").at("CVE_data_meta").at("ID").get<std::string>();
        } catch (const json::exception&) {
            throw SchemaMismatch(label + ": CVE item without CVE_data_meta.ID");
        }
        const json& cve = item["cve"];
        if (cve.contains("description"))
            for (const auto& d : cve["description"].value("description_data", json::array()))
                if (d.value("lang", "") == "en") {
                    e.description = d.value("value", "");
                    break;
                }
        e.status = e.description.rfind("** REJECT **", 0) == 0 ? CveStatus::Rejected
                                                               : CveStatus::Published;
        if (cve.contains("problemtype"))
            for (const auto& pt : cve["problemtype"].value("problemtype_data", json::array()))
                for (const auto& d : pt.value("description", json::array())) {
                    std::string v = d.value("value", "");
                    if (!v.empty()) e.cwe_ids.push_back(std::move(v));
                }
        sort_unique(e.cwe_ids);
        if (cve.contains("references"))
            for (const auto& r : cve["references"].value("reference_data", json::array())) {
                std::string url = r.value("url", "");
                if (!url.empty()) e.references.push_back(std::move(url));
            }
        if (item.contains("configurations")) {
            const json& conf = item["configurations"];
            const json nodes = conf.value("nodes", json::array());
            if (nodes.size() == 1) {
                e.configuration = parse_node(nodes[0], e.id, out.warnings);
            } else if (nodes.size() > 1) {
                // the feed's top-level node list is an implicit OR
                ApplicabilityNode root;
                root.op = ApplicabilityNode::Op::Or;
                for (const auto& n : nodes)
                    root.children.push_back(parse_node(n, e.id, out.warnings));
                e.configuration = std::move(root);
            }
        }
        out.cves.push_back(std::move(e));
    }
    return out;
}

}  // namespace

NvdData load_nvd_feeds(const std::vector<std::filesystem::path>& files) {
    const int n = static_cast<int>(files.size());
    std::vector<FileResult> results(n);
    std::vector<std::string> digests(n);
    std::vector<std::exception_ptr> failures(n);

    // files parse independently; one consolidation pass below
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            std::string raw = read_file_bytes(files[i]);
            digests[i] = sha256_hex_file(files[i]);
            results[i] = parse_feed(raw, files[i].filename().string());
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (int i = 0; i < n; ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);

    NvdData out;
    std::string digest_concat;
    std::unordered_set<std::string> seen;
    for (int i = 0; i < n; ++i) {
        digest_concat += digests[i];
        for (auto& cve : results[i].cves) {
            if (!seen.insert(cve.id).second)
                throw DuplicateCveId(cve.id + " appears in more than one feed item");
            out.cves.push_back(std::move(cve));
        }
        out.warnings.insert(out.warnings.end(), results[i].warnings.begin(),
                            results[i].warnings.end());
    }
    out.snapshot.source = SourceKind::Nvd;
    out.snapshot.content_digest = sha256_hex(digest_concat);
    return out;
}

}  // namespace enumgraph
