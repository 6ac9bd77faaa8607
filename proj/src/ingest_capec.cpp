#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <sstream>

#include "enumgraph/errors.hpp"
#include "enumgraph/ingest.hpp"
#include "enumgraph/manifest.hpp"
#include "enumgraph/xml_util.hpp"

namespace enumgraph {

namespace {

using boost::property_tree::ptree;

/// "1566" / "1566.002" / "T1566" -> "T1566" / "T1566.002"; empty on bad form.
std::string normalize_technique_id(std::string entry) {
    if (!entry.empty() && entry[0] == 'T') entry.erase(0, 1);
    std::size_t dot = entry.find('.');
    std::string major = dot == std::string::npos ? entry : entry.substr(0, dot);
    std::string minor = dot == std::string::npos ? "" : entry.substr(dot + 1);
    auto all_digits = [](const std::string& s) {
        return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
    };
    if (major.size() != 4 || !all_digits(major)) return "";
    if (dot != std::string::npos && (minor.size() != 3 || !all_digits(minor))) return "";
    return "T" + entry;
}

CapecEntry parse_pattern(const ptree& node, std::vector<std::string>& warnings) {
    CapecEntry e;
    e.id = std::stoi(xml::attr(node, "ID"));
    e.name = xml::attr(node, "Name");
    std::string status = xml::attr(node, "Status");
    e.status = status == "Deprecated" ? CatalogStatus::Deprecated : CatalogStatus::Active;

    for (const auto& [key, child] : node) {
        std::string local = xml::local_name(key);
        if (local == "Typical_Severity") {
            e.severity = xml::text(child);
        } else if (local == "Related_Attack_Patterns") {
            for (const auto& [k2, rel] : child) {
                if (xml::local_name(k2) != "Related_Attack_Pattern") continue;
                if (xml::attr(rel, "Nature") != "ChildOf") continue;
                int parent = std::stoi(xml::attr(rel, "CAPEC_ID"));
                if (parent == e.id) {
                    warnings.push_back("CAPEC-" + std::to_string(e.id) +
                                       " lists itself as parent");
                    continue;
                }
                e.parent_ids.push_back(parent);
            }
        } else if (local == "Taxonomy_Mappings") {
            for (const auto& [k2, tm] : child) {
                if (xml::local_name(k2) != "Taxonomy_Mapping") continue;
                if (xml::attr(tm, "Taxonomy_Name") != "ATTACK") continue;
                for (const auto& [k3, field] : tm) {
                    if (xml::local_name(k3) != "Entry_ID") continue;
                    std::string t = normalize_technique_id(xml::text(field));
                    if (t.empty())
                        warnings.push_back("CAPEC-" + std::to_string(e.id) +
                                           ": unrecognized ATT&CK entry id '" +
                                           xml::text(field) + "'");
                    else
                        e.technique_ids.push_back(std::move(t));
                }
            }
        }
    }
    sort_unique(e.parent_ids);
    sort_unique(e.technique_ids);
    return e;
}

}  // namespace

CapecData load_capec_catalog(const std::filesystem::path& file) {
    ptree doc;
    try {
        std::istringstream in(read_file_bytes(file));
        boost::property_tree::read_xml(in, doc);
    } catch (const std::exception& e) {
        throw SchemaMismatch(file.string() + ": not parseable XML: " + e.what());
    }

    const ptree* catalog = nullptr;
    for (const auto& [key, child] : doc)
        if (xml::local_name(key) == "Attack_Pattern_Catalog") catalog = &child;
    if (!catalog) throw SchemaMismatch(file.string() + ": no Attack_Pattern_Catalog root");

    CapecData out;
    out.catalog_version = xml::attr(*catalog, "Version");
    for (const auto& [key, section] : *catalog) {
        if (xml::local_name(key) != "Attack_Patterns") continue;
        for (const auto& [k2, p] : section)
            if (xml::local_name(k2) == "Attack_Pattern")
                out.capecs.push_back(parse_pattern(p, out.warnings));
    }
    std::sort(out.capecs.begin(), out.capecs.end(),
              [](const CapecEntry& a, const CapecEntry& b) { return a.id < b.id; });

    out.snapshot.source = SourceKind::Capec;
    out.snapshot.version_label = out.catalog_version;
    out.snapshot.content_digest = sha256_hex(sha256_hex_file(file));
    return out;
}

}  // namespace enumgraph
