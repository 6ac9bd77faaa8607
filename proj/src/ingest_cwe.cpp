#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <map>
#include <regex>
#include <sstream>

#include "enumgraph/errors.hpp"
#include "enumgraph/ingest.hpp"
#include "enumgraph/manifest.hpp"
#include "enumgraph/xml_util.hpp"

namespace enumgraph {

namespace {

using boost::property_tree::ptree;

struct RawCategory {
    int id = 0;
    std::string name;
    std::vector<int> member_cwes;
};

CweEntry parse_weakness(const ptree& node, std::vector<std::string>& warnings) {
    CweEntry e;
    e.id = std::stoi(xml::attr(node, "ID"));
    e.name = xml::attr(node, "Name");
    e.status = xml::attr(node, "Status") == "Deprecated" ? CatalogStatus::Deprecated
                                                         : CatalogStatus::Active;
    for (const auto& [key, child] : node) {
        std::string local = xml::local_name(key);
        if (local == "Related_Weaknesses") {
            for (const auto& [k2, rel] : child) {
                if (xml::local_name(k2) != "Related_Weakness") continue;
                if (xml::attr(rel, "Nature") != "ChildOf") continue;
                int parent = std::stoi(xml::attr(rel, "CWE_ID"));
                if (parent == e.id) {
                    warnings.push_back("CWE-" + std::to_string(e.id) + " lists itself as parent");
                    continue;
                }
                e.parent_ids.push_back(parent);
            }
        } else if (local == "Related_Attack_Patterns") {
            for (const auto& [k2, rel] : child) {
                if (xml::local_name(k2) != "Related_Attack_Pattern") continue;
                e.related_capec_ids.push_back(std::stoi(xml::attr(rel, "CAPEC_ID")));
            }
        }
    }
    sort_unique(e.parent_ids);
    sort_unique(e.related_capec_ids);
    return e;
}

RawCategory parse_category(const ptree& node) {
    RawCategory c;
    c.id = std::stoi(xml::attr(node, "ID"));
    c.name = xml::attr(node, "Name");
    for (const auto& [key, child] : node) {
        if (xml::local_name(key) != "Relationships") continue;
        for (const auto& [k2, rel] : child) {
            if (xml::local_name(k2) != "Has_Member") continue;
            c.member_cwes.push_back(std::stoi(xml::attr(rel, "CWE_ID")));
        }
    }
    sort_unique(c.member_cwes);
    return c;
}

}  // namespace

CweData load_cwe_catalog(const std::filesystem::path& file) {
    ptree doc;
    try {
        std::istringstream in(read_file_bytes(file));
        boost::property_tree::read_xml(in, doc);
    } catch (const std::exception& e) {
        throw SchemaMismatch(file.string() + ": not parseable XML: " + e.what());
    }

    const ptree* catalog = nullptr;
    for (const auto& [key, child] : doc)
        if (xml::local_name(key) == "Weakness_Catalog") catalog = &child;
    if (!catalog) throw SchemaMismatch(file.string() + ": no Weakness_Catalog root");

    CweData out;
    out.catalog_version = xml::attr(*catalog, "Version");

    std::map<int, RawCategory> categories;
    std::vector<int> view_1344_members;
    bool saw_view_1344 = false;

    for (const auto& [key, section] : *catalog) {
        std::string local = xml::local_name(key);
        if (local == "Weaknesses") {
            for (const auto& [k2, w] : section)
                if (xml::local_name(k2) == "Weakness")
                    out.cwes.push_back(parse_weakness(w, out.warnings));
        } else if (local == "Categories") {
            for (const auto& [k2, c] : section)
                if (xml::local_name(k2) == "Category") {
                    RawCategory cat = parse_category(c);
                    categories[cat.id] = std::move(cat);
                }
        } else if (local == "Views") {
            for (const auto& [k2, v] : section) {
                if (xml::local_name(k2) != "View" || xml::attr(v, "ID") != "1344") continue;
                saw_view_1344 = true;
                for (const auto& [k3, members] : v) {
                    if (xml::local_name(k3) != "Members") continue;
                    for (const auto& [k4, m] : members)
                        if (xml::local_name(k4) == "Has_Member")
                            view_1344_members.push_back(std::stoi(xml::attr(m, "CWE_ID")));
                }
            }
        }
    }

    if (!saw_view_1344) {
        // Fig.-5 style analyses raise MissingView1344 later; the rest of the
        // catalog stays usable.
        out.warnings.push_back(file.string() + ": view 1344 (OWASP Top Ten 2021) absent");
    } else {
        // "OWASP Top Ten 2021 Category A01:2021 - Broken Access Control"
        static const std::regex kCategoryName(R"(A(\d\d):2021 - (.+)$)");
        for (int member : view_1344_members) {
            auto it = categories.find(member);
            if (it == categories.end()) {
                out.warnings.push_back("view 1344 member " + std::to_string(member) +
                                       " has no Category entry");
                continue;
            }
            std::smatch m;
            if (!std::regex_search(it->second.name, m, kCategoryName)) {
                out.warnings.push_back("category " + std::to_string(member) +
                                       " name not in OWASP 2021 form: " + it->second.name);
                continue;
            }
            OwaspMapping om;
            int code = std::stoi(m[1].str());
            om.category = "A" + std::to_string(code);
            om.category_name = m[2].str();
            om.cwe_ids = it->second.member_cwes;
            out.owasp.push_back(std::move(om));
        }
        std::sort(out.owasp.begin(), out.owasp.end(), [](const auto& a, const auto& b) {
            return std::stoi(a.category.substr(1)) < std::stoi(b.category.substr(1));
        });
        if (out.owasp.size() != 10)
            out.warnings.push_back("view 1344 yielded " + std::to_string(out.owasp.size()) +
                                   " categories, expected 10");
    }

    std::sort(out.cwes.begin(), out.cwes.end(),
              [](const CweEntry& a, const CweEntry& b) { return a.id < b.id; });

    out.snapshot.source = SourceKind::Cwe;
    out.snapshot.version_label = out.catalog_version;
    out.snapshot.content_digest = sha256_hex(sha256_hex_file(file));
    return out;
}

}  // namespace enumgraph
