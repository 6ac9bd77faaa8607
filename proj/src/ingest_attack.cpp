#include <nlohmann/json.hpp>

#include <map>
#include <set>

#include "enumgraph/errors.hpp"
#include "enumgraph/ingest.hpp"
#include "enumgraph/manifest.hpp"

namespace enumgraph {

namespace {

using nlohmann::json;

std::string mitre_external_id(const json& obj) {
    for (const auto& ref : obj.value("external_references", json::array()))
        if (ref.value("source_name", "") == "mitre-attack")
            return ref.value("external_id", "");
    return "";
}

}  // namespace

AttackData load_attack_bundle(const std::filesystem::path& file) {
    json doc;
    try {
        doc = json::parse(read_file_bytes(file));
    } catch (const json::exception& e) {
        throw SchemaMismatch(file.string() + ": not valid JSON: " + e.what());
    }
    if (doc.value("type", "") != "bundle" || !doc.contains("objects"))
        throw SchemaMismatch(file.string() + ": not a STIX bundle");

    AttackData out;

    // tactics first: techniques' kill-chain phases are validated against them
    std::set<std::string> tactic_shortnames;
    for (const auto& obj : doc["objects"]) {
        if (obj.value("type", "") != "x-mitre-tactic") continue;
        Tactic t;
        t.shortname = obj.value("x_mitre_shortname", "");
        t.name = obj.value("name", "");
        if (t.shortname.empty()) {
            out.warnings.push_back("tactic object without x_mitre_shortname skipped");
            continue;
        }
        if (tactic_shortnames.insert(t.shortname).second) out.tactics.push_back(std::move(t));
    }
    std::sort(out.tactics.begin(), out.tactics.end(),
              [](const Tactic& a, const Tactic& b) { return a.shortname < b.shortname; });

    std::map<std::string, AttackTechnique> by_id;
    for (const auto& obj : doc["objects"]) {
        if (obj.value("type", "") != "attack-pattern") continue;
        AttackTechnique t;
        t.id = mitre_external_id(obj);
        t.stix_id = obj.value("id", "");
        t.name = obj.value("name", "");
        t.revoked = obj.value("revoked", false);
        t.deprecated = obj.value("x_mitre_deprecated", false);
        if (t.id.empty()) {
            out.warnings.push_back("attack-pattern " + t.stix_id + " has no mitre-attack id");
            continue;
        }
        t.is_subtechnique = t.id.find('.') != std::string::npos;
        if (obj.contains("x_mitre_is_subtechnique") &&
            obj["x_mitre_is_subtechnique"].get<bool>() != t.is_subtechnique)
            out.warnings.push_back(t.id + ": x_mitre_is_subtechnique disagrees with the id");

        for (const auto& phase : obj.value("kill_chain_phases", json::array())) {
            if (phase.value("kill_chain_name", "") != "mitre-attack") continue;
            std::string shortname = phase.value("phase_name", "");
            if (!tactic_shortnames.count(shortname)) {
                if (!t.revoked && !t.deprecated)
                    throw UnknownKillChain(t.id + ": phase '" + shortname +
                                           "' is not a declared tactic");
                out.warnings.push_back(t.id + ": retired entry references unknown phase '" +
                                       shortname + "'");
                continue;
            }
            t.tactics.push_back(std::move(shortname));
        }
        for (const auto& ds : obj.value("x_mitre_data_sources", json::array()))
            t.data_sources.push_back(ds.get<std::string>());
        sort_unique(t.tactics);
        sort_unique(t.data_sources);
        if (t.tactics.empty() && !t.revoked && !t.deprecated)
            out.warnings.push_back(t.id + ": active technique without tactics");

        auto [it, inserted] = by_id.try_emplace(t.id, std::move(t));
        if (!inserted) {
            // keep the active object over a retired duplicate
            bool keep_new = (it->second.revoked || it->second.deprecated) &&
                            !(t.revoked || t.deprecated);
            out.warnings.push_back("duplicate technique id " + it->first + ", kept the " +
                                   (keep_new ? "later active" : "first seen") + " object");
            if (keep_new) it->second = std::move(t);
        }
    }
    out.techniques.reserve(by_id.size());
    for (auto& [id, t] : by_id) out.techniques.push_back(std::move(t));

    out.snapshot.source = SourceKind::Attack;
    out.snapshot.content_digest = sha256_hex(sha256_hex_file(file));
    return out;
}

}  // namespace enumgraph
