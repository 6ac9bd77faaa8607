#include "enumgraph/records.hpp"

namespace enumgraph {

const char* source_kind_name(SourceKind k) {
    switch (k) {
        case SourceKind::Nvd: return "nvd";
        case SourceKind::Cwe: return "cwe";
        case SourceKind::Capec: return "capec";
        case SourceKind::Attack: return "attack";
        case SourceKind::OwaspMap: return "owasp_map";
    }
    return "?";
}

std::string cwe_node_id(int id) { return "CWE-" + std::to_string(id); }

std::string capec_node_id(int id) { return "CAPEC-" + std::to_string(id); }

std::optional<int> parse_cwe_ref(const std::string& text) {
    if (text.size() <= 4 || text.compare(0, 4, "CWE-") != 0) return std::nullopt;
    int value = 0;
    for (std::size_t i = 4; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + (c - '0');
    }
    return value;
}

}  // namespace enumgraph
