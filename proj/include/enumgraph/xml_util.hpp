#pragma once

#include <boost/property_tree/ptree.hpp>

#include <string>
#include <string_view>

namespace enumgraph::xml {

/// Element name with any namespace prefix stripped ("ns:Weakness" -> "Weakness").
inline std::string local_name(std::string_view key) {
    auto pos = key.rfind(':');
    return std::string(pos == std::string_view::npos ? key : key.substr(pos + 1));
}

/// Attribute lookup; empty string when absent.
inline std::string attr(const boost::property_tree::ptree& node, const std::string& name) {
    if (auto attrs = node.get_child_optional("<xmlattr>"))
        return attrs->get<std::string>(name, "");
    return "";
}

/// Trimmed text content of a node.
inline std::string text(const boost::property_tree::ptree& node) {
    std::string t = node.get_value<std::string>();
    auto begin = t.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = t.find_last_not_of(" \t\r\n");
    return t.substr(begin, end - begin + 1);
}

}  // namespace enumgraph::xml
