#include "enumgraph/cpe.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace enumgraph::cpe {

namespace {

constexpr std::string_view kPrefix = "cpe:2.3:";

bool is_printable(char c) { return c >= '!' && c <= '~'; }
bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }
// Characters that stay unescaped in the formatted-string binding.
bool is_unreserved(char c) { return is_alnum(c) || c == '_' || c == '.' || c == '-'; }
char fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

/// One decoded character of a literal; `wildcard` marks an unescaped *//?.
struct Token {
    char ch;
    bool wildcard;
};

std::vector<Token> tokenize(const std::string& canonical) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < canonical.size(); ++i) {
        char c = canonical[i];
        if (c == '\\') {
            out.push_back({canonical[++i], false});
        } else {
            out.push_back({c, c == '*' || c == '?'});
        }
    }
    return out;
}

/// Wildcard structure of a literal: optional leading/trailing allowance
/// around a wildcard-free core. `npos` allowance means `*`.
struct Pattern {
    static constexpr std::size_t kStar = static_cast<std::size_t>(-1);
    std::size_t lead = 0;
    std::size_t trail = 0;
    std::vector<char> core;
};

Pattern split_pattern(const std::vector<Token>& tokens) {
    Pattern p;
    std::size_t begin = 0;
    std::size_t end = tokens.size();
    if (begin < end && tokens[begin].wildcard) {
        if (tokens[begin].ch == '*') {
            p.lead = Pattern::kStar;
            ++begin;
        } else {
            while (begin < end && tokens[begin].wildcard && tokens[begin].ch == '?') {
                ++p.lead;
                ++begin;
            }
        }
    }
    if (begin < end && tokens[end - 1].wildcard) {
        if (tokens[end - 1].ch == '*') {
            p.trail = Pattern::kStar;
            --end;
        } else {
            while (begin < end && tokens[end - 1].wildcard && tokens[end - 1].ch == '?') {
                ++p.trail;
                --end;
            }
        }
    }
    for (std::size_t i = begin; i < end; ++i) p.core.push_back(tokens[i].ch);
    return p;
}

bool fits(std::size_t chars, std::size_t allowance) {
    return allowance == Pattern::kStar || chars <= allowance;
}

/// Whether the wildcarded `pattern` covers the wildcard-free `target`.
/// `?` admits zero or one character, `*` any run.
bool wildcard_covers(const Attribute& pattern, const Attribute& target) {
    Pattern p = split_pattern(tokenize(pattern.value()));
    std::vector<Token> trg = tokenize(target.value());
    std::vector<char> t;
    t.reserve(trg.size());
    for (const Token& tok : trg) t.push_back(tok.ch);

    if (p.core.empty()) {
        if (p.lead == Pattern::kStar || p.trail == Pattern::kStar) return true;
        return t.size() <= p.lead + p.trail;
    }
    if (p.core.size() > t.size()) return false;
    for (std::size_t pos = 0; pos + p.core.size() <= t.size(); ++pos) {
        if (!std::equal(p.core.begin(), p.core.end(), t.begin() + pos)) continue;
        if (!fits(pos, p.lead)) break;  // later matches only move the prefix further out
        if (fits(t.size() - pos - p.core.size(), p.trail)) return true;
    }
    return false;
}

}  // namespace

Attribute Attribute::na() {
    Attribute a;
    a.kind_ = Kind::Na;
    return a;
}

Attribute Attribute::literal(std::string_view field_text) {
    if (field_text.empty()) throw IllegalCharacter("empty attribute value");
    if (field_text == "\\-") throw IllegalCharacter("'\\-' is not a legal value");

    std::string canonical;
    canonical.reserve(field_text.size());
    bool wildcarded = false;
    const std::size_t n = field_text.size();
    for (std::size_t i = 0; i < n; ++i) {
        char c = field_text[i];
        switch (c) {
            case '\\': {
                if (i + 1 >= n) throw IllegalCharacter("backslash escapes nothing");
                char q = field_text[++i];
                if (is_unreserved(q)) {
                    canonical.push_back(fold(q));  // over-escaped, normalize
                } else if (is_printable(q)) {
                    canonical.push_back('\\');
                    canonical.push_back(q);
                } else {
                    throw IllegalCharacter(std::string("illegal escaped character '") + q + "'");
                }
                break;
            }
            case '?': {
                std::size_t run_begin = i;
                while (i + 1 < n && field_text[i + 1] == '?') ++i;
                if (run_begin != 0 && i + 1 != n)
                    throw IllegalCharacter("'?' only allowed at value start or end");
                canonical.append(i - run_begin + 1, '?');
                wildcarded = true;
                break;
            }
            case '*': {
                if (i != 0 && i + 1 != n)
                    throw IllegalCharacter("'*' only allowed at value start or end");
                canonical.push_back('*');
                wildcarded = true;
                break;
            }
            default: {
                if (is_unreserved(c)) {
                    canonical.push_back(fold(c));
                } else if (is_printable(c)) {
                    throw IllegalCharacter(std::string("unescaped special character '") + c + "'");
                } else {
                    throw IllegalCharacter("character outside the printable range");
                }
                break;
            }
        }
    }

    // A lone hyphen or asterisk is the NA / ANY field, not a literal value,
    // and neither has an escaped literal form.
    if (canonical == "-") throw IllegalCharacter("'-' alone denotes NA");
    if (canonical == "*") throw IllegalCharacter("'*' alone denotes ANY");

    Attribute a;
    a.kind_ = Kind::Literal;
    a.value_ = std::move(canonical);
    a.wildcarded_ = wildcarded;
    return a;
}

Attribute Attribute::parse_field(std::string_view field_text) {
    if (field_text == "*") return any();
    if (field_text == "-") return na();
    return literal(field_text);
}

std::string Attribute::to_field() const {
    switch (kind_) {
        case Kind::Any: return "*";
        case Kind::Na: return "-";
        case Kind::Literal: return value_;
    }
    return "*";
}

std::string Attribute::decoded() const {
    std::string out;
    if (kind_ != Kind::Literal) return out;
    for (const Token& t : tokenize(value_)) out.push_back(t.ch);
    return out;
}

Relation compare_attribute(const Attribute& source, const Attribute& target) {
    if (source.is_any()) return target.is_any() ? Relation::Equal : Relation::Superset;
    if (target.is_any()) return Relation::Subset;
    if (source.is_na()) return target.is_na() ? Relation::Equal : Relation::Disjoint;
    if (target.is_na()) return Relation::Disjoint;

    if (source.has_wildcard() && target.has_wildcard()) {
        if (source.value() == target.value()) return Relation::Equal;
        throw WildcardVsWildcard("cannot relate two distinct wildcarded values: '" +
                                 source.value() + "' vs '" + target.value() + "'");
    }
    if (source.has_wildcard())
        return wildcard_covers(source, target) ? Relation::Superset : Relation::Disjoint;
    if (target.has_wildcard())
        return wildcard_covers(target, source) ? Relation::Subset : Relation::Disjoint;
    return source.value() == target.value() ? Relation::Equal : Relation::Disjoint;
}

const char* attribute_name(std::size_t index) {
    static constexpr const char* kNames[kAttributeCount] = {
        "part",     "vendor",   "product",    "version",   "update", "edition",
        "language", "sw_edition", "target_sw", "target_hw", "other"};
    return kNames[index];
}

Name::Name(std::array<Attribute, kAttributeCount> attributes) : attrs_(std::move(attributes)) {
    const Attribute& p = attrs_[kPart];
    if (p.is_literal()) {
        const std::string& v = p.value();
        if (v != "a" && v != "o" && v != "h")
            throw IllegalPart("part must be one of a/o/h, ANY, or NA; got '" + v + "'");
    }
}

Name Name::parse(std::string_view formatted) {
    if (formatted.substr(0, kPrefix.size()) != kPrefix)
        throw MalformedPrefix("expected 'cpe:2.3:' prefix");

    // Split on colons, honoring backslash escapes inside values.
    std::vector<std::string_view> fields;
    std::string_view rest = formatted.substr(kPrefix.size());
    std::size_t field_begin = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] == '\\' && i + 1 < rest.size()) {
            ++i;
        } else if (rest[i] == ':') {
            fields.push_back(rest.substr(field_begin, i - field_begin));
            field_begin = i + 1;
        }
    }
    fields.push_back(rest.substr(field_begin));

    if (fields.size() != kAttributeCount)
        throw WrongFieldCount("expected 11 attribute fields after 'cpe:2.3:', got " +
                              std::to_string(fields.size()));

    std::array<Attribute, kAttributeCount> attrs;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        try {
            attrs[i] = Attribute::parse_field(fields[i]);
        } catch (const IllegalCharacter& e) {
            throw IllegalCharacter(std::string(attribute_name(i)) + ": " + e.what());
        }
    }
    return Name(std::move(attrs));
}

std::string Name::format() const {
    std::string out(kPrefix);
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (i) out.push_back(':');
        out += attrs_[i].to_field();
    }
    return out;
}

NameMatchResult name_match(const Name& source, const Name& target) {
    NameMatchResult r;
    r.accepts = true;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        Relation rel = compare_attribute(source.attribute(i), target.attribute(i));
        r.per_attribute[i] = rel;
        if (rel != Relation::Equal && rel != Relation::Superset) r.accepts = false;
    }
    return r;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// -1 / 0 / +1 over one dot-separated segment.
int compare_segment(std::string_view a, std::string_view b) {
    bool na = all_digits(a), nb = all_digits(b);
    if (na && nb) {
        std::string_view sa = a.substr(std::min(a.find_first_not_of('0'), a.size() - 1));
        std::string_view sb = b.substr(std::min(b.find_first_not_of('0'), b.size() - 1));
        if (sa.size() != sb.size()) return sa.size() < sb.size() ? -1 : 1;
        int c = sa.compare(sb);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (na != nb) return na ? 1 : -1;  // "rc1" sorts before "1"
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        char ca = fold(a[i]), cb = fold(b[i]);
        if (ca != cb) return ca < cb ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

}  // namespace

VersionOrder compare_versions(std::string_view a, std::string_view b) {
    std::size_t ia = 0, ib = 0;
    while (ia <= a.size() && ib <= b.size()) {
        std::size_t ea = a.find('.', ia);
        std::size_t eb = b.find('.', ib);
        if (ea == std::string_view::npos) ea = a.size();
        if (eb == std::string_view::npos) eb = b.size();
        int c = compare_segment(a.substr(ia, ea - ia), b.substr(ib, eb - ib));
        if (c != 0) return c < 0 ? VersionOrder::Less : VersionOrder::Greater;
        bool more_a = ea < a.size();
        bool more_b = eb < b.size();
        if (!more_a && !more_b) return VersionOrder::Equal;
        if (!more_a) return VersionOrder::Less;
        if (!more_b) return VersionOrder::Greater;
        ia = ea + 1;
        ib = eb + 1;
    }
    return VersionOrder::Equal;
}

}  // namespace enumgraph::cpe
