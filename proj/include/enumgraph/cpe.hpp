#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "enumgraph/errors.hpp"

namespace enumgraph::cpe {

/// One attribute of a CPE 2.3 name: the logical value ANY (`*`), the logical
/// value NA (`-`), or a literal string kept in canonical formatted-string
/// form (lowercase, alnum/`_`/`.`/`-` unescaped, other punctuation
/// backslash-escaped, unescaped `*`/`?` only in the positions the binding
/// grammar allows).
class Attribute {
public:
    enum class Kind { Any, Na, Literal };

    Attribute() = default;  // ANY

    static Attribute any() { return Attribute(); }
    static Attribute na();

    /// Builds a LITERAL from raw formatted-string field text (validates and
    /// canonicalizes). Use parse_field() when the text may be `*` or `-`.
    static Attribute literal(std::string_view field_text);

    /// Parses one colon-delimited field of a formatted string.
    static Attribute parse_field(std::string_view field_text);

    Kind kind() const { return kind_; }
    bool is_any() const { return kind_ == Kind::Any; }
    bool is_na() const { return kind_ == Kind::Na; }
    bool is_literal() const { return kind_ == Kind::Literal; }

    /// Canonical value text; only meaningful for LITERAL.
    const std::string& value() const { return value_; }

    /// True when the literal carries an unescaped `*` or `?`.
    bool has_wildcard() const { return wildcarded_; }

    /// The field as it appears in a formatted string (`*`, `-`, or value).
    std::string to_field() const;

    /// Literal text with escapes removed (e.g. `log4\:j` -> `log4:j`).
    /// Empty for ANY/NA.
    std::string decoded() const;

    bool operator==(const Attribute&) const = default;

private:
    Kind kind_ = Kind::Any;
    std::string value_;
    bool wildcarded_ = false;
};

/// Set relation between the value sets two attributes denote.
enum class Relation { Equal, Subset, Superset, Disjoint };

/// Relation of `source`'s denoted set to `target`'s. Throws
/// WildcardVsWildcard when both sides carry wildcards and are not identical.
Relation compare_attribute(const Attribute& source, const Attribute& target);

/// Attribute positions inside a name, in formatted-string order.
enum AttributeIndex : std::size_t {
    kPart = 0,
    kVendor,
    kProduct,
    kVersion,
    kUpdate,
    kEdition,
    kLanguage,
    kSwEdition,
    kTargetSw,
    kTargetHw,
    kOther,
    kAttributeCount
};

const char* attribute_name(std::size_t index);

/// A full 11-attribute CPE 2.3 name. Immutable after construction.
class Name {
public:
    Name() = default;  // all-ANY

    explicit Name(std::array<Attribute, kAttributeCount> attributes);

    /// Parses a `cpe:2.3:` formatted string (Fig.-2 layout). Lowercases
    /// literals; `*` -> ANY, `-` -> NA. Throws MalformedPrefix,
    /// WrongFieldCount, IllegalCharacter, IllegalPart.
    static Name parse(std::string_view formatted);

    /// Canonical formatted string; parse(format()) reproduces the name.
    std::string format() const;

    const Attribute& attribute(std::size_t index) const { return attrs_.at(index); }
    const std::array<Attribute, kAttributeCount>& attributes() const { return attrs_; }

    const Attribute& part() const { return attrs_[kPart]; }
    const Attribute& vendor() const { return attrs_[kVendor]; }
    const Attribute& product() const { return attrs_[kProduct]; }
    const Attribute& version() const { return attrs_[kVersion]; }
    const Attribute& update() const { return attrs_[kUpdate]; }
    const Attribute& edition() const { return attrs_[kEdition]; }
    const Attribute& language() const { return attrs_[kLanguage]; }
    const Attribute& sw_edition() const { return attrs_[kSwEdition]; }
    const Attribute& target_sw() const { return attrs_[kTargetSw]; }
    const Attribute& target_hw() const { return attrs_[kTargetHw]; }
    const Attribute& other() const { return attrs_[kOther]; }

    bool operator==(const Name&) const = default;

private:
    std::array<Attribute, kAttributeCount> attrs_{};
};

/// Attribute-wise verdict of matching one name against another.
struct NameMatchResult {
    std::array<Relation, kAttributeCount> per_attribute{};
    /// True iff every relation is Equal or Superset, i.e. `source` taken
    /// attribute-wise covers `target`.
    bool accepts = false;
};

NameMatchResult name_match(const Name& source, const Name& target);

enum class VersionOrder { Less, Equal, Greater };

/// Total order over version texts: dot-split segments, numeric segments
/// compare numerically, segments containing non-digits compare
/// case-folded lexicographically and order before purely numeric ones,
/// and a strict prefix compares Less ("2.0" < "2.0.1").
VersionOrder compare_versions(std::string_view a, std::string_view b);

}  // namespace enumgraph::cpe
