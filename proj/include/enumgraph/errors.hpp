#pragma once

#include <stdexcept>
#include <string>

namespace enumgraph {

/// Base class for every error this toolkit raises on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- CPE parsing / matching ---

class MalformedPrefix : public Error {
public:
    using Error::Error;
};

class WrongFieldCount : public Error {
public:
    using Error::Error;
};

class IllegalCharacter : public Error {
public:
    using Error::Error;
};

class IllegalPart : public Error {
public:
    using Error::Error;
};

/// Both sides of an attribute comparison carry wildcards and differ;
/// the relation is undefined, so it is reported instead of guessed.
class WildcardVsWildcard : public Error {
public:
    using Error::Error;
};

// --- ingestion ---

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

class DuplicateCveId : public Error {
public:
    using Error::Error;
};

/// A CPE string inside a feed failed to parse; carries the owning CVE id.
class CpeParseError : public Error {
public:
    CpeParseError(const std::string& cve_id, const std::string& detail)
        : Error(cve_id + ": " + detail), cve_id_(cve_id) {}
    const std::string& cve_id() const { return cve_id_; }

private:
    std::string cve_id_;
};

class MissingView1344 : public Error {
public:
    using Error::Error;
};

class UnknownKillChain : public Error {
public:
    using Error::Error;
};

class DigestMismatch : public Error {
public:
    using Error::Error;
};

class ManifestError : public Error {
public:
    using Error::Error;
};

// --- graph ---

class CyclicHierarchy : public Error {
public:
    using Error::Error;
};

class UnknownNode : public Error {
public:
    using Error::Error;
};

class EmptyDomain : public Error {
public:
    using Error::Error;
};

// --- vulnerability identification ---

class MalformedNode : public Error {
public:
    using Error::Error;
};

/// Inventory file rejected; carries the 1-based line number.
class InventoryError : public Error {
public:
    InventoryError(int line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// --- analysis ---

class BucketGap : public Error {
public:
    using Error::Error;
};

}  // namespace enumgraph
