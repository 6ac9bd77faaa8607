#include "enumgraph/manifest.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <cctype>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "enumgraph/errors.hpp"

namespace enumgraph {

namespace {

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string read_raw(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ManifestError("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::string gunzip(const std::string& bytes) {
    z_stream strm{};
    if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK)
        throw SchemaMismatch("zlib initialization failed");
    std::string out;
    std::array<char, 1 << 16> chunk;
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
    strm.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    do {
        strm.next_out = reinterpret_cast<Bytef*>(chunk.data());
        strm.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw SchemaMismatch("corrupt gzip stream");
        }
        out.append(chunk.data(), chunk.size() - strm.avail_out);
    } while (rc != Z_STREAM_END && strm.avail_in > 0);
    inflateEnd(&strm);
    if (rc != Z_STREAM_END) throw SchemaMismatch("truncated gzip stream");
    return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char hex[] = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (unsigned i = 0; i < len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_hex_file(const std::filesystem::path& file) {
    return sha256_hex(read_raw(file));
}

std::string read_file_bytes(const std::filesystem::path& file) {
    std::string raw = read_raw(file);
    if (raw.size() > 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
        static_cast<unsigned char>(raw[1]) == 0x8b)
        return gunzip(raw);
    return raw;
}

Manifest Manifest::load(const std::filesystem::path& file) {
    nlohmann::json doc;
    try {
        std::ifstream in(file);
        if (!in) throw ManifestError("cannot open manifest " + file.string());
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError("bad manifest JSON: " + std::string(e.what()));
    }

    Manifest m;
    if (!doc.contains("sources") || !doc["sources"].is_array())
        throw ManifestError("manifest lacks a 'sources' array");
    for (const auto& src : doc["sources"]) {
        ManifestEntry e;
        const std::string kind = src.value("source", "");
        if (kind == "nvd") e.source = SourceKind::Nvd;
        else if (kind == "cwe") e.source = SourceKind::Cwe;
        else if (kind == "capec") e.source = SourceKind::Capec;
        else if (kind == "attack") e.source = SourceKind::Attack;
        else throw ManifestError("unknown source kind '" + kind + "'");
        e.version_label = src.value("version_label", "");
        e.retrieval_date = src.value("retrieval_date", "");
        if (!src.contains("files") || !src["files"].is_array() || src["files"].empty())
            throw ManifestError("source '" + kind + "' lists no files");
        for (const auto& f : src["files"]) {
            ManifestFile mf;
            mf.path = f.value("path", "");
            mf.sha256 = to_lower(f.value("sha256", ""));
            if (mf.path.empty() || mf.sha256.size() != 64)
                throw ManifestError("source '" + kind + "' has a file without path/sha256");
            e.files.push_back(std::move(mf));
        }
        if (e.source != SourceKind::Nvd && e.files.size() != 1)
            throw ManifestError("source '" + kind + "' must list exactly one file");
        m.entries.push_back(std::move(e));
    }
    return m;
}

const ManifestEntry* Manifest::find(SourceKind k) const {
    for (const auto& e : entries)
        if (e.source == k) return &e;
    return nullptr;
}

SnapshotSet load_all(const Manifest& manifest, const std::filesystem::path& snapshot_dir) {
    SnapshotSet out;
    for (const auto& entry : manifest.entries) {
        std::vector<std::filesystem::path> paths;
        std::string digest_concat;
        for (const auto& f : entry.files) {
            std::filesystem::path p = snapshot_dir / f.path;
            std::string got = sha256_hex_file(p);
            if (got != f.sha256)
                throw DigestMismatch("digest mismatch for " + p.string() + ": manifest " +
                                     f.sha256 + ", file " + got);
            digest_concat += got;
            paths.push_back(std::move(p));
        }

        Snapshot snap;
        snap.source = entry.source;
        snap.version_label = entry.version_label;
        snap.retrieval_date = entry.retrieval_date;
        snap.content_digest = sha256_hex(digest_concat);

        switch (entry.source) {
            case SourceKind::Nvd: {
                NvdData d = load_nvd_feeds(paths);
                out.cves = std::move(d.cves);
                out.warnings.insert(out.warnings.end(), d.warnings.begin(), d.warnings.end());
                break;
            }
            case SourceKind::Cwe: {
                CweData d = load_cwe_catalog(paths.front());
                out.cwes = std::move(d.cwes);
                out.owasp = std::move(d.owasp);
                out.cwe_catalog_version = d.catalog_version;
                if (snap.version_label.empty()) snap.version_label = d.catalog_version;
                out.warnings.insert(out.warnings.end(), d.warnings.begin(), d.warnings.end());
                break;
            }
            case SourceKind::Capec: {
                CapecData d = load_capec_catalog(paths.front());
                out.capecs = std::move(d.capecs);
                out.capec_catalog_version = d.catalog_version;
                if (snap.version_label.empty()) snap.version_label = d.catalog_version;
                out.warnings.insert(out.warnings.end(), d.warnings.begin(), d.warnings.end());
                break;
            }
            case SourceKind::Attack: {
                AttackData d = load_attack_bundle(paths.front());
                out.techniques = std::move(d.techniques);
                out.tactics = std::move(d.tactics);
                out.warnings.insert(out.warnings.end(), d.warnings.begin(), d.warnings.end());
                break;
            }
            case SourceKind::OwaspMap:
                break;  // carried by the CWE catalog
        }
        out.snapshots.push_back(std::move(snap));
    }
    return out;
}

}  // namespace enumgraph
