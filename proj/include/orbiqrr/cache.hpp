#pragma once

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"

namespace orbiqrr {

/// Bumping this invalidates every stored entry.
inline constexpr int kCacheSchemaVersion = 1;

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[digest[k] >> 4];
        out += hex[digest[k] & 15];
    }
    return out;
}

enum class CacheStatus { hit, miss, recovered };

inline std::string cache_status_name(CacheStatus s) {
    switch (s) {
        case CacheStatus::hit: return "hit";
        case CacheStatus::miss: return "miss";
        case CacheStatus::recovered: return "recovered";
    }
    return "miss";
}

/// Directory of JSON entries keyed by the SHA-256 of (schema version, key).
/// Each entry stores its key, payload and the payload digest.
class ResultCache {
public:
    using Json = nlohmann::json;

    explicit ResultCache(std::filesystem::path dir, int schema = kCacheSchemaVersion) : dir_(std::move(dir)), schema_(schema) {}

    /// Cache rooted at $ORBIQRR_CACHE, if set and non-empty.
    static std::optional<ResultCache> from_env() {
        const char* dir = std::getenv("ORBIQRR_CACHE");
        if (!dir || !*dir) return std::nullopt;
        return ResultCache(dir);
    }

    const std::filesystem::path& dir() const { return dir_; }
    int schema() const { return schema_; }

    std::string key_hash(const Json& key) const { return sha256_hex(Json{{"schema", schema_}, {"key", key}}.dump()); }
    std::filesystem::path entry_path(const Json& key) const { return dir_ / (key_hash(key) + ".json"); }

    /// Stored payload, or nullopt on a miss. Throws CorruptCache when the entry does not verify.
    std::optional<Json> load(const Json& key) const {
        const auto path = entry_path(key);
        if (!std::filesystem::exists(path)) return std::nullopt;
        std::ifstream in(path, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        Json entry = Json::parse(buf.str(), nullptr, false);
        if (entry.is_discarded() || !entry.is_object() || !entry.contains("payload") || !entry.contains("digest"))
            throw CorruptCache(path.string() + ": unreadable entry");
        if (entry.value("schema", -1) != schema_ || entry["key"] != key) throw CorruptCache(path.string() + ": key mismatch");
        if (entry["digest"] != sha256_hex(entry["payload"].dump())) throw CorruptCache(path.string() + ": hash mismatch");
        return entry["payload"];
    }

    void store(const Json& key, const Json& payload) const {
        std::filesystem::create_directories(dir_);
        const auto path = entry_path(key);
        const auto tmp = std::filesystem::path(path.string() + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("CacheWriteError", "cli", "cannot write " + tmp.string());
            out << Json{{"schema", schema_}, {"key", key}, {"digest", sha256_hex(payload.dump())}, {"payload", payload}}.dump();
        }
        std::filesystem::rename(tmp, path);
    }

    struct Fetched {
        Json payload;
        CacheStatus status = CacheStatus::miss;
        std::string note;
    };

    /// Loads the entry for `key`, or computes and stores it. A corrupt entry is recomputed and overwritten.
    template <class Compute>
    Fetched fetch(const Json& key, Compute&& compute) const {
        Fetched f;
        try {
            if (auto p = load(key)) {
                f.payload = std::move(*p);
                f.status = CacheStatus::hit;
                return f;
            }
        } catch (const CorruptCache& e) {
            f.status = CacheStatus::recovered;
            f.note = std::string(e.name()) + ": " + e.what();
        }
        f.payload = compute();
        store(key, f.payload);
        return f;
    }

private:
    std::filesystem::path dir_;
    int schema_;
};

} // namespace orbiqrr
