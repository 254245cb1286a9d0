#include "argcascade/error.hpp"
#include "argcascade/refiner.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>
#include <thread>

namespace argcascade::refiner {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string cache_key(std::string_view prompt, std::string_view model) {
    // A JSON pair keeps (prompt, model) boundaries unambiguous.
    return sha256_hex(json::array({prompt, model}).dump());
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::optional<CacheEntry> ResponseCache::get(const std::string& key) const {
    std::lock_guard lock(mutex_);
    std::ifstream in(dir_ / (key + ".json"));
    if (!in) return std::nullopt;
    auto j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("reply")) return std::nullopt;
    CacheEntry e;
    e.model = j.value("model", std::string{});
    e.prompt = j.value("prompt", std::string{});
    e.reply = j.value("reply", std::string{});
    e.prompt_tokens = j.value("prompt_tokens", 0LL);
    e.completion_tokens = j.value("completion_tokens", 0LL);
    return e;
}

void ResponseCache::put(const std::string& key, const CacheEntry& entry) {
    json j{{"model", entry.model},
           {"prompt", entry.prompt},
           {"reply", entry.reply},
           {"prompt_tokens", entry.prompt_tokens},
           {"completion_tokens", entry.completion_tokens}};
    std::lock_guard lock(mutex_);
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    const auto tmp = dir_ / (key + ".tmp." + tid.str());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write cache file " + tmp.string());
        out << j.dump(2, ' ', false, json::error_handler_t::replace) << '\n';
    }
    std::error_code ec;
    std::filesystem::rename(tmp, dir_ / (key + ".json"), ec);
    if (ec) throw IoError("cannot finalize cache file: " + ec.message());
}

} // namespace argcascade::refiner
