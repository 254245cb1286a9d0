#pragma once

#include "argcascade/corpus.hpp"
#include "argcascade/http.hpp"
#include "argcascade/labels.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace argcascade::refiner {

/// What the refiner is allowed to see of a sample: no gold label.
struct RefinementInput {
    std::string sample_id;
    SchemeId scheme = SchemeId::ArgsmeBinary;
    std::string claim;
    std::optional<std::string> thesis;
    std::string topic;
};

RefinementInput from_sample(const ArgumentSample& sample);

// Prompting

struct PromptTemplate {
    SchemeId scheme;
    std::string text; // contains one {thesis} and one {claim} slot
};

/// The binary template is the published one, byte for byte. The ternary and
/// quaternary variants follow the same pattern for UKP and US2016.
const PromptTemplate& prompt_template(SchemeId scheme);

/// Fills the template. ARGSME_BINARY and US2016_QUATERNARY need a thesis;
/// UKP_TERNARY uses the thesis if present, else the topic. Throws
/// ValidationError on an empty claim or a missing thesis.
std::string render_prompt(const RefinementInput& input);
std::string render_prompt(const ArgumentSample& sample);

// Verdicts

inline constexpr const char* kUnparseable = "UNPARSEABLE";

/// Keyword reading of a one-sentence reply. Clauses are scanned in order
/// (split at . , ; : ! ? and newlines); inside a clause the longest keyword
/// starting at each word is taken. The first clause with any hit decides: one
/// class wins, two or more classes make the reply unparseable. nullopt means
/// UNPARSEABLE.
std::optional<std::string> parse_verdict(std::string_view raw, const LabelScheme& scheme);

/// A reply that parse_verdict maps back to `label`. Used by mock refiners.
std::string canonical_reply(const LabelScheme& scheme, std::string_view label);

enum class VerdictStatus { Ok, TransportFailure };

struct LlmVerdict {
    std::string sample_id;
    VerdictStatus status = VerdictStatus::Ok;
    std::string raw_text;
    std::optional<std::string> parsed_label; // nullopt: UNPARSEABLE or transport failure
    long long latency_ms = 0;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    int attempts = 0;          // HTTP attempts made for this verdict; 0 on a cache hit
    bool from_cache = false;
    std::string error;         // set when status == TransportFailure

    bool usable() const { return status == VerdictStatus::Ok && parsed_label.has_value(); }
};

/// Anything that can re-classify delegated samples.
class Refiner {
public:
    virtual ~Refiner() = default;
    /// Throws ConfigError if the refiner cannot run. Called before any work.
    virtual void check_ready() const {}
    /// One verdict per input, in input order. Transport failures are reported
    /// per verdict, never thrown.
    virtual std::vector<LlmVerdict> classify(std::span<const RefinementInput> inputs) = 0;
};

// Caching

std::string sha256_hex(std::string_view data);
/// Content address of a (prompt, model) pair.
std::string cache_key(std::string_view prompt, std::string_view model);

struct CacheEntry {
    std::string model;
    std::string prompt;
    std::string reply;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
};

/// One JSON file per reply, named by its 64-hex content hash.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<CacheEntry> get(const std::string& key) const;
    void put(const std::string& key, const CacheEntry& entry);
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

// Remote chat-completions refiner

struct ChatConfig {
    std::string base_url = "https://api.openai.com";
    std::string model = "gpt-4";
    std::string api_key;
    bool require_api_key = true;
    std::optional<std::filesystem::path> cache_dir;
    std::size_t parallelism = 4;
    double max_requests_per_second = 0.0; // 0: unlimited
    http::RetryPolicy retry{5, std::chrono::milliseconds(500), std::chrono::milliseconds(30000), 0.25};
    std::uint64_t jitter_seed = 0x5eed;
    /// Args.me samples without a conclusion slot still need a thesis for the
    /// prompt; when set, the topic (the conclusion text) fills it.
    bool thesis_from_topic = true;
};

/// Builds the chat-completions request body for one prompt.
std::string chat_request_body(const std::string& model, const std::string& prompt);

struct RemoteStats {
    std::size_t requests = 0;  // distinct prompts sent over the wire
    std::size_t attempts = 0;  // HTTP attempts, retries included
    std::size_t cache_hits = 0;
};

class RemoteRefiner : public Refiner {
public:
    explicit RemoteRefiner(ChatConfig config, std::shared_ptr<http::Transport> transport = nullptr,
                           http::Sleeper sleeper = http::real_sleeper());

    void check_ready() const override;
    std::vector<LlmVerdict> classify(std::span<const RefinementInput> inputs) override;

    RemoteStats stats() const;
    const ChatConfig& config() const { return config_; }

    /// The exact prompt classify() would send for `input`.
    std::string prompt_for(const RefinementInput& input) const { return render_prompt(prepare(input)); }

private:
    RefinementInput prepare(const RefinementInput& input) const;
    LlmVerdict classify_one(const RefinementInput& input);
    void wait_for_rate_slot();

    ChatConfig config_;
    std::shared_ptr<http::Transport> transport_;
    http::Sleeper sleeper_;
    std::optional<ResponseCache> cache_;

    mutable std::mutex mutex_;
    RemoteStats stats_;
    std::mt19937_64 rng_;
    std::chrono::steady_clock::time_point next_slot_{};
};

/// Offline transport answering chat requests from a transcript that maps
/// sha256_hex(prompt) to a reply. Unknown prompts get HTTP 404.
class TranscriptTransport : public http::Transport {
public:
    explicit TranscriptTransport(std::map<std::string, std::string> replies) : replies_(std::move(replies)) {}
    /// Reads `{"<hash>": "<reply>", ...}` or JSONL lines `{"hash", "reply"}`.
    static TranscriptTransport from_file(const std::filesystem::path& path);

    http::Response post(const std::string& path, const std::string& body, const http::Headers& headers) override;

private:
    std::map<std::string, std::string> replies_;
};

/// In-process refiner whose reply is computed by a callback. A nullopt
/// reply is reported as a transport failure.
class ScriptedRefiner : public Refiner {
public:
    using ReplyFn = std::function<std::optional<std::string>(const RefinementInput&)>;
    explicit ScriptedRefiner(ReplyFn reply) : reply_(std::move(reply)) {}

    std::vector<LlmVerdict> classify(std::span<const RefinementInput> inputs) override;
    std::size_t calls() const { return calls_; }

private:
    ReplyFn reply_;
    std::size_t calls_ = 0;
};

} // namespace argcascade::refiner
