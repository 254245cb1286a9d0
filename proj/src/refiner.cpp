#include "argcascade/refiner.hpp"

#include "argcascade/error.hpp"

#include <json.hpp>

#include <atomic>
#include <fstream>
#include <future>
#include <iterator>
#include <sstream>

namespace argcascade::refiner {

using nlohmann::json;

std::string chat_request_body(const std::string& model, const std::string& prompt) {
    return json{{"model", model},
                {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
                {"temperature", 0}}
        .dump(-1, ' ', false, json::error_handler_t::replace);
}

RemoteRefiner::RemoteRefiner(ChatConfig config, std::shared_ptr<http::Transport> transport, http::Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      rng_(config_.jitter_seed) {
    if (config_.parallelism == 0) config_.parallelism = 1;
    if (config_.retry.max_attempts < 1) config_.retry.max_attempts = 1;
    if (config_.cache_dir) cache_.emplace(*config_.cache_dir);
}

void RemoteRefiner::check_ready() const {
    if (config_.require_api_key && config_.api_key.empty()) {
        throw ConfigError("no LLM API key: set ARGCASCADE_API_KEY");
    }
    if (config_.model.empty()) throw ConfigError("no LLM model name configured");
    if (!transport_) http::parse_url(config_.base_url); // throws ConfigError on a bad URL
}

RemoteStats RemoteRefiner::stats() const {
    std::lock_guard lock(mutex_);
    return stats_;
}

void RemoteRefiner::wait_for_rate_slot() {
    if (config_.max_requests_per_second <= 0.0) return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / config_.max_requests_per_second));
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        slot = std::max(now, next_slot_);
        next_slot_ = slot + interval;
    }
    const auto wait = slot - std::chrono::steady_clock::now();
    if (wait > std::chrono::steady_clock::duration::zero()) {
        sleeper_(std::chrono::ceil<std::chrono::milliseconds>(wait));
    }
}

RefinementInput RemoteRefiner::prepare(const RefinementInput& original) const {
    RefinementInput input = original;
    if (config_.thesis_from_topic && input.scheme == SchemeId::ArgsmeBinary &&
        (!input.thesis || text::trim(*input.thesis).empty()) && !text::trim(input.topic).empty()) {
        input.thesis = input.topic;
    }
    return input;
}

LlmVerdict RemoteRefiner::classify_one(const RefinementInput& original) {
    const RefinementInput input = prepare(original);
    const auto prompt = render_prompt(input);
    const auto& scheme = LabelScheme::by_id(input.scheme);
    const auto key = cache_key(prompt, config_.model);

    LlmVerdict v;
    v.sample_id = input.sample_id;

    if (cache_) {
        if (auto hit = cache_->get(key)) {
            v.raw_text = hit->reply;
            v.parsed_label = parse_verdict(v.raw_text, scheme);
            v.prompt_tokens = hit->prompt_tokens;
            v.completion_tokens = hit->completion_tokens;
            v.from_cache = true;
            std::lock_guard lock(mutex_);
            ++stats_.cache_hits;
            return v;
        }
    }

    const auto body = chat_request_body(config_.model, prompt);
    http::Headers headers{{"Content-Type", "application/json"}};
    if (!config_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + config_.api_key);

    const auto t0 = std::chrono::steady_clock::now();
    http::Response res;
    {
        std::lock_guard lock(mutex_);
        ++stats_.requests;
    }
    for (int attempt = 1;; ++attempt) {
        wait_for_rate_slot();
        res = transport_->post("/v1/chat/completions", body, headers);
        v.attempts = attempt;
        std::chrono::milliseconds backoff{};
        {
            std::lock_guard lock(mutex_);
            ++stats_.attempts;
            backoff = config_.retry.delay(attempt, &rng_);
        }
        if (res.status >= 200 && res.status < 300) break;
        if (!http::is_retryable(res.status) || attempt >= config_.retry.max_attempts) {
            v.status = VerdictStatus::TransportFailure;
            v.error = res.status ? "HTTP " + std::to_string(res.status) : res.error;
            v.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
            return v;
        }
        sleeper_(backoff);
    }
    v.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();

    auto j = json::parse(res.body, nullptr, false);
    try {
        if (j.is_discarded()) throw std::runtime_error("response is not JSON");
        v.raw_text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (auto u = j.find("usage"); u != j.end() && u->is_object()) {
            v.prompt_tokens = u->value("prompt_tokens", 0LL);
            v.completion_tokens = u->value("completion_tokens", 0LL);
        }
    } catch (const std::exception& e) {
        v.status = VerdictStatus::TransportFailure;
        v.error = std::string("malformed chat response: ") + e.what();
        return v;
    }
    v.parsed_label = parse_verdict(v.raw_text, scheme);
    if (cache_) cache_->put(key, {config_.model, prompt, v.raw_text, v.prompt_tokens, v.completion_tokens});
    return v;
}

std::vector<LlmVerdict> RemoteRefiner::classify(std::span<const RefinementInput> inputs) {
    check_ready();
    if (!transport_) transport_ = std::make_shared<http::HttplibTransport>(http::parse_url(config_.base_url));
    // Render everything up front so a bad sample fails before any request.
    for (const auto& in : inputs) render_prompt(prepare(in));

    std::vector<LlmVerdict> out(inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) out[i] = classify_one(inputs[i]);
    };
    const auto n_workers = std::min(config_.parallelism, inputs.size());
    std::vector<std::future<void>> workers;
    for (std::size_t w = 0; w < n_workers; ++w) workers.push_back(std::async(std::launch::async, worker));
    for (auto& f : workers) f.get();
    return out;
}

// TranscriptTransport

TranscriptTransport TranscriptTransport::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open transcript " + path.string());
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::map<std::string, std::string> replies;

    auto whole = json::parse(data, nullptr, false);
    if (!whole.is_discarded() && whole.is_object() && !whole.contains("hash")) {
        for (const auto& [k, v] : whole.items()) {
            if (!v.is_string()) throw ParseError("transcript reply for " + k + " is not a string");
            replies[k] = v.get<std::string>();
        }
        return TranscriptTransport(std::move(replies));
    }
    std::istringstream lines(data);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("hash") || !j.contains("reply")) {
            throw ParseError("transcript line needs {\"hash\", \"reply\"}", lineno);
        }
        replies[j["hash"].get<std::string>()] = j["reply"].get<std::string>();
    }
    return TranscriptTransport(std::move(replies));
}

http::Response TranscriptTransport::post(const std::string&, const std::string& body, const http::Headers&) {
    auto j = json::parse(body, nullptr, false);
    if (j.is_discarded()) return {400, R"({"error":"bad json"})", {}};
    std::string prompt;
    try {
        prompt = j.at("messages").at(0).at("content").get<std::string>();
    } catch (const json::exception&) {
        return {400, R"({"error":"no user message"})", {}};
    }
    auto it = replies_.find(sha256_hex(prompt));
    if (it == replies_.end()) return {404, R"({"error":"prompt not in transcript"})", {}};
    json choice{{"index", 0},
                {"message", {{"role", "assistant"}, {"content", it->second}}},
                {"finish_reason", "stop"}};
    json reply{{"choices", json::array({choice})},
               {"usage", {{"prompt_tokens", 0}, {"completion_tokens", 0}}}};
    return {200, reply.dump(), {}};
}

// ScriptedRefiner

std::vector<LlmVerdict> ScriptedRefiner::classify(std::span<const RefinementInput> inputs) {
    std::vector<LlmVerdict> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) {
        ++calls_;
        LlmVerdict v;
        v.sample_id = in.sample_id;
        v.attempts = 1;
        if (auto reply = reply_(in)) {
            v.raw_text = *reply;
            v.parsed_label = parse_verdict(v.raw_text, LabelScheme::by_id(in.scheme));
        } else {
            v.status = VerdictStatus::TransportFailure;
            v.error = "scripted transport failure";
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace argcascade::refiner
