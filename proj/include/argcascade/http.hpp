#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace argcascade::http {

struct Url {
    std::string scheme; // "http" or "https"
    std::string host;
    int port = 0;
    std::string path; // without trailing slash, may be empty

    /// "scheme://host:port", the part httplib wants.
    std::string origin() const;
};

/// Parses http(s)://host[:port][/path]. Throws ConfigError.
Url parse_url(const std::string& text);

using Headers = std::vector<std::pair<std::string, std::string>>;

struct Response {
    int status = 0;        // 0 when the request never got an HTTP answer
    std::string body;
    std::string error;     // transport-level description when status == 0
};

/// Minimal JSON-over-HTTP POST surface so tests and offline modes can swap
/// the network out.
class Transport {
public:
    virtual ~Transport() = default;
    virtual Response post(const std::string& path, const std::string& body, const Headers& headers) = 0;
};

/// cpp-httplib backed transport. Thread-safe: each call opens its own client.
class HttplibTransport : public Transport {
public:
    explicit HttplibTransport(Url base, std::chrono::seconds timeout = std::chrono::seconds(60));
    Response post(const std::string& path, const std::string& body, const Headers& headers) override;

private:
    Url base_;
    std::chrono::seconds timeout_;
};

/// Exponential backoff: delay(n) = min(max_delay, base_delay * 2^(n-1)),
/// optionally scaled by a uniform factor in [1 - jitter, 1 + jitter].
struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{250};
    std::chrono::milliseconds max_delay{8000};
    double jitter = 0.0;

    std::chrono::milliseconds delay(int attempt, std::mt19937_64* rng = nullptr) const;
};

/// 429 and 5xx, plus anything that never produced a status.
bool is_retryable(int status);

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper real_sleeper();

} // namespace argcascade::http
