#include "argcascade/http.hpp"

#include "argcascade/error.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <regex>
#include <thread>

namespace argcascade::http {

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

Url parse_url(const std::string& text) {
    static const std::regex re(R"(^(https?)://([^/:]+)(?::(\d+))?(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw ConfigError("invalid URL '" + text + "'");
    Url u;
    u.scheme = m[1].str();
    std::transform(u.scheme.begin(), u.scheme.end(), u.scheme.begin(), ::tolower);
    u.host = m[2].str();
    u.port = m[3].matched ? std::stoi(m[3].str()) : (u.scheme == "https" ? 443 : 80);
    u.path = m[4].matched ? m[4].str() : "";
    while (!u.path.empty() && u.path.back() == '/') u.path.pop_back();
    return u;
}

HttplibTransport::HttplibTransport(Url base, std::chrono::seconds timeout)
    : base_(std::move(base)), timeout_(timeout) {}

Response HttplibTransport::post(const std::string& path, const std::string& body, const Headers& headers) {
    httplib::Client client(base_.origin());
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);

    Response out;
    auto res = client.Post(base_.path + path, h, body, "application/json");
    if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
    }
    out.status = res->status;
    out.body = std::move(res->body);
    return out;
}

std::chrono::milliseconds RetryPolicy::delay(int attempt, std::mt19937_64* rng) const {
    const double exp = std::ldexp(1.0, std::clamp(attempt - 1, 0, 30));
    double ms = std::min(static_cast<double>(max_delay.count()), static_cast<double>(base_delay.count()) * exp);
    if (rng && jitter > 0.0) {
        std::uniform_real_distribution<double> u(1.0 - jitter, 1.0 + jitter);
        ms *= u(*rng);
    }
    return std::chrono::milliseconds(static_cast<long long>(std::llround(ms)));
}

bool is_retryable(int status) { return status == 0 || status == 429 || (status >= 500 && status <= 599); }

Sleeper real_sleeper() {
    return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

} // namespace argcascade::http
