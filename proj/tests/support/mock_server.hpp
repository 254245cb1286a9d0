#pragma once

// Scripted HTTP server on a loopback port for wire-level tests.

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <memory>

#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace testing {

struct RecordedRequest {
    std::string path;
    std::string body;
    httplib::Headers headers;
};

struct Reply {
    int status = 200;
    std::string body;
};

class MockServer {
public:
    using Handler = std::function<Reply(const RecordedRequest&)>;

    explicit MockServer(Handler handler) : handler_(std::move(handler)) {
        server_.Post(".*", [this](const httplib::Request& req, httplib::Response& res) {
            RecordedRequest rec{req.path, req.body, req.headers};
            Reply reply;
            {
                std::lock_guard lock(mutex_);
                requests_.push_back(rec);
            }
            reply = handler_(rec);
            res.status = reply.status;
            res.set_content(reply.body, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw std::runtime_error("mock server could not bind");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    MockServer(const MockServer&) = delete;
    MockServer& operator=(const MockServer&) = delete;

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    std::vector<RecordedRequest> requests() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }
    std::size_t request_count() const {
        std::lock_guard lock(mutex_);
        return requests_.size();
    }

private:
    Handler handler_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    mutable std::mutex mutex_;
    std::vector<RecordedRequest> requests_;
};

/// Plays back `script` in order, repeating the last reply once exhausted.
inline MockServer::Handler sequence(std::vector<Reply> script) {
    auto state = std::make_shared<std::pair<std::mutex, std::size_t>>();
    return [script = std::move(script), state](const RecordedRequest&) {
        std::lock_guard lock(state->first);
        auto i = std::min(state->second++, script.size() - 1);
        return script[i];
    };
}

inline std::string chat_reply(const std::string& content) {
    return R"({"id":"x","object":"chat.completion","choices":[{"index":0,"message":{"role":"assistant","content":)" +
           nlohmann::json(content).dump() + R"(},"finish_reason":"stop"}],"usage":{"prompt_tokens":42,"completion_tokens":9}})";
}

} // namespace testing
