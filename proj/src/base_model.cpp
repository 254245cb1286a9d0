#include "argcascade/base_model.hpp"

#include "argcascade/calibration.hpp"
#include "argcascade/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

namespace argcascade {

using nlohmann::json;

void ProbabilityVector::validate() const {
    const auto& s = LabelScheme::by_id(scheme);
    if (probs.size() != s.size()) {
        throw ValidationError("probability vector has " + std::to_string(probs.size()) + " entries, scheme " +
                              s.name() + " has " + std::to_string(s.size()) + " classes");
    }
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probability " + std::to_string(p) + " outside [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
}

std::size_t ProbabilityVector::argmax() const {
    if (probs.empty()) throw ValidationError("argmax of empty probability vector");
    // max_element returns the first maximum, which is the lowest index.
    return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

ProbabilityVector softmax(SchemeId scheme, std::span<const double> logits) {
    ProbabilityVector out{scheme, {}};
    if (logits.empty()) return out;
    const double hi = *std::max_element(logits.begin(), logits.end());
    out.probs.reserve(logits.size());
    double z = 0.0;
    for (double l : logits) z += out.probs.emplace_back(std::exp(l - hi));
    for (double& p : out.probs) p /= z;
    return out;
}

PredictionRecord make_record(std::string sample_id, ProbabilityVector probs) {
    probs.validate();
    PredictionRecord r;
    r.sample_id = std::move(sample_id);
    r.predicted_label = LabelScheme::by_id(probs.scheme).classes()[probs.argmax()];
    r.uncertainty = calibration::uncertainty(probs);
    r.probs = std::move(probs);
    return r;
}

// PredictionFile

const PredictionRecord& PredictionFile::at(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("no prediction for sample '" + id + "'");
    return records[it->second];
}

void PredictionFile::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!index_.emplace(records[i].sample_id, i).second) {
            throw ValidationError("duplicate prediction id '" + records[i].sample_id + "'");
        }
    }
}

PredictionFile load_predictions(std::istream& in) {
    PredictionFile file;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ParseError("invalid prediction JSON", lineno);
        try {
            if (!header) {
                file.scheme = LabelScheme::by_name(j.at("scheme").get<std::string>()).id();
                file.model = j.value("model", std::string{});
                header = true;
                continue;
            }
            auto id = j.at("id").get<std::string>();
            ProbabilityVector pv{file.scheme, j.at("probs").get<std::vector<double>>()};
            auto record = make_record(id, std::move(pv));
            if (auto l = j.find("label"); l != j.end() && !l->is_null()) {
                file.gold[id] = LabelScheme::by_id(file.scheme).canonical(l->get<std::string>());
            }
            file.records.push_back(std::move(record));
        } catch (const json::exception& e) {
            throw ParseError(std::string("prediction record: ") + e.what(), lineno);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")");
        }
    }
    if (!header) throw ParseError("prediction file has no header line");
    file.rebuild_index();
    return file;
}

void save_predictions(std::ostream& out, const PredictionFile& file) {
    out << json{{"scheme", LabelScheme::by_id(file.scheme).name()}, {"model", file.model}}.dump() << '\n';
    for (const auto& r : file.records) {
        json j{{"id", r.sample_id}, {"probs", r.probs.probs}};
        if (auto g = file.gold.find(r.sample_id); g != file.gold.end()) j["label"] = g->second;
        out << j.dump() << '\n';
    }
}

// BaseModel

std::vector<PredictionRecord> BaseModel::predict_batch(std::span<const ArgumentSample> samples) {
    std::vector<PredictionRecord> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(make_record(s.id, predict(s)));
    return out;
}

ProbabilityVector PrecomputedModel::predict(const ArgumentSample& sample) {
    return file_.at(sample.id).probs;
}

// HttpModel

HttpModel::HttpModel(HttpModelConfig config, std::shared_ptr<http::Transport> transport, http::Sleeper sleeper)
    : config_(std::move(config)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
    if (!transport_) transport_ = std::make_shared<http::HttplibTransport>(http::parse_url(config_.endpoint));
    if (config_.max_batch == 0) config_.max_batch = 1;
    if (config_.parallelism == 0) config_.parallelism = 1;
}

std::size_t HttpModel::attempts() const {
    std::lock_guard lock(mutex_);
    return attempts_;
}

std::vector<ProbabilityVector> HttpModel::request(std::span<const ArgumentSample> chunk) {
    json body{{"texts", json::array()}, {"theses", json::array()}};
    for (const auto& s : chunk) {
        body["texts"].push_back(s.claim_text);
        body["theses"].push_back(s.thesis_text ? json(*s.thesis_text) : json(nullptr));
    }
    const auto payload = body.dump();

    http::Response res;
    for (int attempt = 1;; ++attempt) {
        res = transport_->post("/predict", payload, {});
        {
            std::lock_guard lock(mutex_);
            ++attempts_;
        }
        if (res.status >= 200 && res.status < 300) break;
        if (!http::is_retryable(res.status) || attempt >= config_.retry.max_attempts) {
            throw TransportError("inference request failed: " +
                                     (res.status ? "HTTP " + std::to_string(res.status) : res.error),
                                 res.status);
        }
        sleeper_(config_.retry.delay(attempt));
    }

    auto j = json::parse(res.body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("probs") || !j["probs"].is_array()) {
        throw ValidationError("inference response lacks a 'probs' array");
    }
    const auto& rows = j["probs"];
    if (rows.size() != chunk.size()) {
        throw ValidationError("inference response has " + std::to_string(rows.size()) + " vectors for " +
                              std::to_string(chunk.size()) + " inputs");
    }
    std::vector<ProbabilityVector> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (!row.is_array()) throw ValidationError("inference response row is not an array");
        ProbabilityVector pv{config_.scheme, row.get<std::vector<double>>()};
        pv.validate();
        out.push_back(std::move(pv));
    }
    return out;
}

ProbabilityVector HttpModel::predict(const ArgumentSample& sample) {
    return predict_batch(std::span(&sample, 1)).front().probs;
}

std::vector<PredictionRecord> HttpModel::predict_batch(std::span<const ArgumentSample> samples) {
    if (samples.empty()) throw ValidationError("predict_batch: empty batch");

    std::vector<std::optional<ProbabilityVector>> vectors(samples.size());
    std::vector<std::size_t> missing;
    {
        std::lock_guard lock(mutex_);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (auto it = session_cache_.find(samples[i].id); it != session_cache_.end()) vectors[i] = it->second;
            else missing.push_back(i);
        }
    }

    // Chunk the misses; workers pull chunk indices until none are left.
    std::vector<std::vector<std::size_t>> chunks;
    for (std::size_t i = 0; i < missing.size(); i += config_.max_batch) {
        chunks.emplace_back(missing.begin() + static_cast<std::ptrdiff_t>(i),
                            missing.begin() + static_cast<std::ptrdiff_t>(std::min(missing.size(), i + config_.max_batch)));
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < chunks.size(); c = next++) {
            std::vector<ArgumentSample> chunk;
            for (auto i : chunks[c]) chunk.push_back(samples[i]);
            auto got = request(chunk);
            for (std::size_t k = 0; k < got.size(); ++k) vectors[chunks[c][k]] = std::move(got[k]);
        }
    };
    std::vector<std::future<void>> workers;
    const auto n_workers = std::min(config_.parallelism, chunks.size());
    for (std::size_t w = 0; w < n_workers; ++w) workers.push_back(std::async(std::launch::async, worker));
    for (auto& f : workers) f.get();

    std::vector<PredictionRecord> out;
    out.reserve(samples.size());
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        session_cache_.try_emplace(samples[i].id, *vectors[i]);
        out.push_back(make_record(samples[i].id, session_cache_.at(samples[i].id)));
    }
    return out;
}

std::vector<PredictionRecord> predict_http(const std::string& endpoint, std::span<const ArgumentSample> batch,
                                           SchemeId scheme) {
    HttpModelConfig cfg;
    cfg.endpoint = endpoint;
    cfg.scheme = scheme;
    HttpModel model(std::move(cfg));
    return model.predict_batch(batch);
}

} // namespace argcascade
