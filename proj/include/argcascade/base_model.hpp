#pragma once

#include "argcascade/corpus.hpp"
#include "argcascade/http.hpp"
#include "argcascade/labels.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace argcascade {

/// Class probabilities aligned with the scheme's class order.
struct ProbabilityVector {
    SchemeId scheme = SchemeId::ArgsmeBinary;
    std::vector<double> probs;

    static constexpr double kSimplexTolerance = 1e-6;

    /// Throws ValidationError unless every p is in [0,1], the length matches
    /// the scheme and the sum is 1 within kSimplexTolerance.
    void validate() const;
    /// Index of the largest probability; ties go to the lowest index.
    std::size_t argmax() const;
    double max() const { return probs[argmax()]; }
};

/// Turns raw scores into a probability vector.
ProbabilityVector softmax(SchemeId scheme, std::span<const double> logits);

/// Base-model output for one sample. Deliberately carries no gold label.
struct PredictionRecord {
    std::string sample_id;
    ProbabilityVector probs;
    std::string predicted_label;
    double uncertainty = 0.0;
};

/// Validates `probs` and derives the predicted label and uncertainty.
PredictionRecord make_record(std::string sample_id, ProbabilityVector probs);

/// A parsed prediction file: header plus records in file order.
struct PredictionFile {
    SchemeId scheme = SchemeId::ArgsmeBinary;
    std::string model;
    std::vector<PredictionRecord> records;
    /// Optional per-record gold labels from the file; kept apart from the
    /// records so routing never sees them.
    std::map<std::string, std::string> gold;

    const PredictionRecord& at(const std::string& id) const;
    bool contains(const std::string& id) const { return index_.count(id) != 0; }

    void rebuild_index();

private:
    std::unordered_map<std::string, std::size_t> index_;
};

/// Reads the JSONL prediction format: a `{"scheme", "model"}` header line,
/// then `{"id", "probs", "label"?}` per record.
PredictionFile load_predictions(std::istream& in);
void save_predictions(std::ostream& out, const PredictionFile& file);

/// Base-classifier contract. The same sample id must map to the same vector
/// for the lifetime of the object.
class BaseModel {
public:
    virtual ~BaseModel() = default;
    virtual const std::string& identity() const = 0;
    virtual const LabelScheme& scheme() const = 0;
    virtual ProbabilityVector predict(const ArgumentSample& sample) = 0;

    /// One record per sample, same order. The default calls predict() in turn.
    virtual std::vector<PredictionRecord> predict_batch(std::span<const ArgumentSample> samples);
};

/// Serves predictions precomputed by an external trainer.
class PrecomputedModel : public BaseModel {
public:
    explicit PrecomputedModel(PredictionFile file) : file_(std::move(file)) {}

    const std::string& identity() const override { return file_.model; }
    const LabelScheme& scheme() const override { return LabelScheme::by_id(file_.scheme); }
    ProbabilityVector predict(const ArgumentSample& sample) override;

private:
    PredictionFile file_;
};

struct HttpModelConfig {
    std::string endpoint;            // base URL; requests go to {endpoint}/predict
    std::string model_name = "remote";
    SchemeId scheme = SchemeId::ArgsmeBinary;
    std::size_t max_batch = 32;
    std::size_t parallelism = 4;
    http::RetryPolicy retry{};       // 3 attempts by default
};

/// Client for an inference server speaking POST /predict.
class HttpModel : public BaseModel {
public:
    explicit HttpModel(HttpModelConfig config, std::shared_ptr<http::Transport> transport = nullptr,
                       http::Sleeper sleeper = http::real_sleeper());

    const std::string& identity() const override { return config_.model_name; }
    const LabelScheme& scheme() const override { return LabelScheme::by_id(config_.scheme); }
    ProbabilityVector predict(const ArgumentSample& sample) override;
    std::vector<PredictionRecord> predict_batch(std::span<const ArgumentSample> samples) override;

    /// Total HTTP attempts made so far, retries included.
    std::size_t attempts() const;

private:
    std::vector<ProbabilityVector> request(std::span<const ArgumentSample> chunk);

    HttpModelConfig config_;
    std::shared_ptr<http::Transport> transport_;
    http::Sleeper sleeper_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, ProbabilityVector> session_cache_;
    std::size_t attempts_ = 0;
};

/// Single-shot form of HttpModel::predict_batch.
std::vector<PredictionRecord> predict_http(const std::string& endpoint, std::span<const ArgumentSample> batch,
                                           SchemeId scheme);

} // namespace argcascade
