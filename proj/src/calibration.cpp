#include "argcascade/calibration.hpp"

#include "argcascade/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace argcascade::calibration {

using nlohmann::json;

double uncertainty(const ProbabilityVector& probs) { return 1.0 - probs.max(); }

double oracle_score(const ProbabilityVector& probs, std::size_t gold_index) {
    if (gold_index >= probs.probs.size()) throw ValidationError("gold index outside probability vector");
    return 1.0 - probs.probs[gold_index];
}

double default_fraction(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::ArgsmeBinary: return 0.2;
    case SchemeId::UkpTernary: return 0.2;
    case SchemeId::Us2016Quaternary: return 0.25;
    }
    return 0.2;
}

std::size_t delegation_count(double fraction, std::size_t n) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ValidationError("delegation fraction must lie in [0, 1]");
    const double product = fraction * static_cast<double>(n);
    const double k = std::ceil(product - 1e-9 * std::max(1.0, product));
    return std::min(n, static_cast<std::size_t>(std::max(0.0, k)));
}

CalibrationProfile calibrate_scores(std::vector<double> scores, double fraction) {
    if (scores.empty()) throw ValidationError("calibrate: no records");
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("calibrate: score outside [0, 1]");
    }
    CalibrationProfile p;
    p.k = delegation_count(fraction, scores.size());
    std::sort(scores.begin(), scores.end());
    p.scores = std::move(scores);
    p.fraction = fraction;
    p.n = p.scores.size();
    if (p.k == 0) p.gamma = std::numeric_limits<double>::infinity();
    else if (p.k == p.n) p.gamma = -std::numeric_limits<double>::infinity();
    else p.gamma = p.scores[p.n - p.k - 1];
    return p;
}

CalibrationProfile calibrate(std::span<const PredictionRecord> records, double fraction) {
    std::vector<double> scores;
    scores.reserve(records.size());
    for (const auto& r : records) scores.push_back(r.uncertainty);
    return calibrate_scores(std::move(scores), fraction);
}

const char* to_string(Route r) { return r == Route::Llm ? "LLM" : "BASE"; }

std::map<std::string, Route> route(std::span<const PredictionRecord> records, const CalibrationProfile& profile) {
    std::map<std::string, Route> out;
    for (const auto& r : records) out[r.sample_id] = profile.delegates(r.uncertainty) ? Route::Llm : Route::Base;
    return out;
}

std::string to_json(const CalibrationProfile& p) {
    json g = std::isinf(p.gamma) ? json(p.gamma > 0 ? "inf" : "-inf") : json(p.gamma);
    return json{{"fraction", p.fraction}, {"k", p.k}, {"gamma", g}, {"n", p.n}}.dump();
}

CalibrationProfile from_json(const std::string& text) {
    auto j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError("calibration profile is not a JSON object");
    try {
        CalibrationProfile p;
        p.fraction = j.at("fraction").get<double>();
        p.k = j.at("k").get<std::size_t>();
        p.n = j.at("n").get<std::size_t>();
        const auto& g = j.at("gamma");
        if (g.is_string()) {
            const auto s = g.get<std::string>();
            if (s == "inf") p.gamma = std::numeric_limits<double>::infinity();
            else if (s == "-inf") p.gamma = -std::numeric_limits<double>::infinity();
            else throw ParseError("calibration gamma '" + s + "' is not a number");
        } else {
            p.gamma = g.get<double>();
        }
        if (p.k > p.n) throw ValidationError("calibration profile has k > n");
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("calibration profile: ") + e.what());
    }
}

} // namespace argcascade::calibration
