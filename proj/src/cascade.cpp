#include "argcascade/cascade.hpp"

#include "argcascade/error.hpp"

#include <json.hpp>

#include <unordered_map>

namespace argcascade::cascade {

using nlohmann::json;

const char* to_string(Source s) {
    switch (s) {
    case Source::Base: return "BASE";
    case Source::Llm: return "LLM";
    case Source::LlmFallbackBase: return "LLM_FALLBACK_BASE";
    }
    return "BASE";
}

Source source_from_string(std::string_view s) {
    if (s == "BASE") return Source::Base;
    if (s == "LLM") return Source::Llm;
    if (s == "LLM_FALLBACK_BASE") return Source::LlmFallbackBase;
    throw ValidationError("unknown result source '" + std::string(s) + "'");
}

std::vector<CascadeResult> run_cascade(std::span<const PredictionRecord> records,
                                       std::span<const ArgumentSample> samples,
                                       const calibration::CalibrationProfile& profile, refiner::Refiner& refiner) {
    refiner.check_ready();
    std::unordered_map<std::string_view, const ArgumentSample*> by_id;
    for (const auto& s : samples) {
        if (!by_id.emplace(s.id, &s).second) throw ValidationError("duplicate sample id '" + s.id + "'");
    }

    std::vector<CascadeResult> out;
    out.reserve(records.size());
    std::vector<refiner::RefinementInput> delegated;
    std::vector<std::size_t> delegated_pos;

    for (const auto& r : records) {
        auto it = by_id.find(r.sample_id);
        if (it == by_id.end()) throw ValidationError("no sample for prediction '" + r.sample_id + "'");
        if (it->second->scheme != r.probs.scheme) {
            throw ValidationError("scheme mismatch between sample and prediction '" + r.sample_id + "'");
        }
        CascadeResult res;
        res.sample_id = r.sample_id;
        res.base_prediction = r.predicted_label;
        res.final_label = r.predicted_label;
        res.uncertainty = r.uncertainty;
        if (profile.delegates(r.uncertainty)) {
            delegated.push_back(refiner::from_sample(*it->second));
            delegated_pos.push_back(out.size());
        }
        out.push_back(std::move(res));
    }
    if (delegated.empty()) return out;

    auto verdicts = refiner.classify(delegated);
    if (verdicts.size() != delegated.size()) {
        throw ValidationError("refiner returned " + std::to_string(verdicts.size()) + " verdicts for " +
                              std::to_string(delegated.size()) + " samples");
    }
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        auto& res = out[delegated_pos[i]];
        auto& v = verdicts[i];
        if (v.sample_id != res.sample_id) throw ValidationError("refiner verdict order does not match input");
        res.prompt_tokens = v.prompt_tokens;
        res.completion_tokens = v.completion_tokens;
        if (v.status == refiner::VerdictStatus::Ok) res.llm_raw = v.raw_text;
        if (v.usable()) {
            res.source = Source::Llm;
            res.final_label = *v.parsed_label;
        } else {
            res.source = Source::LlmFallbackBase;
        }
    }
    return out;
}

FullRun run_full(std::span<const PredictionRecord> train, std::span<const PredictionRecord> eval,
                 std::span<const ArgumentSample> samples, double fraction, refiner::Refiner& refiner) {
    FullRun run;
    run.profile = calibration::calibrate(train, fraction);
    run.results = run_cascade(eval, samples, run.profile, refiner);
    return run;
}

void write_results(std::ostream& out, const std::vector<CascadeResult>& results) {
    for (const auto& r : results) {
        json j{{"id", r.sample_id},
               {"final", r.final_label},
               {"source", to_string(r.source)},
               {"base", r.base_prediction},
               {"uncertainty", r.uncertainty}};
        if (r.llm_raw) j["llm_raw"] = *r.llm_raw;
        out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
}

std::vector<CascadeResult> read_results(std::istream& in) {
    std::vector<CascadeResult> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ParseError("invalid result JSON", lineno);
        try {
            CascadeResult r;
            r.sample_id = j.at("id").get<std::string>();
            r.final_label = j.at("final").get<std::string>();
            r.source = source_from_string(j.at("source").get<std::string>());
            r.base_prediction = j.at("base").get<std::string>();
            r.uncertainty = j.at("uncertainty").get<double>();
            if (auto raw = j.find("llm_raw"); raw != j.end() && !raw->is_null()) r.llm_raw = raw->get<std::string>();
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw ParseError(std::string("result record: ") + e.what(), lineno);
        }
    }
    return out;
}

std::vector<CascadeResult> base_only(std::span<const PredictionRecord> records) {
    std::vector<CascadeResult> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        CascadeResult res;
        res.sample_id = r.sample_id;
        res.final_label = r.predicted_label;
        res.base_prediction = r.predicted_label;
        res.uncertainty = r.uncertainty;
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace argcascade::cascade
