#pragma once

#include "argcascade/base_model.hpp"
#include "argcascade/calibration.hpp"
#include "argcascade/corpus.hpp"
#include "argcascade/refiner.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace argcascade::cascade {

enum class Source { Base, Llm, LlmFallbackBase };
const char* to_string(Source s);
Source source_from_string(std::string_view s);

/// Final decision for one sample.
///  - Base: not delegated, final == base.
///  - Llm: delegated and the reply parsed; final is the parsed label.
///  - LlmFallbackBase: delegated but the reply was unparseable or never
///    arrived; final == base.
struct CascadeResult {
    std::string sample_id;
    std::string final_label;
    Source source = Source::Base;
    std::string base_prediction;
    double uncertainty = 0.0;
    std::optional<std::string> llm_raw;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
};

/// Routes every record through `profile`, sends only the delegated samples
/// to `refiner`, and assembles results in record order. `samples` may be in
/// any order but must contain every record id. The refiner is checked
/// before anything is sent.
std::vector<CascadeResult> run_cascade(std::span<const PredictionRecord> records,
                                       std::span<const ArgumentSample> samples,
                                       const calibration::CalibrationProfile& profile, refiner::Refiner& refiner);

struct FullRun {
    calibration::CalibrationProfile profile;
    std::vector<CascadeResult> results;
};

/// Calibrates on `train` (uncertainties only, never labels) and runs the
/// cascade on `eval`.
FullRun run_full(std::span<const PredictionRecord> train, std::span<const PredictionRecord> eval,
                 std::span<const ArgumentSample> samples, double fraction, refiner::Refiner& refiner);

/// JSONL: {"id", "final", "source", "base", "uncertainty", "llm_raw"?}.
void write_results(std::ostream& out, const std::vector<CascadeResult>& results);
std::vector<CascadeResult> read_results(std::istream& in);

/// Results a base-only run would produce: every record kept.
std::vector<CascadeResult> base_only(std::span<const PredictionRecord> records);

} // namespace argcascade::cascade
