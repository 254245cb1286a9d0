#pragma once

#include "argcascade/base_model.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace argcascade::calibration {

/// Label-free uncertainty: 1 - max(p). Lies in [0, 1 - 1/|classes|].
double uncertainty(const ProbabilityVector& probs);

/// Gold-aware score 1 - p[gold]; the literal per-sample error signal.
/// Needs the gold label, so it is only meant for offline analysis.
double oracle_score(const ProbabilityVector& probs, std::size_t gold_index);

/// Uncertainty threshold derived from a calibration split.
///
/// Samples with uncertainty strictly greater than `gamma` are delegated. With
/// 0 < k < n, gamma is the (n-k)-th smallest score, so exactly the k largest
/// scores lie above it when scores are distinct. Ties at the boundary can
/// only shrink the delegated set, down to k - (multiplicity of the boundary
/// score).
struct CalibrationProfile {
    std::vector<double> scores; // ascending; empty when loaded from JSON
    double fraction = 0.0;
    std::size_t k = 0;
    double gamma = std::numeric_limits<double>::infinity();
    std::size_t n = 0;

    bool delegates(double uncertainty) const { return uncertainty > gamma; }
};

/// k = ceil(fraction * n), clamped to [0, n]. A relative slack of 1e-9 on the
/// product keeps decimal fractions such as 0.7 from being pushed over an
/// integer by binary rounding.
std::size_t delegation_count(double fraction, std::size_t n);

/// Delegation fraction used when none is given: 0.2 for Args.me, 0.25 for
/// US2016, and 0.2 for UKP (an assumption, no reference value exists).
double default_fraction(SchemeId scheme);

/// Builds a profile from raw scores (any order). Throws ValidationError on
/// empty input, a fraction outside [0,1], or a score outside [0,1].
CalibrationProfile calibrate_scores(std::vector<double> scores, double fraction);

/// Profile over the uncertainty of each record.
CalibrationProfile calibrate(std::span<const PredictionRecord> records, double fraction);

enum class Route { Base, Llm };
const char* to_string(Route r);

std::map<std::string, Route> route(std::span<const PredictionRecord> records, const CalibrationProfile& profile);

/// {"fraction", "k", "gamma", "n"}; the infinite sentinels are written as the
/// strings "inf" / "-inf".
std::string to_json(const CalibrationProfile& profile);
CalibrationProfile from_json(const std::string& text);

} // namespace argcascade::calibration
