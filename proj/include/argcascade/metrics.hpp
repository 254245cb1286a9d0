#pragma once

#include "argcascade/base_model.hpp"
#include "argcascade/cascade.hpp"
#include "argcascade/labels.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace argcascade::metrics {

// All rates below are percentages in [0, 100].

struct ClassScores {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;   // gold count
    std::size_t predicted = 0; // predicted count
    bool zero_support = false;
};

struct DelegationStats {
    std::size_t routed = 0; // source != BASE
    double fraction_routed = 0.0; // in [0, 1]
    std::optional<double> accuracy_routed;
    std::optional<double> accuracy_kept;
    std::size_t fallback_count = 0;
};

struct CostTally {
    std::size_t llm_calls = 0;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
};

struct EvaluationReport {
    SchemeId scheme = SchemeId::ArgsmeBinary;
    std::size_t n = 0;
    double top1 = 0.0;
    std::vector<ClassScores> per_class; // scheme order
    double macro_f1 = 0.0;              // unweighted mean, zero-support classes count as 0
    double micro_f1 = 0.0;              // equals top1 for single-label data
    /// confusion[gold][predicted], indices in scheme order.
    std::vector<std::vector<std::size_t>> confusion;
    DelegationStats delegation;
    CostTally cost;

    const ClassScores& at(std::string_view label) const;
};

/// Scores cascade output against `gold` (id -> label). Throws
/// ValidationError for a result without gold or a label outside the scheme.
EvaluationReport evaluate(std::span<const cascade::CascadeResult> results,
                          const std::map<std::string, std::string>& gold, const LabelScheme& scheme);

/// Base-only scoring straight from prediction records.
EvaluationReport evaluate(std::span<const PredictionRecord> records,
                          const std::map<std::string, std::string>& gold, const LabelScheme& scheme);

struct Delta {
    std::string metric;
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0; // b - a
};

/// Signed per-metric differences b - a. Throws ValidationError when the
/// reports use different schemes.
std::vector<Delta> compare(const EvaluationReport& a, const EvaluationReport& b);

/// Half-up rounding to `decimals` places, robust to binary representation
/// (72.725 rounds to 72.73).
double round_half_up(double value, int decimals = 2);

std::string to_json(const EvaluationReport& report);
/// Fixed-width table: one row per class, then top1 / macro-F1 / delegation.
std::string to_table(const EvaluationReport& report, std::string_view title = {});
std::string to_table(const std::vector<Delta>& deltas);

} // namespace argcascade::metrics
