#include "argcascade/metrics.hpp"

#include "argcascade/error.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace argcascade::metrics {

using nlohmann::json;

const ClassScores& EvaluationReport::at(std::string_view label) const {
    for (const auto& c : per_class) {
        if (text::iequals(c.label, label)) return c;
    }
    throw ValidationError("report has no class '" + std::string(label) + "'");
}

namespace {

struct Row {
    const std::string* id;
    std::size_t predicted;
    cascade::Source source;
};

double pct(std::size_t num, std::size_t den) { return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0; }

EvaluationReport score(const std::vector<Row>& rows, const std::map<std::string, std::string>& gold,
                       const LabelScheme& scheme) {
    const std::size_t k = scheme.size();
    EvaluationReport rep;
    rep.scheme = scheme.id();
    rep.n = rows.size();
    rep.confusion.assign(k, std::vector<std::size_t>(k, 0));

    std::size_t correct = 0, routed = 0, routed_correct = 0, kept_correct = 0;
    for (const auto& row : rows) {
        auto g = gold.find(*row.id);
        if (g == gold.end()) throw ValidationError("no gold label for '" + *row.id + "'");
        auto gi = scheme.index_of(g->second);
        if (!gi) throw ValidationError("gold label '" + g->second + "' not in " + scheme.name());
        ++rep.confusion[*gi][row.predicted];
        const bool ok = *gi == row.predicted;
        correct += ok;
        if (row.source != cascade::Source::Base) {
            ++routed;
            routed_correct += ok;
            if (row.source == cascade::Source::LlmFallbackBase) ++rep.delegation.fallback_count;
        } else {
            kept_correct += ok;
        }
    }

    rep.top1 = pct(correct, rep.n);
    double f1_sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        ClassScores cs;
        cs.label = scheme.classes()[c];
        const std::size_t tp = rep.confusion[c][c];
        for (std::size_t o = 0; o < k; ++o) {
            cs.support += rep.confusion[c][o];
            cs.predicted += rep.confusion[o][c];
        }
        cs.zero_support = cs.support == 0;
        cs.precision = pct(tp, cs.predicted);
        cs.recall = pct(tp, cs.support);
        cs.f1 = cs.precision + cs.recall > 0.0 ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall) : 0.0;
        f1_sum += cs.f1;
        rep.per_class.push_back(std::move(cs));
    }
    rep.macro_f1 = k ? f1_sum / static_cast<double>(k) : 0.0;

    // Micro-averaged F1 from pooled counts; for single-label data pooled
    // FP and FN both equal the error count.
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t c = 0; c < k; ++c) {
        tp += rep.confusion[c][c];
        fp += rep.per_class[c].predicted - rep.confusion[c][c];
        fn += rep.per_class[c].support - rep.confusion[c][c];
    }
    rep.micro_f1 = tp ? 100.0 * 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn) : 0.0;

    rep.delegation.routed = routed;
    rep.delegation.fraction_routed = rep.n ? static_cast<double>(routed) / static_cast<double>(rep.n) : 0.0;
    if (routed) rep.delegation.accuracy_routed = pct(routed_correct, routed);
    if (rep.n > routed) rep.delegation.accuracy_kept = pct(kept_correct, rep.n - routed);
    return rep;
}

std::size_t label_index(const LabelScheme& scheme, const std::string& label, const std::string& id) {
    auto i = scheme.index_of(label);
    if (!i) throw ValidationError("prediction '" + label + "' for '" + id + "' not in " + scheme.name());
    return *i;
}

} // namespace

EvaluationReport evaluate(std::span<const cascade::CascadeResult> results,
                          const std::map<std::string, std::string>& gold, const LabelScheme& scheme) {
    std::vector<Row> rows;
    rows.reserve(results.size());
    CostTally cost;
    for (const auto& r : results) {
        rows.push_back({&r.sample_id, label_index(scheme, r.final_label, r.sample_id), r.source});
        if (r.source != cascade::Source::Base) ++cost.llm_calls;
        cost.prompt_tokens += r.prompt_tokens;
        cost.completion_tokens += r.completion_tokens;
    }
    auto rep = score(rows, gold, scheme);
    rep.cost = cost;
    return rep;
}

EvaluationReport evaluate(std::span<const PredictionRecord> records,
                          const std::map<std::string, std::string>& gold, const LabelScheme& scheme) {
    std::vector<Row> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        rows.push_back({&r.sample_id, label_index(scheme, r.predicted_label, r.sample_id), cascade::Source::Base});
    }
    return score(rows, gold, scheme);
}

std::vector<Delta> compare(const EvaluationReport& a, const EvaluationReport& b) {
    if (a.scheme != b.scheme) throw ValidationError("cannot compare reports over different label schemes");
    std::vector<Delta> out;
    auto add = [&](std::string name, double x, double y) { out.push_back({std::move(name), x, y, y - x}); };
    add("top1", a.top1, b.top1);
    add("macro_f1", a.macro_f1, b.macro_f1);
    for (std::size_t c = 0; c < a.per_class.size(); ++c) {
        const auto& l = a.per_class[c].label;
        add("precision[" + l + "]", a.per_class[c].precision, b.per_class[c].precision);
        add("recall[" + l + "]", a.per_class[c].recall, b.per_class[c].recall);
        add("f1[" + l + "]", a.per_class[c].f1, b.per_class[c].f1);
    }
    add("fraction_routed", a.delegation.fraction_routed, b.delegation.fraction_routed);
    return out;
}

double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double scaled = value * scale;
    // Snap values within a few ulps of a .5 boundary onto it before flooring.
    const double nudge = 1e-9 * std::max(1.0, std::abs(scaled));
    return std::floor(scaled + 0.5 + nudge) / scale;
}

std::string to_json(const EvaluationReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? json(round_half_up(*v)) : json(nullptr); };
    json classes = json::object();
    for (const auto& c : r.per_class) {
        classes[c.label] = {{"precision", round_half_up(c.precision)},
                            {"recall", round_half_up(c.recall)},
                            {"f1", round_half_up(c.f1)},
                            {"support", c.support},
                            {"zero_support", c.zero_support}};
    }
    json j{{"scheme", LabelScheme::by_id(r.scheme).name()},
           {"n", r.n},
           {"top1", round_half_up(r.top1)},
           {"macro_f1", round_half_up(r.macro_f1)},
           {"micro_f1", round_half_up(r.micro_f1)},
           {"per_class", classes},
           {"confusion", r.confusion},
           {"delegation",
            {{"routed", r.delegation.routed},
             {"fraction_routed", r.delegation.fraction_routed},
             {"accuracy_routed", opt(r.delegation.accuracy_routed)},
             {"accuracy_kept", opt(r.delegation.accuracy_kept)},
             {"fallback_count", r.delegation.fallback_count}}},
           {"cost",
            {{"llm_calls", r.cost.llm_calls},
             {"prompt_tokens", r.cost.prompt_tokens},
             {"completion_tokens", r.cost.completion_tokens}}}};
    return j.dump(2);
}

namespace {

std::string fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << round_half_up(v);
    return os.str();
}

} // namespace

std::string to_table(const EvaluationReport& r, std::string_view title) {
    std::ostringstream os;
    if (!title.empty()) os << title << '\n';
    os << std::left << std::setw(10) << "class" << std::right << std::setw(11) << "precision" << std::setw(9)
       << "recall" << std::setw(9) << "F1" << std::setw(9) << "support" << '\n';
    for (const auto& c : r.per_class) {
        os << std::left << std::setw(10) << c.label << std::right << std::setw(11) << fixed2(c.precision)
           << std::setw(9) << fixed2(c.recall) << std::setw(9) << fixed2(c.f1) << std::setw(9) << c.support
           << (c.zero_support ? "  (no support)" : "") << '\n';
    }
    os << std::left << std::setw(10) << "top1" << std::right << std::setw(11) << fixed2(r.top1) << '\n';
    os << std::left << std::setw(10) << "macro F1" << std::right << std::setw(11) << fixed2(r.macro_f1) << '\n';
    os << std::left << std::setw(10) << "n" << std::right << std::setw(11) << r.n << '\n';
    if (r.delegation.routed) {
        os << "delegated " << r.delegation.routed << " (" << fixed2(100.0 * r.delegation.fraction_routed)
           << "%), accuracy routed " << fixed2(r.delegation.accuracy_routed.value_or(0.0)) << ", kept "
           << (r.delegation.accuracy_kept ? fixed2(*r.delegation.accuracy_kept) : std::string("-"))
           << ", fallbacks " << r.delegation.fallback_count << '\n';
        os << "llm calls " << r.cost.llm_calls << ", prompt tokens " << r.cost.prompt_tokens
           << ", completion tokens " << r.cost.completion_tokens << '\n';
    }
    return os.str();
}

std::string to_table(const std::vector<Delta>& deltas) {
    std::ostringstream os;
    os << std::left << std::setw(18) << "metric" << std::right << std::setw(10) << "a" << std::setw(10) << "b"
       << std::setw(10) << "delta" << '\n';
    for (const auto& d : deltas) {
        std::string sign = d.delta > 0 && round_half_up(d.delta) != 0.0 ? "+" : "";
        os << std::left << std::setw(18) << d.metric << std::right << std::setw(10) << fixed2(d.a) << std::setw(10)
           << fixed2(d.b) << std::setw(10) << sign + fixed2(d.delta) << '\n';
    }
    return os.str();
}

} // namespace argcascade::metrics
