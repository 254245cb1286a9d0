#pragma once

#include "argcascade/labels.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace argcascade {

/// One normalized argument instance, shared by all three corpora.
struct ArgumentSample {
    std::string id;
    std::string corpus;
    std::string topic;
    std::string claim_text;
    std::optional<std::string> thesis_text;
    std::string gold_label;
    SchemeId scheme = SchemeId::ArgsmeBinary;

    const LabelScheme& label_scheme() const { return LabelScheme::by_id(scheme); }

    friend bool operator==(const ArgumentSample&, const ArgumentSample&) = default;
};

/// Checks the per-sample invariants (label in scheme, non-empty claim).
void validate(const ArgumentSample& sample);

namespace corpus {

enum class ArgsmeCondition { WithConclusion, WithoutConclusion };

struct ArgsmeOptions {
    ArgsmeCondition condition = ArgsmeCondition::WithoutConclusion;
    /// Keep only records from this portal (idebate, debatepedia, debatewise,
    /// debateorg). Empty keeps everything.
    std::string portal;
};

/// Args.me v1.0-cleaned records. Accepts the published `{"arguments": [...]}`
/// document, a bare JSON array, or one argument object per line. Each record
/// is either the published shape (`premises[]` with `text`/`stance`,
/// `conclusion`, `context.sourceUrl`) or a flat one (`premise`, `stance`,
/// `conclusion`, `portal`). Every premise becomes one sample.
std::vector<ArgumentSample> parse_argsme(std::istream& in, const ArgsmeOptions& options = {});

/// Portal short name for an Args.me source URL or domain, or "" if unknown.
std::string argsme_portal(std::string_view url_or_domain);

/// The eight UKP sentential topics, canonical spelling ("death penalty").
const std::vector<std::string>& ukp_topics();
/// Canonical topic for a user-supplied name ("death_penalty" -> "death penalty").
std::string canonical_ukp_topic(std::string_view name);

/// UKP tab-separated sentence annotations for one topic.
std::vector<ArgumentSample> parse_ukp(std::istream& in, std::string_view topic);

/// US2016 interchange CSV: header `id,prop1,prop2,label`.
std::vector<ArgumentSample> parse_us2016(std::istream& in);
void write_us2016(std::ostream& out, const std::vector<ArgumentSample>& samples);

/// Interchange JSONL, one sample per line.
std::vector<ArgumentSample> read_interchange(std::istream& in);
void write_interchange(std::ostream& out, const std::vector<ArgumentSample>& samples);

struct SplitSpec {
    double train_fraction = 0.9;
    std::uint64_t seed = 42;
    bool stratified = true;
};

struct Split {
    std::vector<ArgumentSample> train;
    std::vector<ArgumentSample> test;
};

/// Deterministic partition. |train| = round(train_fraction * N); in stratified
/// mode each class lands within one sample of its proportional share.
/// Both halves keep the input order.
Split split(const std::vector<ArgumentSample>& samples, const SplitSpec& spec);

/// Count per class; every class of `scheme` is present, possibly with 0.
std::map<std::string, std::size_t> class_distribution(const std::vector<ArgumentSample>& samples,
                                                      const LabelScheme& scheme);
/// Same, using the scheme of the first sample (empty map for no samples).
std::map<std::string, std::size_t> class_distribution(const std::vector<ArgumentSample>& samples);

} // namespace corpus
} // namespace argcascade
