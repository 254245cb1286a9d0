#include "argcascade/corpus.hpp"

#include "argcascade/csv.hpp"
#include "argcascade/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace argcascade {

using nlohmann::json;

void validate(const ArgumentSample& sample) {
    const auto& scheme = sample.label_scheme();
    if (!scheme.contains(sample.gold_label)) {
        throw ValidationError("sample " + sample.id + ": label '" + sample.gold_label + "' not in " +
                              scheme.name());
    }
    if (text::trim(sample.claim_text).empty()) {
        throw ValidationError("sample " + sample.id + ": empty claim text");
    }
}

namespace corpus {
namespace {

std::string slurp(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find('\t', start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

const std::string* string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return nullptr;
    return it->get_ptr<const std::string*>();
}

// Args.me

void argsme_record(const json& rec, std::size_t ordinal, const ArgsmeOptions& options,
                   std::vector<ArgumentSample>& out) {
    const auto malformed = [ordinal](const std::string& why) {
        return ParseError("malformed Args.me record: " + why, ordinal);
    };
    if (!rec.is_object()) throw malformed("not an object");

    std::string portal;
    if (const auto* p = string_field(rec, "portal")) portal = argsme_portal(*p);
    if (auto ctx = rec.find("context"); portal.empty() && ctx != rec.end() && ctx->is_object()) {
        if (const auto* d = string_field(*ctx, "sourceDomain")) portal = argsme_portal(*d);
        if (const auto* u = string_field(*ctx, "sourceUrl"); portal.empty() && u) portal = argsme_portal(*u);
    }
    if (!options.portal.empty() && portal != argsme_portal(options.portal)) return;

    std::string id = "argsme-" + std::to_string(ordinal);
    if (auto it = rec.find("id"); it != rec.end()) {
        if (!it->is_string()) throw malformed("id is not a string");
        id = it->get<std::string>();
    }

    std::string conclusion;
    if (auto it = rec.find("conclusion"); it != rec.end() && !it->is_null()) {
        if (!it->is_string()) throw malformed("conclusion is not a string");
        conclusion = text::normalize(it->get_ref<const std::string&>());
    }
    if (options.condition == ArgsmeCondition::WithConclusion && conclusion.empty()) {
        throw malformed("missing conclusion");
    }

    std::vector<std::pair<std::string, std::string>> premises; // text, stance
    if (auto it = rec.find("premises"); it != rec.end()) {
        if (!it->is_array() || it->empty()) throw malformed("premises is not a non-empty array");
        for (const auto& p : *it) {
            const auto* t = p.is_object() ? string_field(p, "text") : nullptr;
            const auto* s = p.is_object() ? string_field(p, "stance") : nullptr;
            if (!t || !s) throw malformed("premise without text/stance");
            premises.emplace_back(*t, *s);
        }
    } else {
        const auto* t = string_field(rec, "premise");
        if (!t) t = string_field(rec, "text");
        const auto* s = string_field(rec, "stance");
        if (!t || !s) throw malformed("no premise text/stance");
        premises.emplace_back(*t, *s);
    }

    const auto& scheme = LabelScheme::argsme_binary();
    for (std::size_t j = 0; j < premises.size(); ++j) {
        auto label = scheme.index_of(text::trim(premises[j].second));
        if (!label) throw ParseError("unknown Args.me stance '" + premises[j].second + "'", ordinal);
        ArgumentSample s;
        s.id = premises.size() == 1 ? id : id + "#" + std::to_string(j);
        s.corpus = portal.empty() ? "argsme" : "argsme/" + portal;
        s.topic = conclusion;
        s.claim_text = text::normalize(premises[j].first);
        if (s.claim_text.empty()) throw malformed("empty premise text");
        if (options.condition == ArgsmeCondition::WithConclusion) s.thesis_text = conclusion;
        s.gold_label = scheme.classes()[*label];
        s.scheme = SchemeId::ArgsmeBinary;
        out.push_back(std::move(s));
    }
}

std::string slug(std::string_view topic) {
    std::string s(topic);
    std::replace(s.begin(), s.end(), ' ', '_');
    return s;
}

} // namespace

std::string argsme_portal(std::string_view url_or_domain) {
    const auto s = text::to_lower(text::trim(url_or_domain));
    // debate.org must be checked after the longer names that contain it.
    for (const char* name : {"idebate", "debatepedia", "debatewise"}) {
        if (s.find(name) != std::string::npos) return name;
    }
    if (s.find("debate.org") != std::string::npos || s == "debateorg") return "debateorg";
    return {};
}

std::vector<ArgumentSample> parse_argsme(std::istream& in, const ArgsmeOptions& options) {
    const std::string data = slurp(in);
    std::vector<ArgumentSample> out;
    const auto body = text::trim(data);
    if (body.empty()) return out;

    if (body.front() == '{' || body.front() == '[') {
        // Records are converted as the parser finishes them and then dropped
        // from the tree, so a multi-gigabyte dump never sits in memory as JSON.
        const bool top_array = body.front() == '[';
        std::string top_key;
        std::size_t ordinal = 0;
        auto on_event = [&](int depth, json::parse_event_t event, json& parsed) {
            if (event == json::parse_event_t::key && depth == 1) top_key = parsed.get<std::string>();
            if (event != json::parse_event_t::object_end) return true;
            const bool record = top_array ? depth == 1 : depth == 2 && top_key == "arguments";
            if (!record) return true;
            argsme_record(parsed, ++ordinal, options, out);
            return false;
        };
        auto doc = json::parse(body, on_event, /*allow_exceptions=*/false);
        if (!doc.is_discarded()) {
            if (doc.is_object() && !doc.contains("arguments")) {
                argsme_record(doc, 1, options, out);
            } else if (doc.is_object() && !doc["arguments"].is_array()) {
                throw ParseError("Args.me 'arguments' is not an array", 1);
            } else if (!(top_array ? doc : doc["arguments"]).empty()) {
                // Objects were consumed above; anything left is not a record.
                throw ParseError("Args.me record is not an object", ordinal + 1);
            }
            return out;
        }
        if (top_array) throw ParseError("malformed Args.me document", 1);
        out.clear(); // probably one object per line
    }

    std::istringstream lines{std::string(body)};
    std::string line;
    std::size_t ordinal = 0;
    while (std::getline(lines, line)) {
        if (text::trim(line).empty()) continue;
        ++ordinal;
        auto rec = json::parse(line, nullptr, false);
        if (rec.is_discarded()) throw ParseError("malformed Args.me record: invalid JSON", ordinal);
        argsme_record(rec, ordinal, options, out);
    }
    return out;
}

// UKP

const std::vector<std::string>& ukp_topics() {
    static const std::vector<std::string> topics{
        "abortion",     "cloning",        "death penalty",  "gun control",
        "marijuana legalization", "minimum wage", "nuclear energy", "school uniforms"};
    return topics;
}

std::string canonical_ukp_topic(std::string_view name) {
    std::string s = text::to_lower(text::trim(name));
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '_' || c == '-'; }, ' ');
    for (const auto& t : ukp_topics()) {
        if (t == s) return t;
    }
    throw ValidationError("unknown UKP topic '" + std::string(name) + "'");
}

std::vector<ArgumentSample> parse_ukp(std::istream& in, std::string_view topic_name) {
    const std::string topic = canonical_ukp_topic(topic_name);
    const auto& scheme = LabelScheme::ukp_ternary();

    std::vector<ArgumentSample> out;
    std::string line;
    std::size_t lineno = 0;
    std::size_t columns = 0;
    std::size_t sentence_col = 4, annotation_col = 5; // published layout

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (text::trim(line).empty()) continue;
        auto fields = split_tabs(line);

        if (columns == 0) {
            columns = fields.size();
            auto find = [&](std::string_view name) -> std::optional<std::size_t> {
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (text::iequals(text::trim(fields[i]), name)) return i;
                }
                return std::nullopt;
            };
            auto s = find("sentence");
            auto a = find("annotation");
            if (s && a) {
                sentence_col = *s;
                annotation_col = *a;
                continue;
            }
            if (columns == 2) {
                sentence_col = 0;
                annotation_col = 1;
            } else if (columns != 7) {
                throw ParseError("UKP file has " + std::to_string(columns) +
                                     " columns and no header naming 'sentence' and 'annotation'",
                                 lineno);
            }
        }
        if (fields.size() != columns) {
            throw ParseError("UKP column count " + std::to_string(fields.size()) + ", expected " +
                                 std::to_string(columns),
                             lineno);
        }

        const auto annotation = text::trim(fields[annotation_col]);
        std::string label;
        if (text::iequals(annotation, "NoArgument")) label = "NON";
        else if (text::iequals(annotation, "Argument_for")) label = "PRO";
        else if (text::iequals(annotation, "Argument_against")) label = "CON";
        else throw ParseError("unknown UKP annotation '" + std::string(annotation) + "'", lineno);

        ArgumentSample s;
        s.id = "ukp-" + slug(topic) + "-" + std::to_string(lineno);
        s.corpus = "ukp";
        s.topic = topic;
        s.claim_text = text::normalize(fields[sentence_col]);
        if (s.claim_text.empty()) throw ParseError("empty UKP sentence", lineno);
        s.gold_label = scheme.canonical(label);
        s.scheme = SchemeId::UkpTernary;
        out.push_back(std::move(s));
    }
    return out;
}

// US2016

std::vector<ArgumentSample> parse_us2016(std::istream& in) {
    const auto& scheme = LabelScheme::us2016_quaternary();
    csv::Reader reader(in);
    std::vector<ArgumentSample> out;

    auto header = reader.next();
    while (header && header->size() == 1 && text::trim((*header)[0]).empty()) header = reader.next();
    if (!header) return out;
    if (auto& first = (*header)[0]; first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
    const std::vector<std::string> expected{"id", "prop1", "prop2", "label"};
    if (header->size() != expected.size() ||
        !std::equal(expected.begin(), expected.end(), header->begin(),
                    [](const std::string& a, const std::string& b) { return text::iequals(a, text::trim(b)); })) {
        throw ParseError("US2016 header must be id,prop1,prop2,label", reader.line());
    }

    while (auto row = reader.next()) {
        if (row->size() == 1 && text::trim((*row)[0]).empty()) continue;
        if (row->size() != 4) {
            throw ParseError("US2016 row has " + std::to_string(row->size()) + " fields, expected 4",
                             reader.line());
        }
        auto idx = scheme.index_of(text::trim((*row)[3]));
        if (!idx) throw ParseError("US2016 label '" + (*row)[3] + "' is not one of RA, CA, MA, NO", reader.line());

        ArgumentSample s;
        s.id = std::string(text::trim((*row)[0]));
        if (s.id.empty()) s.id = "us2016-" + std::to_string(reader.line());
        s.corpus = "us2016";
        s.claim_text = text::normalize((*row)[1]);
        s.thesis_text = text::normalize((*row)[2]);
        if (s.claim_text.empty() || s.thesis_text->empty()) {
            throw ParseError("US2016 pair with missing proposition text", reader.line());
        }
        s.gold_label = scheme.classes()[*idx];
        s.scheme = SchemeId::Us2016Quaternary;
        out.push_back(std::move(s));
    }
    return out;
}

void write_us2016(std::ostream& out, const std::vector<ArgumentSample>& samples) {
    csv::write_row(out, {"id", "prop1", "prop2", "label"});
    for (const auto& s : samples) {
        csv::write_row(out, {s.id, s.claim_text, s.thesis_text.value_or(""), s.gold_label});
    }
}

// Interchange

std::vector<ArgumentSample> read_interchange(std::istream& in) {
    std::vector<ArgumentSample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ParseError("invalid interchange JSON", lineno);
        try {
            ArgumentSample s;
            s.id = j.at("id").get<std::string>();
            s.corpus = j.at("corpus").get<std::string>();
            s.topic = j.value("topic", std::string{});
            s.claim_text = j.at("claim").get<std::string>();
            if (auto t = j.find("thesis"); t != j.end() && !t->is_null()) s.thesis_text = t->get<std::string>();
            const auto& scheme = LabelScheme::by_name(j.at("scheme").get<std::string>());
            s.scheme = scheme.id();
            s.gold_label = scheme.canonical(j.at("label").get<std::string>());
            validate(s);
            out.push_back(std::move(s));
        } catch (const json::exception& e) {
            throw ParseError(std::string("interchange record: ") + e.what(), lineno);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return out;
}

void write_interchange(std::ostream& out, const std::vector<ArgumentSample>& samples) {
    for (const auto& s : samples) {
        json j{{"id", s.id},
               {"corpus", s.corpus},
               {"topic", s.topic},
               {"claim", s.claim_text},
               {"thesis", s.thesis_text ? json(*s.thesis_text) : json(nullptr)},
               {"label", s.gold_label},
               {"scheme", s.label_scheme().name()}};
        out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
}

// Split

namespace {

// Fisher-Yates over a raw mt19937_64 stream; std::shuffle and the standard
// distributions are implementation-defined, which would break cross-platform
// reproducibility of a seeded split.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do r = rng(); while (r >= limit);
        std::swap(v[i - 1], v[r % bound]);
    }
}

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

} // namespace

Split split(const std::vector<ArgumentSample>& samples, const SplitSpec& spec) {
    if (samples.empty()) throw ValidationError("split: no samples");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw ValidationError("split: train_fraction must lie in (0, 1)");
    }
    const std::size_t n = samples.size();
    const std::size_t n_train = round_half_up(spec.train_fraction * static_cast<double>(n));
    std::mt19937_64 rng(spec.seed);
    std::vector<char> in_train(n, 0);

    if (!spec.stratified) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng);
        for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = 1;
    } else {
        // Group by label in first-seen order, then apportion n_train across
        // groups by largest remainder so every group is within one sample
        // of its exact share.
        std::vector<std::string> labels;
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < n; ++i) {
            auto it = std::find(labels.begin(), labels.end(), samples[i].gold_label);
            if (it == labels.end()) {
                labels.push_back(samples[i].gold_label);
                groups.emplace_back();
                it = labels.end() - 1;
            }
            groups[static_cast<std::size_t>(it - labels.begin())].push_back(i);
        }
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].size() < 2) {
                throw ValidationError("split: stratified split needs >= 2 samples of class '" + labels[g] + "'");
            }
        }

        std::vector<std::size_t> quota(groups.size());
        std::vector<double> remainder(groups.size());
        std::size_t assigned = 0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const double exact = static_cast<double>(n_train) * static_cast<double>(groups[g].size()) /
                                 static_cast<double>(n);
            quota[g] = static_cast<std::size_t>(std::floor(exact));
            remainder[g] = exact - static_cast<double>(quota[g]);
            assigned += quota[g];
        }
        std::vector<std::size_t> by_remainder(groups.size());
        std::iota(by_remainder.begin(), by_remainder.end(), 0);
        std::stable_sort(by_remainder.begin(), by_remainder.end(),
                         [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
        for (std::size_t i = 0; assigned < n_train; i = (i + 1) % groups.size()) {
            auto g = by_remainder[i];
            if (quota[g] < groups[g].size()) {
                ++quota[g];
                ++assigned;
            }
        }

        for (std::size_t g = 0; g < groups.size(); ++g) {
            shuffle(groups[g], rng);
            for (std::size_t i = 0; i < quota[g]; ++i) in_train[groups[g][i]] = 1;
        }
    }

    Split out;
    out.train.reserve(n_train);
    out.test.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) (in_train[i] ? out.train : out.test).push_back(samples[i]);
    return out;
}

std::map<std::string, std::size_t> class_distribution(const std::vector<ArgumentSample>& samples,
                                                      const LabelScheme& scheme) {
    std::map<std::string, std::size_t> counts;
    for (const auto& c : scheme.classes()) counts[c] = 0;
    for (const auto& s : samples) ++counts[scheme.canonical(s.gold_label)];
    return counts;
}

std::map<std::string, std::size_t> class_distribution(const std::vector<ArgumentSample>& samples) {
    if (samples.empty()) return {};
    return class_distribution(samples, samples.front().label_scheme());
}

} // namespace corpus
} // namespace argcascade
