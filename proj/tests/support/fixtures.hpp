#pragma once

#include "argcascade/base_model.hpp"
#include "argcascade/corpus.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace testing {

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

struct Fixture {
    std::vector<argcascade::ArgumentSample> samples;
    std::vector<argcascade::PredictionRecord> records;
    std::map<std::string, std::string> gold;
};

/// Random samples with prediction records. The base model is right about
/// `skill` of the time; probability vectors are random and almost surely
/// have distinct maxima.
inline Fixture random_fixture(std::size_t n, argcascade::SchemeId scheme_id, std::uint64_t seed,
                              double skill = 0.7) {
    using namespace argcascade;
    const auto& scheme = LabelScheme::by_id(scheme_id);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> cls(0, scheme.size() - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    Fixture f;
    for (std::size_t i = 0; i < n; ++i) {
        ArgumentSample s;
        s.id = "s" + std::to_string(seed) + "-" + std::to_string(i);
        s.corpus = "fixture";
        s.topic = "topic " + std::to_string(i % 7);
        s.claim_text = "claim number " + std::to_string(i);
        if (scheme_id != SchemeId::UkpTernary) s.thesis_text = "thesis " + std::to_string(i % 7);
        const auto g = cls(rng);
        s.gold_label = scheme.classes()[g];
        s.scheme = scheme_id;

        const auto predicted = u(rng) < skill ? g : cls(rng);
        std::vector<double> w(scheme.size());
        double total = 0;
        for (auto& x : w) total += (x = u(rng) + 1e-3);
        w[predicted] += total * (0.2 + u(rng)); // make `predicted` the argmax
        total = 0;
        for (double x : w) total += x;
        for (auto& x : w) x /= total;

        f.gold[s.id] = s.gold_label;
        f.records.push_back(make_record(s.id, ProbabilityVector{scheme_id, w}));
        f.samples.push_back(std::move(s));
    }
    return f;
}

inline void write_prediction_file(std::ostream& out, const Fixture& f, argcascade::SchemeId scheme,
                                  bool with_labels = true) {
    argcascade::PredictionFile file;
    file.scheme = scheme;
    file.model = "fixture";
    file.records = f.records;
    if (with_labels) file.gold = f.gold;
    argcascade::save_predictions(out, file);
}

// Raw-format corpus writers at arbitrary class counts.

inline void write_argsme(std::ostream& out, const std::string& portal_url, std::size_t pro, std::size_t con,
                         const std::string& id_prefix) {
    out << "{\"arguments\": [\n";
    std::mt19937_64 rng(pro * 31 + con);
    std::vector<int> stances(pro, 1);
    stances.resize(pro + con, 0);
    std::shuffle(stances.begin(), stances.end(), rng);
    for (std::size_t i = 0; i < stances.size(); ++i) {
        nlohmann::json rec{{"id", id_prefix + std::to_string(i)},
                           {"conclusion", "Conclusion " + std::to_string(i / 3)},
                           {"premises", {{{"text", "Premise text " + std::to_string(i)},
                                          {"stance", stances[i] ? "PRO" : "CON"},
                                          {"annotations", nlohmann::json::array()}}}},
                           {"context", {{"sourceUrl", portal_url + "/debate/" + std::to_string(i / 3)},
                                        {"discussionTitle", "Debate " + std::to_string(i / 3)}}}};
        out << (i ? ",\n" : "") << rec.dump();
    }
    out << "\n]}\n";
}

inline void write_ukp(std::ostream& out, const std::string& topic, std::size_t non, std::size_t pro,
                      std::size_t con) {
    out << "topic\tretrievedUrl\tarchivedUrl\tsentenceHash\tsentence\tannotation\tset\n";
    std::size_t i = 0;
    auto emit = [&](std::size_t count, const char* annotation) {
        for (std::size_t k = 0; k < count; ++k, ++i) {
            out << topic << "\thttp://example.org/" << i << "\thttp://archive.org/" << i << "\th" << i
                << "\tSentence " << i << " about " << topic << ".\t" << annotation << "\t"
                << (i % 10 == 0 ? "test" : "train") << "\n";
        }
    };
    emit(non, "NoArgument");
    emit(pro, "Argument_for");
    emit(con, "Argument_against");
}

inline void write_us2016_counts(std::ostream& out, std::size_t ra, std::size_t ca, std::size_t ma, std::size_t no) {
    out << "id,prop1,prop2,label\r\n";
    std::size_t i = 0;
    auto emit = [&](std::size_t count, const char* label) {
        for (std::size_t k = 0; k < count; ++k, ++i) {
            out << "pair" << i << ",\"Proposition " << i << ", first\",\"Proposition " << i
                << " \"\"second\"\"\"," << label << "\r\n";
        }
    };
    emit(ra, "RA");
    emit(ca, "CA");
    emit(ma, "MA");
    emit(no, "NO");
}

} // namespace testing
