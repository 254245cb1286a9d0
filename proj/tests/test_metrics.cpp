#include "argcascade/error.hpp"
#include "argcascade/metrics.hpp"
#include "support/oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <random>

using namespace argcascade;
using namespace argcascade::metrics;
using cascade::CascadeResult;
using cascade::Source;

namespace {

struct Instance {
    std::vector<CascadeResult> results;
    std::map<std::string, std::string> gold;
};

Instance from_labels(const LabelScheme& scheme, const std::vector<int>& gold, const std::vector<int>& pred) {
    Instance x;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        CascadeResult r;
        r.sample_id = "i" + std::to_string(i);
        r.final_label = scheme.classes()[static_cast<std::size_t>(pred[i])];
        r.base_prediction = r.final_label;
        x.gold[r.sample_id] = scheme.classes()[static_cast<std::size_t>(gold[i])];
        x.results.push_back(r);
    }
    return x;
}

// Expands a binary confusion matrix into label lists (PRO = 0 positive).
Instance binary_confusion(int tp, int fn, int fp, int tn) {
    std::vector<int> g, p;
    auto add = [&](int n, int gi, int pi) {
        for (int i = 0; i < n; ++i) {
            g.push_back(gi);
            p.push_back(pi);
        }
    };
    add(tp, 0, 0);
    add(fn, 0, 1);
    add(fp, 1, 0);
    add(tn, 1, 1);
    return from_labels(LabelScheme::argsme_binary(), g, p);
}

} // namespace

TEST_CASE("all correct scores 100") {
    auto x = binary_confusion(30, 0, 0, 20);
    auto r = evaluate(x.results, x.gold, LabelScheme::argsme_binary());
    CHECK(r.top1 == 100.0);
    CHECK(r.macro_f1 == 100.0);
    CHECK(r.n == 50);
}

TEST_CASE("hand-derived binary confusion TP=40 FN=10 FP=20 TN=30") {
    auto x = binary_confusion(40, 10, 20, 30);
    auto r = evaluate(x.results, x.gold, LabelScheme::argsme_binary());
    CHECK(round_half_up(r.at("PRO").f1) == 72.73);
    CHECK(round_half_up(r.at("CON").f1) == 66.67);
    CHECK(round_half_up(r.macro_f1) == 69.70);
    CHECK(round_half_up(r.top1) == 70.0);
    CHECK(round_half_up(r.at("PRO").precision) == 66.67);
    CHECK(r.at("PRO").recall == doctest::Approx(80.0));
    CHECK(r.at("PRO").support == 50);
    CHECK(r.confusion == std::vector<std::vector<std::size_t>>{{40, 10}, {20, 30}});
}

TEST_CASE("all-PRO predictor on a balanced set") {
    auto x = binary_confusion(50, 0, 50, 0);
    auto r = evaluate(x.results, x.gold, LabelScheme::argsme_binary());
    CHECK(r.top1 == 50.0);
    CHECK(round_half_up(r.macro_f1) == 33.33);
    CHECK(r.at("CON").f1 == 0.0);
}

TEST_CASE("zero-support classes count as 0 in the macro mean and are flagged") {
    const auto& s = LabelScheme::ukp_ternary();
    auto x = from_labels(s, {1, 1, 2, 2}, {1, 1, 2, 2});
    auto r = evaluate(x.results, x.gold, s);
    CHECK(r.at("NON").zero_support);
    CHECK_FALSE(r.at("PRO").zero_support);
    CHECK(r.macro_f1 == doctest::Approx(200.0 / 3.0));
    CHECK(r.top1 == 100.0);
}

TEST_CASE("metrics match the from-definition oracle on random instances") {
    std::mt19937_64 rng(77);
    const LabelScheme* schemes[] = {&LabelScheme::argsme_binary(), &LabelScheme::ukp_ternary(),
                                    &LabelScheme::us2016_quaternary()};
    for (int trial = 0; trial < 300; ++trial) {
        const auto& s = *schemes[rng() % 3];
        const int k = static_cast<int>(s.size());
        const std::size_t n = 1 + rng() % 200;
        std::vector<int> g(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = static_cast<int>(rng() % k);
            p[i] = rng() % 3 ? g[i] : static_cast<int>(rng() % k);
        }
        auto x = from_labels(s, g, p);
        auto r = evaluate(x.results, x.gold, s);
        auto pc = oracle::per_class(g, p, k);
        CHECK(r.top1 == doctest::Approx(100.0 * oracle::accuracy(g, p)).epsilon(1e-9));
        CHECK(r.macro_f1 == doctest::Approx(100.0 * oracle::macro_f1(g, p, k)).epsilon(1e-9));
        CHECK(r.micro_f1 == doctest::Approx(r.top1).epsilon(1e-9));
        std::size_t support = 0;
        for (int c = 0; c < k; ++c) {
            CHECK(r.per_class[c].f1 == doctest::Approx(100.0 * pc[c].f1).epsilon(1e-9));
            CHECK(r.per_class[c].precision == doctest::Approx(100.0 * pc[c].precision).epsilon(1e-9));
            CHECK(r.per_class[c].recall == doctest::Approx(100.0 * pc[c].recall).epsilon(1e-9));
            support += r.per_class[c].support;
        }
        CHECK(support == n);

        // Shuffling the result order changes nothing.
        std::shuffle(x.results.begin(), x.results.end(), rng);
        auto r2 = evaluate(x.results, x.gold, s);
        CHECK(r2.top1 == r.top1);
        CHECK(r2.macro_f1 == r.macro_f1);
    }
}

TEST_CASE("delegation accounting") {
    auto x = binary_confusion(5, 0, 0, 5);
    x.results[0].source = Source::Llm;
    x.results[1].source = Source::LlmFallbackBase;
    x.results[2].source = Source::Llm;
    x.results[2].final_label = "CON"; // now wrong
    x.results[0].prompt_tokens = 10;
    x.results[0].completion_tokens = 3;
    auto r = evaluate(x.results, x.gold, LabelScheme::argsme_binary());
    CHECK(r.delegation.routed == 3);
    CHECK(r.delegation.fraction_routed == 0.3);
    CHECK(r.delegation.fallback_count == 1);
    CHECK(*r.delegation.accuracy_routed == doctest::Approx(200.0 / 3.0));
    CHECK(*r.delegation.accuracy_kept == 100.0);
    CHECK(r.cost.llm_calls == 3);
    CHECK(r.cost.prompt_tokens == 10);
    CHECK(r.cost.completion_tokens == 3);
}

TEST_CASE("evaluate errors") {
    auto x = binary_confusion(1, 0, 0, 1);
    x.gold.erase("i0");
    CHECK_THROWS_AS(evaluate(x.results, x.gold, LabelScheme::argsme_binary()), ValidationError);
    auto y = binary_confusion(1, 0, 0, 1);
    y.results[0].final_label = "RA";
    CHECK_THROWS_AS(evaluate(y.results, y.gold, LabelScheme::argsme_binary()), ValidationError);
}

TEST_CASE("compare reports") {
    auto x = binary_confusion(40, 10, 20, 30);
    auto a = evaluate(x.results, x.gold, LabelScheme::argsme_binary());
    for (const auto& d : compare(a, a)) CHECK(d.delta == 0.0);

    EvaluationReport bert = a, hybrid = a;
    bert.top1 = 76.22;
    hybrid.top1 = 85.87;
    bert.macro_f1 = 62.0;
    hybrid.macro_f1 = 72.5;
    auto deltas = compare(bert, hybrid);
    CHECK(deltas[0].metric == "top1");
    CHECK(round_half_up(deltas[0].delta) == 9.65);
    CHECK(deltas[1].metric == "macro_f1");
    CHECK(round_half_up(deltas[1].delta) == 10.5);
    CHECK(to_table(deltas).find("+9.65") != std::string::npos);

    EvaluationReport other = a;
    other.scheme = SchemeId::UkpTernary;
    CHECK_THROWS_AS(compare(a, other), ValidationError);
}

TEST_CASE("half-up rounding to two decimals") {
    CHECK(round_half_up(72.725) == 72.73);
    CHECK(round_half_up(69.69696) == 69.70);
    CHECK(round_half_up(0.005) == 0.01);
    CHECK(round_half_up(1.004999) == 1.0);
    CHECK(round_half_up(85.87 - 76.22) == 9.65);
}

TEST_CASE("report serializations") {
    auto x = binary_confusion(40, 10, 20, 30);
    auto r = evaluate(x.results, x.gold, LabelScheme::argsme_binary());
    auto j = nlohmann::json::parse(to_json(r));
    CHECK(j["macro_f1"] == 69.7);
    CHECK(j["per_class"]["PRO"]["f1"] == 72.73);
    CHECK(j["per_class"]["CON"]["support"] == 50);
    CHECK(j["delegation"]["accuracy_routed"].is_null());
    auto table = to_table(r, "base");
    CHECK(table.find("72.73") != std::string::npos);
    CHECK(table.find("69.70") != std::string::npos);
}
