#include "argcascade/corpus.hpp"
#include "argcascade/error.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace argcascade;
using namespace argcascade::corpus;

namespace {

std::vector<ArgumentSample> argsme_file(const std::string& name, ArgsmeCondition cond) {
    std::ifstream in(testing::fixture_path(name));
    REQUIRE(in);
    return parse_argsme(in, {cond, ""});
}

std::vector<ArgumentSample> labelled(std::initializer_list<std::pair<const char*, std::size_t>> counts) {
    std::vector<ArgumentSample> out;
    for (const auto& [label, n] : counts) {
        for (std::size_t i = 0; i < n; ++i) {
            ArgumentSample s;
            s.id = std::string(label) + std::to_string(i);
            s.corpus = "test";
            s.claim_text = "claim " + s.id;
            s.gold_label = label;
            s.scheme = LabelScheme::us2016_quaternary().contains(label) ? SchemeId::Us2016Quaternary
                                                                         : SchemeId::ArgsmeBinary;
            out.push_back(s);
        }
    }
    return out;
}

} // namespace

TEST_CASE("label schemes keep their published class order") {
    CHECK(LabelScheme::argsme_binary().classes() == std::vector<std::string>{"PRO", "CON"});
    CHECK(LabelScheme::ukp_ternary().classes() == std::vector<std::string>{"NON", "PRO", "CON"});
    CHECK(LabelScheme::us2016_quaternary().classes() == std::vector<std::string>{"RA", "CA", "MA", "NO"});
    CHECK(LabelScheme::argsme_binary().canonical(" pro ") == "PRO");
    CHECK(&LabelScheme::by_name("ukp_ternary") == &LabelScheme::ukp_ternary());
    CHECK_THROWS_AS(LabelScheme::argsme_binary().canonical("NEUTRAL"), ValidationError);
}

TEST_CASE("text normalization trims and unifies newlines only") {
    CHECK(text::normalize("  A\r\nB\rC \n") == "A\nB\nC");
    CHECK(text::normalize("Keep CASE") == "Keep CASE");
}

TEST_CASE("parse_argsme: three-record fixture") {
    auto without = argsme_file("argsme_3.json", ArgsmeCondition::WithoutConclusion);
    REQUIRE(without.size() == 3);
    CHECK(without[0].gold_label == "PRO");
    CHECK(without[1].gold_label == "PRO"); // lower-case stance canonicalized
    CHECK(without[2].gold_label == "CON");
    CHECK(without[2].claim_text == "Tourism is the largest employer\nin the region.");
    for (const auto& s : without) {
        CHECK_FALSE(s.thesis_text.has_value());
        CHECK(s.corpus == "argsme/idebate");
        CHECK(s.topic == "This house would ban tourism to Tunisia");
        CHECK(s.scheme == SchemeId::ArgsmeBinary);
    }
    auto dist = class_distribution(without);
    CHECK(dist.at("PRO") == 2);
    CHECK(dist.at("CON") == 1);

    auto with = argsme_file("argsme_3.json", ArgsmeCondition::WithConclusion);
    REQUIRE(with.size() == 3);
    for (const auto& s : with) CHECK(s.thesis_text == std::optional<std::string>("This house would ban tourism to Tunisia"));
}

TEST_CASE("parse_argsme: empty stream yields no samples") {
    std::istringstream in("");
    CHECK(parse_argsme(in).empty());
    std::istringstream ws("  \n\n");
    CHECK(parse_argsme(ws).empty());
}

TEST_CASE("parse_argsme: flat JSONL records and multi-premise records") {
    std::istringstream in(
        R"({"id":"a1","premise":"P one","stance":"CON","conclusion":"C","portal":"debatewise.org"})" "\n"
        R"({"id":"a2","premises":[{"text":"x","stance":"PRO"},{"text":"y","stance":"CON"}],"conclusion":"C"})" "\n");
    auto s = parse_argsme(in);
    REQUIRE(s.size() == 3);
    CHECK(s[0].id == "a1");
    CHECK(s[0].corpus == "argsme/debatewise");
    CHECK(s[1].id == "a2#0");
    CHECK(s[2].id == "a2#1");
    CHECK(s[2].gold_label == "CON");
}

TEST_CASE("parse_argsme: portal filter") {
    std::ostringstream doc;
    testing::write_argsme(doc, "https://www.debatewise.org", 3, 2, "w");
    std::istringstream in(doc.str());
    CHECK(parse_argsme(in, {ArgsmeCondition::WithoutConclusion, "debatewise"}).size() == 5);
    std::istringstream in2(doc.str());
    CHECK(parse_argsme(in2, {ArgsmeCondition::WithoutConclusion, "idebate"}).empty());
    CHECK(argsme_portal("http://www.debate.org/opinions/x") == "debateorg");
    CHECK(argsme_portal("debatepedia.org") == "debatepedia");
}

TEST_CASE("parse_argsme: errors") {
    SUBCASE("unknown stance names the value and the record") {
        std::istringstream in(R"({"arguments":[{"id":"a","premises":[{"text":"t","stance":"PRO"}]},)"
                              R"({"id":"b","premises":[{"text":"t","stance":"NEUTRAL"}]}]})");
        try {
            parse_argsme(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("NEUTRAL") != std::string::npos);
            CHECK(e.location() == 2);
        }
    }
    SUBCASE("malformed JSONL line carries its ordinal") {
        std::istringstream in("{\"premise\":\"a\",\"stance\":\"PRO\"}\n{not json\n");
        try {
            parse_argsme(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.location() == 2);
        }
    }
    SUBCASE("record without premises") {
        std::istringstream in(R"([{"id":"a","conclusion":"c"}])");
        CHECK_THROWS_AS(parse_argsme(in), ParseError);
    }
    SUBCASE("non-object records") {
        std::istringstream a(R"([{"id":"a","premise":"p","stance":"PRO"}, 5])");
        CHECK_THROWS_AS(parse_argsme(a), ParseError);
        std::istringstream b(R"({"arguments": [{"id":"a","premise":"p","stance":"PRO"}, "x"]})");
        CHECK_THROWS_AS(parse_argsme(b), ParseError);
        std::istringstream c(R"({"arguments": {"id":"a"}})");
        CHECK_THROWS_AS(parse_argsme(c), ParseError);
    }
    SUBCASE("with_conclusion requires a conclusion") {
        std::istringstream in(R"([{"id":"a","premise":"p","stance":"PRO"}])");
        CHECK_THROWS_AS(parse_argsme(in, {ArgsmeCondition::WithConclusion, ""}), ParseError);
    }
}

TEST_CASE("parse_ukp: single headerless line") {
    std::ifstream in(testing::fixture_path("ukp_single.tsv"));
    auto s = parse_ukp(in, "minimum_wage");
    REQUIRE(s.size() == 1);
    CHECK(s[0].gold_label == "PRO");
    CHECK(s[0].topic == "minimum wage");
    CHECK_FALSE(s[0].thesis_text.has_value());
    CHECK(s[0].scheme == SchemeId::UkpTernary);
}

TEST_CASE("parse_ukp: published seven-column layout") {
    std::ifstream in(testing::fixture_path("ukp_abortion_3.tsv"));
    auto s = parse_ukp(in, "abortion");
    REQUIRE(s.size() == 3);
    CHECK(s[0].gold_label == "CON");
    CHECK(s[1].gold_label == "PRO");
    CHECK(s[2].gold_label == "NON");
    CHECK(s[1].claim_text == "Women must control their own bodies.");
    auto d = class_distribution(s);
    CHECK(d.at("NON") + d.at("PRO") + d.at("CON") == 3);
}

TEST_CASE("parse_ukp: errors") {
    std::istringstream a("x\tArgument_for\n");
    CHECK_THROWS_AS(parse_ukp(a, "space travel"), ValidationError);

    std::istringstream b("x\tArgument_maybe\n");
    CHECK_THROWS_WITH_AS(parse_ukp(b, "cloning"), doctest::Contains("Argument_maybe"), ParseError);

    std::istringstream c("topic\tsentence\tannotation\ncloning\tx\tNoArgument\ncloning\ty\n");
    try {
        parse_ukp(c, "cloning");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == 3);
    }
}

TEST_CASE("parse_us2016: four-pair fixture covers each label once") {
    std::ifstream in(testing::fixture_path("us2016_4.csv"));
    auto s = parse_us2016(in);
    REQUIRE(s.size() == 4);
    auto d = class_distribution(s);
    CHECK(d == std::map<std::string, std::size_t>{{"RA", 1}, {"CA", 1}, {"MA", 1}, {"NO", 1}});
    CHECK(s[0].claim_text == "Illegal immigration is out of control");
    CHECK(s[0].thesis_text == std::optional<std::string>("We need to build a wall"));
    CHECK(s[1].thesis_text == std::optional<std::string>("NAFTA, he said, \"was a disaster\""));
}

TEST_CASE("parse_us2016: empty file and errors") {
    std::istringstream empty("");
    CHECK(parse_us2016(empty).empty());

    std::istringstream bad_label("id,prop1,prop2,label\nx,a,b,SUPPORT\n");
    CHECK_THROWS_WITH_AS(parse_us2016(bad_label), doctest::Contains("SUPPORT"), ParseError);

    std::istringstream missing("id,prop1,prop2,label\nx,a,  ,RA\n");
    CHECK_THROWS_AS(parse_us2016(missing), ParseError);

    std::istringstream header("a,b,c,d\n");
    CHECK_THROWS_AS(parse_us2016(header), ParseError);
}

TEST_CASE("class_distribution of nothing is all zero") {
    auto d = class_distribution({}, LabelScheme::ukp_ternary());
    CHECK(d == std::map<std::string, std::size_t>{{"NON", 0}, {"PRO", 0}, {"CON", 0}});
}

TEST_CASE("split: 5/5 binary at 0.8 stratified gives 4 + 4") {
    auto s = labelled({{"PRO", 5}, {"CON", 5}});
    auto sp = split(s, {0.8, 42, true});
    CHECK(sp.train.size() == 8);
    CHECK(sp.test.size() == 2);
    auto d = class_distribution(sp.train);
    CHECK(d.at("PRO") == 4);
    CHECK(d.at("CON") == 4);
}

TEST_CASE("split: deterministic under a fixed seed") {
    auto s = testing::random_fixture(300, SchemeId::UkpTernary, 3).samples;
    auto a = split(s, {0.7, 99, true});
    auto b = split(s, {0.7, 99, true});
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    auto c = split(s, {0.7, 100, true});
    CHECK_FALSE(a.train == c.train);
}

TEST_CASE("split: US2016-sized corpus at 11243/12392") {
    auto s = labelled({{"RA", 2744}, {"CA", 888}, {"MA", 705}, {"NO", 8055}});
    REQUIRE(s.size() == 12392);
    auto sp = split(s, {11243.0 / 12392.0, 42, true});
    CHECK(sp.train.size() == 11243);
    CHECK(sp.test.size() == 1149);
}

TEST_CASE("split: errors") {
    CHECK_THROWS_AS(split({}, {}), ValidationError);
    auto s = labelled({{"PRO", 5}, {"CON", 1}});
    CHECK_THROWS_AS(split(s, {0.8, 1, true}), ValidationError);
    CHECK_NOTHROW(split(s, {0.8, 1, false}));
    CHECK_THROWS_AS(split(labelled({{"PRO", 4}}), {1.0, 1, false}), ValidationError);
}

TEST_CASE("split: partition and stratification hold for random inputs") {
    std::mt19937_64 rng(2024);
    const SchemeId schemes[] = {SchemeId::ArgsmeBinary, SchemeId::UkpTernary, SchemeId::Us2016Quaternary};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 999;
        const auto scheme = schemes[rng() % 3];
        auto samples = testing::random_fixture(n, scheme, rng()).samples;
        const double f = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
        const bool stratified = rng() % 2 == 0;

        auto full = class_distribution(samples);
        bool singleton = false;
        for (const auto& [label, c] : full) singleton |= c == 1;
        if (stratified && singleton) {
            CHECK_THROWS_AS(split(samples, {f, rng(), true}), ValidationError);
            continue;
        }
        auto sp = split(samples, {f, rng(), stratified});

        INFO("n=" << n << " f=" << f << " stratified=" << stratified);
        CHECK(sp.train.size() == static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 0.5)));
        CHECK(sp.train.size() + sp.test.size() == n);
        std::multiset<std::string> ids;
        for (const auto& x : sp.train) ids.insert(x.id);
        for (const auto& x : sp.test) ids.insert(x.id);
        std::multiset<std::string> expected;
        for (const auto& x : samples) expected.insert(x.id);
        CHECK(ids == expected);

        if (stratified) {
            auto tr = class_distribution(sp.train, samples.front().label_scheme());
            for (const auto& [label, c] : full) {
                const double share = static_cast<double>(sp.train.size()) * static_cast<double>(c) / static_cast<double>(n);
                CHECK(std::abs(static_cast<double>(tr.at(label)) - share) < 1.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("interchange round trip is field-for-field") {
    std::mt19937_64 rng(7);
    for (auto scheme : {SchemeId::ArgsmeBinary, SchemeId::UkpTernary, SchemeId::Us2016Quaternary}) {
        auto samples = testing::random_fixture(50, scheme, rng()).samples;
        samples[3].claim_text = "Quotes “typographic” and \"ascii\", tabs\tand\nnewlines, ünïcödé";
        std::ostringstream out;
        write_interchange(out, samples);
        std::istringstream in(out.str());
        CHECK(read_interchange(in) == samples);
    }
    std::ifstream csv(testing::fixture_path("us2016_4.csv"));
    auto pairs = parse_us2016(csv);
    std::ostringstream out;
    write_us2016(out, pairs);
    std::istringstream back(out.str());
    CHECK(parse_us2016(back) == pairs);
}

TEST_CASE("parsed sample ids are unique") {
    std::ostringstream doc;
    testing::write_argsme(doc, "https://idebate.org", 40, 30, "i");
    std::istringstream in(doc.str());
    auto s = parse_argsme(in);
    std::set<std::string> ids;
    for (const auto& x : s) ids.insert(x.id);
    CHECK(ids.size() == s.size());

    std::ostringstream tsv;
    testing::write_ukp(tsv, "cloning", 10, 5, 5);
    std::istringstream tin(tsv.str());
    auto u = parse_ukp(tin, "cloning");
    ids.clear();
    for (const auto& x : u) ids.insert(x.id);
    CHECK(ids.size() == u.size());
}
