#include "argcascade/error.hpp"
#include "argcascade/refiner.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace argcascade::refiner {
namespace {

using Lexicon = std::vector<std::pair<std::string_view, std::string_view>>; // keyword, class

// Negated forms sit in the binary lexicon only: in the ternary scheme
// "not an argument for ..." is genuinely ambiguous between NON and CON.
const Lexicon& lexicon(SchemeId scheme) {
    static const Lexicon binary{
        {"for the thesis", "PRO"}, {"supports", "PRO"},      {"argument for", "PRO"},
        {"in favor", "PRO"},       {"in favour", "PRO"},     {"against", "CON"},
        {"contra", "CON"},         {"opposes", "CON"},       {"not an argument for", "CON"},
        {"does not support", "CON"}, {"doesn't support", "CON"},
    };
    static const Lexicon ternary{
        {"for the thesis", "PRO"},  {"supports", "PRO"},    {"argument for", "PRO"},
        {"in favor", "PRO"},        {"in favour", "PRO"},   {"against", "CON"},
        {"contra", "CON"},          {"opposes", "CON"},     {"not an argument", "NON"},
        {"no argument", "NON"},     {"non-argument", "NON"}, {"neither", "NON"},
    };
    static const Lexicon quaternary{
        {"inference", "RA"},      {"supports", "RA"},     {"reason for", "RA"},
        {"conflict", "CA"},       {"contradicts", "CA"},  {"incompatible", "CA"},
        {"attacks", "CA"},        {"against", "CA"},      {"rephrase", "MA"},
        {"reformulat", "MA"},     {"restates", "MA"},     {"paraphrase", "MA"},
        {"no relation", "NO"},    {"unrelated", "NO"},    {"not related", "NO"},
        {"neither", "NO"},
    };
    switch (scheme) {
    case SchemeId::ArgsmeBinary: return binary;
    case SchemeId::UkpTernary: return ternary;
    case SchemeId::Us2016Quaternary: return quaternary;
    }
    return binary;
}

bool word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80;
}

std::set<std::string_view> clause_hits(std::string_view clause, const Lexicon& lex) {
    std::set<std::string_view> hits;
    std::size_t i = 0;
    while (i < clause.size()) {
        if (i > 0 && word_char(clause[i - 1])) {
            ++i;
            continue;
        }
        std::size_t best = 0;
        std::string_view cls;
        for (const auto& [kw, c] : lex) {
            if (kw.size() > best && clause.substr(i, kw.size()) == kw) {
                best = kw.size();
                cls = c;
            }
        }
        if (best) {
            hits.insert(cls);
            i += best;
        } else {
            ++i;
        }
    }
    return hits;
}

} // namespace

std::optional<std::string> parse_verdict(std::string_view raw, const LabelScheme& scheme) {
    std::string lower = text::to_lower(raw);
    // Typographic apostrophes read as ASCII for the "doesn't" forms.
    for (std::size_t p; (p = lower.find("\xE2\x80\x99")) != std::string::npos;) lower.replace(p, 3, "'");

    const auto& lex = lexicon(scheme.id());
    std::size_t start = 0;
    while (start <= lower.size()) {
        auto end = lower.find_first_of(".,;:!?\n", start);
        if (end == std::string::npos) end = lower.size();
        auto hits = clause_hits(std::string_view(lower).substr(start, end - start), lex);
        if (hits.size() == 1) {
            const auto label = std::string(*hits.begin());
            if (scheme.contains(label)) return scheme.canonical(label);
            return std::nullopt;
        }
        if (hits.size() > 1) return std::nullopt;
        start = end + 1;
    }
    return std::nullopt;
}

std::string canonical_reply(const LabelScheme& scheme, std::string_view label) {
    const auto& c = scheme.canonical(label);
    switch (scheme.id()) {
    case SchemeId::ArgsmeBinary:
        return c == "PRO" ? "The claim is an argument for the thesis." : "The claim is an argument against the thesis.";
    case SchemeId::UkpTernary:
        if (c == "PRO") return "The claim is an argument for the thesis.";
        if (c == "CON") return "The claim is an argument against the thesis.";
        return "The claim is not an argument.";
    case SchemeId::Us2016Quaternary:
        if (c == "RA") return "The claim is an inference that gives a reason to accept the proposition.";
        if (c == "CA") return "The claim is in conflict with the proposition.";
        if (c == "MA") return "The claim is a rephrase of the proposition.";
        return "There is no relation between the claim and the proposition.";
    }
    throw ValidationError("canonical_reply: unknown scheme");
}

} // namespace argcascade::refiner
