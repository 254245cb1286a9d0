#include "argcascade/labels.hpp"

#include "argcascade/error.hpp"

#include <algorithm>
#include <cctype>

namespace argcascade {

const LabelScheme& LabelScheme::argsme_binary() {
    static const LabelScheme s{SchemeId::ArgsmeBinary, "ARGSME_BINARY", {"PRO", "CON"}};
    return s;
}

const LabelScheme& LabelScheme::ukp_ternary() {
    static const LabelScheme s{SchemeId::UkpTernary, "UKP_TERNARY", {"NON", "PRO", "CON"}};
    return s;
}

const LabelScheme& LabelScheme::us2016_quaternary() {
    static const LabelScheme s{SchemeId::Us2016Quaternary, "US2016_QUATERNARY", {"RA", "CA", "MA", "NO"}};
    return s;
}

const LabelScheme& LabelScheme::by_id(SchemeId id) {
    switch (id) {
    case SchemeId::ArgsmeBinary: return argsme_binary();
    case SchemeId::UkpTernary: return ukp_ternary();
    case SchemeId::Us2016Quaternary: return us2016_quaternary();
    }
    throw ValidationError("invalid scheme id");
}

const LabelScheme& LabelScheme::by_name(std::string_view name) {
    for (const auto* s : {&argsme_binary(), &ukp_ternary(), &us2016_quaternary()}) {
        if (text::iequals(s->name(), name)) return *s;
    }
    throw ValidationError("unknown label scheme '" + std::string(name) + "'");
}

std::optional<std::size_t> LabelScheme::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (text::iequals(classes_[i], label)) return i;
    }
    return std::nullopt;
}

const std::string& LabelScheme::canonical(std::string_view label) const {
    auto idx = index_of(text::trim(label));
    if (!idx) throw ValidationError("label '" + std::string(label) + "' is not in scheme " + name_);
    return classes_[*idx];
}

namespace text {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string normalize(std::string_view s) {
    auto t = trim(s);
    std::string out;
    out.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < t.size() && t[i + 1] == '\n') ++i;
        } else {
            out.push_back(t[i]);
        }
    }
    return out;
}

} // namespace text

} // namespace argcascade
