#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace argcascade {

enum class SchemeId { ArgsmeBinary, UkpTernary, Us2016Quaternary };

/// A fixed, ordered label set. Class order defines probability-vector layout
/// and argmax tie-breaking, so it never changes.
class LabelScheme {
public:
    static const LabelScheme& argsme_binary();
    static const LabelScheme& ukp_ternary();
    static const LabelScheme& us2016_quaternary();

    /// Looks a scheme up by its canonical name (ARGSME_BINARY, ...), case-insensitive.
    static const LabelScheme& by_name(std::string_view name);
    static const LabelScheme& by_id(SchemeId id);

    SchemeId id() const noexcept { return id_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& classes() const noexcept { return classes_; }
    std::size_t size() const noexcept { return classes_.size(); }

    /// Index of a class, matching case-insensitively; nullopt if unknown.
    std::optional<std::size_t> index_of(std::string_view label) const;
    /// Canonical spelling of `label`; throws ValidationError if unknown.
    const std::string& canonical(std::string_view label) const;
    bool contains(std::string_view label) const { return index_of(label).has_value(); }

    friend bool operator==(const LabelScheme& a, const LabelScheme& b) { return a.id_ == b.id_; }

private:
    LabelScheme(SchemeId id, std::string name, std::vector<std::string> classes)
        : id_(id), name_(std::move(name)), classes_(std::move(classes)) {}

    SchemeId id_;
    std::string name_;
    std::vector<std::string> classes_;
};

namespace text {

std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::string_view trim(std::string_view s);
/// Trims surrounding whitespace and turns CRLF / lone CR into LF.
std::string normalize(std::string_view s);

} // namespace text

} // namespace argcascade
