#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace argcascade::csv {

/// Streaming RFC-4180 reader. Quoted fields may contain commas, doubled
/// quotes and line breaks; `line()` reports where the current record began.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Throws ParseError on an
    /// unterminated quoted field.
    std::optional<std::vector<std::string>> next();
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

std::string quote(const std::string& field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

} // namespace argcascade::csv
