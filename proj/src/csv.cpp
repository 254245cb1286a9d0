#include "argcascade/csv.hpp"

#include "argcascade/error.hpp"

namespace argcascade::csv {

std::optional<std::vector<std::string>> Reader::next() {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    record_line_ = line_;

    for (int c = in_.get(); c != std::char_traits<char>::eof(); c = in_.get()) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            if (in_.peek() == '\n') in_.get();
            [[fallthrough]];
        case '\n':
            ++line_;
            fields.push_back(std::move(field));
            return fields;
        default:
            field.push_back(static_cast<char>(c));
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", record_line_);
    if (!any) return std::nullopt;
    fields.push_back(std::move(field));
    return fields;
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote(fields[i]);
    }
    out << "\r\n";
}

} // namespace argcascade::csv
