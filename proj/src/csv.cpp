#include "metricsvis/csv.hpp"

#include "metricsvis/errors.hpp"

namespace metricsvis::csv {

Reader::Reader(std::istream& in) : in_(in) {}

std::optional<std::vector<std::string>> Reader::next() {
    if (first_) {
        first_ = false;
        if (in_.peek() == 0xEF) {
            char bom[3];
            in_.read(bom, 3);
            if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
                throw SchemaError("input is not UTF-8 text");
            }
        }
    }

    while (true) {
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        bool any = false;
        int ch;
        while ((ch = in_.get()) != std::char_traits<char>::eof()) {
            any = true;
            const char c = static_cast<char>(ch);
            if (quoted) {
                if (c == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                    }
                } else {
                    field.push_back(c);
                }
                continue;
            }
            if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (c == '\r') {
                if (in_.peek() == '\n') in_.get();
                break;
            } else if (c == '\n') {
                break;
            } else {
                field.push_back(c);
            }
        }
        if (quoted) throw SchemaError("unterminated quoted field");
        if (!any) return std::nullopt;
        if (fields.empty() && field.empty()) continue;  // blank line
        fields.push_back(std::move(field));
        return fields;
    }
}

std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += escape(fields[i]);
    }
    return line;
}

}  // namespace metricsvis::csv
