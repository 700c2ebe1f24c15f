#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace leaguetrend {

/// Split one CSV line into fields. RFC-style: quoted fields may contain
/// commas and doubled quotes. Trailing CR is stripped by the caller.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quote a value for CSV output when it contains a comma, quote or newline.
std::string csv_quote(std::string_view value);

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline std::string csv_quote(std::string_view value) {
    bool needs = value.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace leaguetrend
