#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "leaguetrend/csvio.hpp"

namespace leaguetrend {

/// Typed tabular report; serialized with a fixed column order so reruns are
/// byte-identical.
struct Table {
    using Cell = std::variant<std::string, long, double>;

    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_cell_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string cell_text(const Table::Cell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    if (const auto* i = std::get_if<long>(&cell)) return std::to_string(*i);
    return format_cell_number(std::get<double>(cell));
}

inline std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_quote(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_quote(cell_text(row[c]));
        }
        out += '\n';
    }
    return out;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out.push_back(c);
            }
        }
    }
    return out;
}

/// One JSON object per row (JSON lines).
inline std::string to_json_lines(const Table& table) {
    std::string out;
    for (const auto& row : table.rows) {
        out += '{';
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            if (c) out += ',';
            out += '"' + json_escape(table.columns[c]) + "\":";
            if (const auto* s = std::get_if<std::string>(&row[c]))
                out += '"' + json_escape(*s) + '"';
            else
                out += cell_text(row[c]);
        }
        out += "}\n";
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace leaguetrend
