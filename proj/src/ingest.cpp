#include "leaguetrend/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "leaguetrend/csvio.hpp"
#include "leaguetrend/errors.hpp"

namespace leaguetrend {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        int extra;
        if (c < 0x80) extra = 0;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2) extra = 1;
        else if ((c & 0xF0) == 0xE0) extra = 2;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4) extra = 3;
        else return false;
        for (int k = 1; k <= extra; ++k) {
            if (i + k >= s.size()) return false;
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        }
        i += extra + 1;
    }
    return true;
}

void append_utf8(std::string& out, unsigned int cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Windows-1252 0x80..0x9F block; 0 marks codes with no assignment.
constexpr unsigned int kCp1252High[32] = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178,
};

std::optional<int> parse_int_field(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace

std::string decode_text(std::string_view bytes) {
    // strip a UTF-8 BOM if present
    if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
        static_cast<unsigned char>(bytes[1]) == 0xBB &&
        static_cast<unsigned char>(bytes[2]) == 0xBF)
        bytes.remove_prefix(3);
    if (is_valid_utf8(bytes)) return std::string(bytes);
    std::string out;
    out.reserve(bytes.size() + bytes.size() / 8);
    for (char raw : bytes) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (c < 0x80) {
            out.push_back(raw);
        } else if (c < 0xA0) {
            unsigned int cp = kCp1252High[c - 0x80];
            append_utf8(out, cp ? cp : 0xFFFD);
        } else {
            append_utf8(out, c);
        }
    }
    return out;
}

std::string canonicalize_team(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool in_space = false;
    for (char c : name) {
        if (c == ' ' || c == '\t') {
            in_space = !out.empty();
        } else {
            if (in_space) out.push_back(' ');
            in_space = false;
            out.push_back(c);
        }
    }
    return out;
}

std::optional<Date> parse_match_date(std::string_view text) {
    // dd/mm/yy or dd/mm/yyyy
    int part[3] = {0, 0, 0};
    int digits[3] = {0, 0, 0};
    int field = 0;
    for (char c : text) {
        if (c == '/') {
            if (++field > 2) return std::nullopt;
        } else if (c >= '0' && c <= '9') {
            part[field] = part[field] * 10 + (c - '0');
            if (++digits[field] > 4) return std::nullopt;
        } else if (c != ' ') {
            return std::nullopt;
        }
    }
    if (field != 2 || digits[0] == 0 || digits[1] == 0) return std::nullopt;
    Date d;
    d.day = part[0];
    d.month = part[1];
    if (digits[2] == 2)
        d.year = part[2] >= 70 ? 1900 + part[2] : 2000 + part[2];
    else if (digits[2] == 4)
        d.year = part[2];
    else
        return std::nullopt;
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return std::nullopt;
    return d;
}

long date_serial(const Date& d) {
    // days-from-civil
    int y = d.year - (d.month <= 2);
    int era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<long>(era) * 146097 + static_cast<long>(doe) - 719468;
}

AliasMap parse_aliases(std::string_view text) {
    AliasMap map;
    for (std::string_view line : split_lines(text)) {
        if (line.empty() || line.front() == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) continue;
        std::string variant = canonicalize_team(line.substr(0, tab));
        std::string canonical = canonicalize_team(line.substr(tab + 1));
        if (!variant.empty() && !canonical.empty()) map[variant] = canonical;
    }
    return map;
}

AliasMap load_aliases(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_aliases(decode_text(buf.str()));
}

ParseResult parse_matches(std::string_view raw, const std::string& division_hint,
                          const AliasMap& aliases) {
    std::string text = decode_text(raw);
    std::vector<std::string_view> lines = split_lines(text);

    auto is_blank = [](const std::vector<std::string>& fields) {
        for (const auto& f : fields)
            if (!f.empty()) return false;
        return true;
    };

    std::size_t li = 0;
    while (li < lines.size() && lines[li].empty()) ++li;
    if (li == lines.size()) throw Error(Errc::EmptyFile, "no content");

    std::vector<std::string> header = split_csv_line(lines[li]);
    static const char* kRequired[] = {"Div", "Date", "HomeTeam", "AwayTeam",
                                      "FTHG", "FTAG", "FTR"};
    std::map<std::string, int> col;
    for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], static_cast<int>(i));
    std::string missing;
    for (const char* name : kRequired) {
        if (!col.count(name)) {
            if (!missing.empty()) missing += ", ";
            missing += name;
        }
    }
    if (!missing.empty()) throw Error(Errc::HeaderMissing, "column(s) absent: " + missing);

    auto field = [&](const std::vector<std::string>& fields, const char* name) -> std::string_view {
        int i = col.at(name);
        if (i >= static_cast<int>(fields.size())) return {};
        return fields[static_cast<std::size_t>(i)];
    };

    ParseResult out;
    std::size_t data_rows = 0;
    for (++li; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        std::vector<std::string> fields = split_csv_line(lines[li]);
        if (is_blank(fields)) continue;  // repository files end with comma-only lines
        ++data_rows;

        MatchRecord rec;
        rec.home = canonicalize_team(field(fields, "HomeTeam"));
        rec.away = canonicalize_team(field(fields, "AwayTeam"));
        std::optional<int> hg = parse_int_field(field(fields, "FTHG"));
        std::optional<int> ag = parse_int_field(field(fields, "FTAG"));
        std::optional<Date> date = parse_match_date(field(fields, "Date"));
        if (rec.home.empty() || rec.away.empty() || rec.home == rec.away || !hg || !ag ||
            *hg < 0 || *ag < 0 || !date) {
            ++out.skipped;
            continue;
        }
        if (auto it = aliases.find(rec.home); it != aliases.end()) rec.home = it->second;
        if (auto it = aliases.find(rec.away); it != aliases.end()) rec.away = it->second;
        rec.date = *date;
        rec.home_goals = *hg;
        rec.away_goals = *ag;
        rec.result = *hg > *ag   ? MatchOutcome::HomeWin
                     : *hg < *ag ? MatchOutcome::AwayWin
                                 : MatchOutcome::Draw;
        std::string_view ftr = field(fields, "FTR");
        if (!ftr.empty()) {
            char want = rec.result == MatchOutcome::HomeWin   ? 'H'
                        : rec.result == MatchOutcome::AwayWin ? 'A'
                                                              : 'D';
            if (ftr.size() != 1 || ftr[0] != want) {
                ++out.skipped;  // result column contradicts the goals
                continue;
            }
        }
        std::string div(field(fields, "Div"));
        rec.division = div.empty() ? division_hint : div;
        out.records.push_back(std::move(rec));
    }
    if (data_rows == 0) throw Error(Errc::EmptyFile, "header only, no data rows");
    return out;
}

SeriesBuild build_series(const std::vector<MatchRecord>& matches, const SeasonKey& key,
                         const PointsRule& rule) {
    if (matches.empty()) throw Error(Errc::EmptyFile, "no matches");

    std::vector<const MatchRecord*> ordered;
    ordered.reserve(matches.size());
    for (const auto& m : matches) ordered.push_back(&m);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const MatchRecord* a, const MatchRecord* b) { return a->date < b->date; });

    long span = date_serial(ordered.back()->date) - date_serial(ordered.front()->date);
    if (span > 400)
        throw Error(Errc::MixedSeasons,
                    "date span " + std::to_string(span) + " days exceeds one season");

    SeriesBuild out;
    for (const MatchRecord* m : ordered) {
        for (int side = 0; side < 2; ++side) {
            bool is_home = side == 0;
            const std::string& name = is_home ? m->home : m->away;
            auto [it, inserted] = out.series.try_emplace(name);
            SeasonSeries& s = it->second;
            if (inserted) {
                s.team = name;
                s.key = key;
            }
            int gf = is_home ? m->home_goals : m->away_goals;
            int ga = is_home ? m->away_goals : m->home_goals;
            int pts = rule.draw;
            if (m->result != MatchOutcome::Draw) {
                bool won = (m->result == MatchOutcome::HomeWin) == is_home;
                pts = won ? rule.win : rule.loss;
            }
            s.points.push_back(s.final_points() + pts);
            s.goal_diff.push_back((s.goal_diff.empty() ? 0 : s.goal_diff.back()) + gf - ga);
            s.goals_for.push_back((s.goals_for.empty() ? 0 : s.goals_for.back()) + gf);
        }
    }

    std::set<int> lengths;
    for (const auto& [_, s] : out.series) lengths.insert(s.rounds());
    if (lengths.size() > 1) {
        std::string msg = "UnbalancedSeason: team round counts differ (";
        bool first = true;
        for (int n : lengths) {
            if (!first) msg += ", ";
            msg += std::to_string(n);
            first = false;
        }
        out.warnings.push_back(msg + ")");
    }
    return out;
}

Standing standing_after(const std::map<std::string, SeasonSeries>& series, int round,
                        const SeasonKey& key) {
    if (series.empty()) throw Error(Errc::RoundOutOfRange, "no teams");
    int min_rounds = series.begin()->second.rounds();
    for (const auto& [_, s] : series) min_rounds = std::min(min_rounds, s.rounds());
    if (round < 1 || round > min_rounds)
        throw Error(Errc::RoundOutOfRange, "round " + std::to_string(round) + " not in [1, " +
                                               std::to_string(min_rounds) + "]");

    struct Row {
        const std::string* team;
        int pts, gd, gf;
    };
    std::vector<Row> rows;
    rows.reserve(series.size());
    std::size_t i = static_cast<std::size_t>(round - 1);
    for (const auto& [name, s] : series)
        rows.push_back({&name, s.points[i], s.goal_diff[i], s.goals_for[i]});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.pts != b.pts) return a.pts > b.pts;
        if (a.gd != b.gd) return a.gd > b.gd;
        if (a.gf != b.gf) return a.gf > b.gf;
        return *a.team < *b.team;
    });

    std::vector<std::string> order;
    order.reserve(rows.size());
    for (const Row& r : rows) order.push_back(*r.team);
    return Standing::from_order(std::move(order), key, round);
}

bool series_invariants_hold(const SeasonSeries& s) {
    if (s.points.empty()) return false;
    if (s.points.size() != s.goal_diff.size() || s.points.size() != s.goals_for.size())
        return false;
    int prev = 0;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        int step = s.points[i] - prev;
        if (step != 0 && step != 1 && step != 3) return false;
        prev = s.points[i];
    }
    return true;
}

}  // namespace leaguetrend
