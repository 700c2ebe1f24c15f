#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leaguetrend/types.hpp"

namespace leaguetrend {

struct PointsRule {
    int win = 3;
    int draw = 1;
    int loss = 0;
};

/// variant -> canonical team name, applied after whitespace canonicalization.
using AliasMap = std::map<std::string, std::string>;

struct ParseResult {
    std::vector<MatchRecord> records;
    std::size_t skipped = 0;  // malformed data rows, never silently dropped
};

struct SeriesBuild {
    std::map<std::string, SeasonSeries> series;
    std::vector<std::string> warnings;
};

/// Parse a raw match CSV (header row with at least Div, Date, HomeTeam,
/// AwayTeam, FTHG, FTAG, FTR; extra columns ignored). Accepts UTF-8 or
/// Windows-1252 bytes. Malformed rows are counted, not fatal.
ParseResult parse_matches(std::string_view raw, const std::string& division_hint,
                          const AliasMap& aliases = {});

/// Build per-team cumulative series from one season's matches, in
/// chronological order (date ties broken by input order).
SeriesBuild build_series(const std::vector<MatchRecord>& matches, const SeasonKey& key = {},
                         const PointsRule& rule = {});

/// Table after the given round (1-based, <= every team's round count):
/// points desc, then goal difference, goals for, team name ascending.
Standing standing_after(const std::map<std::string, SeasonSeries>& series, int round,
                        const SeasonKey& key = {});

/// Alias file: one `variant<TAB>canonical` per line, UTF-8, # comments.
AliasMap parse_aliases(std::string_view text);
AliasMap load_aliases(const std::filesystem::path& path);

/// Trim and collapse internal whitespace runs to single spaces.
std::string canonicalize_team(std::string_view name);

/// Bytes to UTF-8: pass valid UTF-8 through, otherwise treat as Windows-1252.
std::string decode_text(std::string_view bytes);

/// dd/mm/yy or dd/mm/yyyy; two-digit years pivot at 70 (>=70 -> 19xx).
std::optional<Date> parse_match_date(std::string_view text);

/// Days since an arbitrary fixed epoch; used for date-span checks.
long date_serial(const Date& d);

/// Monotone points with steps in {0,1,3}, equal-length sequences, valid start.
bool series_invariants_hold(const SeasonSeries& s);

}  // namespace leaguetrend
