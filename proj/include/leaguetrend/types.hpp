#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace leaguetrend {

/// Identifies one championship: a division in one season.
/// season_code is the four-digit span code used by the data repository,
/// e.g. "1314" for 2013/14.
struct SeasonKey {
    std::string country;
    std::string league_code;
    std::string season_code;
    std::string display_name;

    auto operator<=>(const SeasonKey&) const = default;
};

bool valid_season_code(const std::string& code);
bool valid_league_code(const std::string& code);

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;
};

enum class MatchOutcome { HomeWin, Draw, AwayWin };

struct MatchRecord {
    std::string division;
    Date date;
    std::string home;
    std::string away;
    int home_goals = 0;
    int away_goals = 0;
    MatchOutcome result = MatchOutcome::Draw;
};

/// One team's season as cumulative sequences indexed by the team's own
/// match count (round i = the team's i-th played match).
struct SeasonSeries {
    std::string team;
    SeasonKey key;
    std::vector<int> points;     // cumulative, non-decreasing, steps in {0,1,3}
    std::vector<int> goal_diff;  // cumulative
    std::vector<int> goals_for;  // cumulative

    int rounds() const { return static_cast<int>(points.size()); }
    int final_points() const { return points.empty() ? 0 : points.back(); }
};

/// A ranked table at some round, with its permutation encoding:
/// rank_of maps team -> 1-based position.
struct Standing {
    SeasonKey key;
    int round = 0;
    std::vector<std::string> ordered_teams;
    std::map<std::string, int> rank_of;

    static Standing from_order(std::vector<std::string> teams, SeasonKey key = {}, int round = 0);

    int teams() const { return static_cast<int>(ordered_teams.size()); }
};

inline Standing Standing::from_order(std::vector<std::string> teams, SeasonKey key, int round) {
    Standing s;
    s.key = std::move(key);
    s.round = round;
    s.ordered_teams = std::move(teams);
    for (std::size_t i = 0; i < s.ordered_teams.size(); ++i)
        s.rank_of[s.ordered_teams[i]] = static_cast<int>(i) + 1;
    return s;
}

inline bool valid_season_code(const std::string& code) {
    if (code.size() != 4) return false;
    for (char c : code)
        if (c < '0' || c > '9') return false;
    int first = (code[0] - '0') * 10 + (code[1] - '0');
    int second = (code[2] - '0') * 10 + (code[3] - '0');
    return second == (first + 1) % 100;
}

inline bool valid_league_code(const std::string& code) {
    if (code.empty()) return false;
    for (char c : code) {
        bool upper = c >= 'A' && c <= 'Z';
        bool digit = c >= '0' && c <= '9';
        if (!upper && !digit) return false;
    }
    return true;
}

}  // namespace leaguetrend
