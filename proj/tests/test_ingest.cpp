#include "leaguetrend/ingest.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "leaguetrend/rng.hpp"
#include "test_util.hpp"

using namespace leaguetrend;

namespace {

MatchRecord match(const std::string& home, const std::string& away, int hg, int ag,
                  Date date = {2013, 9, 1}) {
    MatchRecord m;
    m.division = "T1";
    m.date = date;
    m.home = home;
    m.away = away;
    m.home_goals = hg;
    m.away_goals = ag;
    m.result = hg > ag ? MatchOutcome::HomeWin : hg < ag ? MatchOutcome::AwayWin
                                                         : MatchOutcome::Draw;
    return m;
}

}  // namespace

TEST_CASE("parse a single well-formed row") {
    auto parsed = parse_matches(
        "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n"
        "E0,17/08/13,Arsenal,Aston Villa,1,3,A\n",
        "E0");
    REQUIRE(parsed.records.size() == 1);
    CHECK(parsed.skipped == 0);
    const MatchRecord& m = parsed.records[0];
    CHECK(m.division == "E0");
    CHECK(m.date == Date{2013, 8, 17});
    CHECK(m.home == "Arsenal");
    CHECK(m.away == "Aston Villa");
    CHECK(m.home_goals == 1);
    CHECK(m.away_goals == 3);
    CHECK(m.result == MatchOutcome::AwayWin);
}

TEST_CASE("header and emptiness errors") {
    CHECK_THROWS_CODE(parse_matches("", "E0"), Errc::EmptyFile);
    CHECK_THROWS_CODE(parse_matches("Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n", "E0"),
                      Errc::EmptyFile);
    CHECK_THROWS_CODE(parse_matches("Div,Date,HomeTeam,AwayTeam\nE0,17/08/13,A,B\n", "E0"),
                      Errc::HeaderMissing);
}

TEST_CASE("malformed rows are counted, never fatal") {
    auto parsed = parse_matches(
        "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n"
        "E0,17/08/13,Arsenal,Aston Villa,1,3,A\n"
        "E0,17/08/13,,Everton,2,0,H\n"          // blank home team
        "E0,17/08/13,Fulham,Fulham,1,1,D\n"     // team plays itself
        "E0,17/08/13,Hull,Stoke,x,0,H\n"        // unparseable goals
        "E0,not-a-date,Norwich,Swansea,2,2,D\n" // bad date
        "E0,18/08/13,Chelsea,Hull,2,0,A\n"      // FTR contradicts the goals
        ",,,,,,\n"                               // repository-style filler line
        "E0,18/08/13,West Ham,Cardiff,2,0,H\n",
        "E0");
    CHECK(parsed.records.size() == 2);
    CHECK(parsed.skipped == 4 + 1);  // 4 malformed + 1 contradictory
}

TEST_CASE("windows-1252 input is transcoded") {
    std::string raw =
        "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n"
        "D1,17/08/96,N\xFCrnberg,K\xF6ln,2,1,H\n";
    auto parsed = parse_matches(raw, "D1");
    REQUIRE(parsed.records.size() == 1);
    CHECK(parsed.records[0].home == "N\xC3\xBCrnberg");
    CHECK(parsed.records[0].away == "K\xC3\xB6ln");
    CHECK(parsed.records[0].date.year == 1996);
}

TEST_CASE("team names are canonicalized and aliased") {
    AliasMap aliases = parse_aliases(
        "# spelling variants\n"
        "Middlesboro\tMiddlesbrough\n"
        "Man Utd\tMan United\n");
    CHECK(aliases.size() == 2);

    auto parsed = parse_matches(
        "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n"
        "E0,02/09/00,  Man   Utd ,Middlesboro,3,1,H\n",
        "E0", aliases);
    REQUIRE(parsed.records.size() == 1);
    CHECK(parsed.records[0].home == "Man United");
    CHECK(parsed.records[0].away == "Middlesbrough");
}

TEST_CASE("date formats and the two-digit pivot") {
    CHECK(parse_match_date("17/08/13") == Date{2013, 8, 17});
    CHECK(parse_match_date("05/08/95") == Date{1995, 8, 5});
    CHECK(parse_match_date("01/07/70") == Date{1970, 7, 1});
    CHECK(parse_match_date("31/12/69") == Date{2069, 12, 31});
    CHECK(parse_match_date("30/08/2014") == Date{2014, 8, 30});
    CHECK(!parse_match_date("2014-08-30").has_value());
    CHECK(!parse_match_date("31/13/14").has_value());
}

TEST_CASE("build_series: one match, two teams") {
    auto built = build_series({match("A", "B", 2, 0)});
    CHECK(built.series.at("A").points == std::vector<int>{3});
    CHECK(built.series.at("B").points == std::vector<int>{0});
    CHECK(built.series.at("A").goal_diff == std::vector<int>{2});
    CHECK(built.series.at("B").goal_diff == std::vector<int>{-2});
    CHECK(built.warnings.empty());
}

TEST_CASE("build_series: a team drawing every round accumulates T_i = i") {
    std::vector<MatchRecord> matches;
    for (int i = 0; i < 34; ++i)
        matches.push_back(match("A", "B", 1, 1, Date{2013, 8 + i / 28, 1 + i % 28}));
    auto built = build_series(matches);
    const SeasonSeries& a = built.series.at("A");
    REQUIRE(a.rounds() == 34);
    for (int i = 1; i <= 34; ++i) CHECK(a.points[static_cast<std::size_t>(i - 1)] == i);
    CHECK(series_invariants_hold(a));
}

TEST_CASE("build_series rejects concatenated seasons") {
    std::vector<MatchRecord> matches = {match("A", "B", 1, 0, Date{2012, 8, 1}),
                                        match("B", "A", 0, 1, Date{2013, 12, 20})};
    CHECK_THROWS_CODE(build_series(matches), Errc::MixedSeasons);
    CHECK_THROWS_CODE(build_series({}), Errc::EmptyFile);
}

TEST_CASE("build_series flags unbalanced seasons") {
    auto built = build_series({match("A", "B", 1, 0, Date{2013, 8, 1}),
                               match("B", "A", 2, 2, Date{2013, 9, 1}),
                               match("A", "C", 0, 0, Date{2013, 10, 1})});
    REQUIRE(built.warnings.size() == 1);
    CHECK(built.warnings[0].find("UnbalancedSeason") == 0);
}

TEST_CASE("standing_after basics and tie-breaks") {
    auto built = build_series({
        match("A", "B", 2, 0, Date{2013, 8, 1}),   // A 3 pts, +2
        match("B", "A", 1, 1, Date{2013, 8, 8}),   // both +1
    });
    Standing s = standing_after(built.series, 2);
    CHECK(s.ordered_teams == std::vector<std::string>{"A", "B"});
    CHECK(s.rank_of.at("A") == 1);
    CHECK(s.rank_of.at("B") == 2);

    // equal points, goal difference decides
    auto tie = build_series({
        match("A", "X", 3, 0, Date{2013, 8, 1}),
        match("B", "Y", 1, 0, Date{2013, 8, 1}),
        match("X", "B", 0, 1, Date{2013, 8, 8}),
        match("Y", "A", 0, 1, Date{2013, 8, 8}),
    });
    Standing t = standing_after(tie.series, 2);
    CHECK(t.ordered_teams[0] == "A");  // A +4, B +2 on 6 points each
    CHECK(t.ordered_teams[1] == "B");

    CHECK_THROWS_CODE(standing_after(built.series, 0), Errc::RoundOutOfRange);
    CHECK_THROWS_CODE(standing_after(built.series, 3), Errc::RoundOutOfRange);
}

TEST_CASE("every standing's rank map is a bijection") {
    Championship ch = testutil::load_championship("1314", "D1");
    for (int round : {1, 5, 17, 34}) {
        Standing s = standing_after(ch.series, round);
        std::set<int> ranks;
        for (const auto& [team, rank] : s.rank_of) ranks.insert(rank);
        CHECK(ranks.size() == ch.series.size());
        CHECK(*ranks.begin() == 1);
        CHECK(*ranks.rbegin() == static_cast<int>(ch.series.size()));
        for (std::size_t p = 0; p < s.ordered_teams.size(); ++p)
            CHECK(s.rank_of.at(s.ordered_teams[p]) == static_cast<int>(p) + 1);
    }
}

// ---- shipped fixture: Bundesliga 2013/14 layout file

TEST_CASE("fixture: record count matches an independent line count") {
    std::string raw = testutil::slurp(testutil::fixture_dir() / "1314" / "D1.csv");
    // independent count: newline-separated non-empty rows, minus the header
    std::size_t lines = 0;
    std::size_t start = 0;
    while (start < raw.size()) {
        std::size_t nl = raw.find('\n', start);
        std::string_view line(raw.data() + start,
                              (nl == std::string::npos ? raw.size() : nl) - start);
        if (!line.empty() && line != "\r") ++lines;
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    REQUIRE(lines == 307);  // header + 306 matches: 18 teams, 34 rounds

    auto parsed = parse_matches(raw, "D1");
    CHECK(parsed.records.size() == 306);
    CHECK(parsed.skipped == 0);
}

TEST_CASE("fixture: series and final table reproduce the published season") {
    Championship ch = testutil::load_championship("1314", "D1", "Germany");
    REQUIRE(ch.series.size() == 18);
    for (const auto& [team, s] : ch.series) {
        CHECK(s.rounds() == 34);
        CHECK(series_invariants_hold(s));
    }

    CHECK(ch.series.at("Bayern Munich").final_points() == 90);
    const SeasonSeries& schalke = ch.series.at("Schalke 04");
    CHECK(schalke.points[0] == 3);
    CHECK(schalke.points[4] == 7);
    CHECK(schalke.final_points() == 64);

    const std::vector<std::string> published = {
        "Bayern Munich", "Dortmund", "Schalke 04", "Leverkusen", "Wolfsburg", "M'gladbach",
        "Mainz", "Augsburg", "Hoffenheim", "Hannover", "Hertha", "Werder Bremen",
        "Ein Frankfurt", "Freiburg", "Stuttgart", "Hamburg", "Nurnberg", "Braunschweig"};
    CHECK(standing_after(ch.series, 34, ch.key).ordered_teams == published);
}

TEST_CASE("fixture: points conservation") {
    for (const char* spec : {"1314/D1", "1213/E0", "1415/I1"}) {
        std::string path(spec);
        auto split = path.find('/');
        std::string season = path.substr(0, split);
        std::string league = path.substr(split + 1);
        auto parsed =
            parse_matches(testutil::slurp(testutil::fixture_dir() / season / (league + ".csv")),
                          league);
        long wins = 0, draws = 0;
        for (const MatchRecord& m : parsed.records)
            (m.result == MatchOutcome::Draw ? draws : wins) += 1;
        auto built = build_series(parsed.records);
        long total = 0;
        for (const auto& [_, s] : built.series) total += s.final_points();
        CAPTURE(spec);
        CHECK(total == 3 * wins + 2 * draws);
        CHECK(built.warnings.empty());
    }
}

TEST_CASE("parser totality under random row corruption") {
    std::string raw = testutil::slurp(testutil::fixture_dir() / "1314" / "D1.csv");
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < raw.size()) {
        std::size_t nl = raw.find('\n', start);
        lines.push_back(raw.substr(start, (nl == std::string::npos ? raw.size() : nl) - start));
        if (nl == std::string::npos) break;
        start = nl + 1;
    }

    Rng rng(0xc0de);
    std::size_t corrupted = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (rng.next_below(10) == 0) {
            lines[i] = (rng.next_below(2) == 0) ? "D1,31/08/13,,Mainz,1,0,H\r"
                                                : "D1,31/08/13,Hertha,Mainz,?,0,H\r";
            ++corrupted;
        }
    }
    std::string rebuilt;
    for (const auto& l : lines) rebuilt += l + "\n";
    auto parsed = parse_matches(rebuilt, "D1");
    CHECK(parsed.skipped == corrupted);
    CHECK(parsed.records.size() + parsed.skipped == 306);
}
