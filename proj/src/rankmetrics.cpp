#include "leaguetrend/rankmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "leaguetrend/errors.hpp"
#include "leaguetrend/ingest.hpp"

namespace leaguetrend {

long max_displacement(int m) {
    if (m < 2) throw std::invalid_argument("max_displacement: need at least 2 teams");
    return static_cast<long>(m) * m / 2;
}

double expected_random_distance(int m) {
    if (m < 2) throw std::invalid_argument("expected_random_distance: need at least 2 teams");
    return (static_cast<double>(m) * m - 1.0) / (3.0 * static_cast<double>(max_displacement(m)));
}

DistanceReport displacement(const Standing& actual, const Standing& predicted) {
    if (actual.rank_of.size() != predicted.rank_of.size() ||
        !std::equal(actual.rank_of.begin(), actual.rank_of.end(), predicted.rank_of.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
        std::string detail;
        for (const auto& [team, _] : actual.rank_of)
            if (!predicted.rank_of.count(team)) detail += " -" + team;
        for (const auto& [team, _] : predicted.rank_of)
            if (!actual.rank_of.count(team)) detail += " +" + team;
        throw Error(Errc::TeamSetMismatch, "standings cover different teams:" + detail);
    }

    DistanceReport rep;
    rep.m = actual.teams();
    for (const auto& [team, rank_a] : actual.rank_of) {
        int disp = std::abs(rank_a - predicted.rank_of.at(team));
        rep.per_team[team] = disp;
        rep.D += disp;
    }
    rep.max_D = max_displacement(rep.m);
    rep.d = rep.max_D > 0 ? static_cast<double>(rep.D) / static_cast<double>(rep.max_D) : 0.0;
    return rep;
}

PredictedStanding predict_final_standing(const std::map<std::string, SeasonSeries>& series,
                                         int t_s, int degree, const SeasonKey& key) {
    struct Row {
        const std::string* team;
        double raw;
        int pts_at_cut;
        int gd_at_cut;
    };
    PredictedStanding out;
    std::vector<Row> rows;
    rows.reserve(series.size());
    for (const auto& [team, s] : series) {
        PolyModel model = fit_polynomial(s, t_s, degree);
        double raw = extrapolate_raw(model);
        std::size_t cut = static_cast<std::size_t>(s.rounds() - t_s - 1);
        rows.push_back({&team, raw, s.points[cut], s.goal_diff[cut]});
        out.raw_final[team] = raw;
        out.predicted_points[team] = static_cast<long>(std::floor(raw));
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.raw != b.raw) return a.raw > b.raw;
        if (a.pts_at_cut != b.pts_at_cut) return a.pts_at_cut > b.pts_at_cut;
        if (a.gd_at_cut != b.gd_at_cut) return a.gd_at_cut > b.gd_at_cut;
        return *a.team < *b.team;
    });
    std::vector<std::string> order;
    order.reserve(rows.size());
    for (const Row& r : rows) order.push_back(*r.team);
    out.standing = Standing::from_order(std::move(order), key, 0);
    return out;
}

namespace {

Standing actual_final_standing(const Championship& ch) {
    int min_rounds = 0;
    for (const auto& [_, s] : ch.series)
        min_rounds = min_rounds == 0 ? s.rounds() : std::min(min_rounds, s.rounds());
    return standing_after(ch.series, min_rounds, ch.key);
}

}  // namespace

TprCell top_bottom_tpr(const std::vector<Championship>& championships, int t_s, int k,
                       TableEnd end, int degree, bool exact_positions) {
    TprCell cell;
    cell.t_s = t_s;
    cell.k = k;
    cell.end = end;
    for (const Championship& ch : championships) {
        const int m = static_cast<int>(ch.series.size());
        if (k >= m) continue;
        Standing actual = actual_final_standing(ch);
        Standing predicted = predict_final_standing(ch.series, t_s, degree, ch.key).standing;
        auto zone = [&](const Standing& s) {
            const auto& v = s.ordered_teams;
            return end == TableEnd::Top
                       ? std::vector<std::string>(v.begin(), v.begin() + k)
                       : std::vector<std::string>(v.end() - k, v.end());
        };
        std::vector<std::string> za = zone(actual);
        std::vector<std::string> zp = zone(predicted);
        bool hit;
        if (exact_positions) {
            hit = za == zp;
        } else {
            std::set<std::string> sa(za.begin(), za.end());
            std::set<std::string> sp(zp.begin(), zp.end());
            hit = sa == sp;
        }
        cell.total += 1;
        cell.hits += hit ? 1 : 0;
    }
    cell.rate = cell.total ? static_cast<double>(cell.hits) / static_cast<double>(cell.total) : 0.0;
    return cell;
}

long perfect_prediction_count(const std::vector<Championship>& championships,
                              const std::vector<int>& ts_values, int degree) {
    long count = 0;
    for (const Championship& ch : championships) {
        Standing actual = actual_final_standing(ch);
        for (int t_s : ts_values) {
            Standing predicted = predict_final_standing(ch.series, t_s, degree, ch.key).standing;
            if (displacement(actual, predicted).D == 0) ++count;
        }
    }
    return count;
}

}  // namespace leaguetrend
