#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "leaguetrend/types.hpp"

namespace leaguetrend {

/// Least-squares polynomial fitted to the opening portion of a season.
struct PolyModel {
    int degree = 1;
    std::vector<double> coeffs;  // c_0 .. c_degree, points per round^k
    int train_len = 0;           // n - t_s
    int n = 0;                   // season length in rounds
    double rss = 0.0;

    /// Model value at round x.
    double at(double x) const {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
        return acc;
    }
};

struct EvalRecord {
    std::string team;
    SeasonKey key;
    int t_s = 0;
    int degree = 1;
    long predicted = 0;  // floor of the extrapolated final value
    long actual = 0;
    long abs_error = 0;
};

/// OLS fit of `degree` on (i, y_i), i = 1..len, via Householder QR.
/// Vandermonde normal equations are avoided on purpose: they lose
/// accuracy already at degree 3 for season-length inputs.
PolyModel fit_polynomial(std::span<const int> training_points, int degree, int season_rounds);

/// Fit on the first n - t_s rounds of a series.
PolyModel fit_polynomial(const SeasonSeries& series, int t_s, int degree);

/// Predicted final points: floor of the model at round n. Deliberately not
/// clamped; wild cubic extrapolations are reported as-is.
long extrapolate_final(const PolyModel& model);

/// Raw (unfloored) extrapolation at round n.
double extrapolate_raw(const PolyModel& model);

/// Floor of the model value at an arbitrary round, with the same
/// integer-snap guard extrapolate_final uses.
long floored_value(const PolyModel& model, double round);

/// extrapolate_final restricted to [points at round n - t_s, 3n].
long extrapolate_final_clamped(const PolyModel& model, const SeasonSeries& series, int t_s);

EvalRecord evaluate_team(const SeasonSeries& series, int t_s, int degree, bool clamp = false);

/// (slope over rounds 1..floor(n/2), slope over rounds floor(n/2)+1..n),
/// both on original round indices.
std::pair<double, double> half_season_slopes(const SeasonSeries& series);

enum class Grouping { Degree, Ts, SeasonLength, Country, Team, Zone };

/// Final-table zone: positions 1-5, the 5 middle positions, last 5, or other.
enum class TableZone { Top5, Middle5, Bottom5, Other };
TableZone zone_of_position(int position, int team_count);
const char* zone_name(TableZone z);

/// One championship: every team's series plus identifying key.
struct Championship {
    SeasonKey key;
    std::map<std::string, SeasonSeries> series;
};

struct SweepRow {
    std::string group;  // value of the grouping variable, as text
    double mean_abs_error = 0.0;
    std::size_t count = 0;
};

Grouping parse_grouping(const std::string& name);  // throws UnknownGrouping
const char* grouping_name(Grouping g);

/// Mean |predicted - actual| over all (team, season, t_s, degree) cells,
/// aggregated by the grouping variable. Rows come back sorted by group key
/// (numeric groupings in numeric order).
std::vector<SweepRow> sweep_evaluations(const std::vector<Championship>& data,
                                        const std::vector<int>& ts_values,
                                        const std::vector<int>& degrees, Grouping grouping,
                                        bool clamp = false);

/// The flat per-cell records behind a sweep, in deterministic order.
std::vector<EvalRecord> sweep_records(const std::vector<Championship>& data,
                                      const std::vector<int>& ts_values,
                                      const std::vector<int>& degrees, bool clamp = false);

}  // namespace leaguetrend
