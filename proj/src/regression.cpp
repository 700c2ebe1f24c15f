#include "leaguetrend/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "leaguetrend/errors.hpp"
#include "leaguetrend/ingest.hpp"

namespace leaguetrend {

namespace {

PolyModel ols_fit(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, int degree,
                  int season_rounds) {
    const auto rows = xs.size();
    Eigen::MatrixXd design(rows, degree + 1);
    for (Eigen::Index r = 0; r < rows; ++r) {
        double v = 1.0;
        for (int k = 0; k <= degree; ++k) {
            design(r, k) = v;
            v *= xs[r];
        }
    }
    // equilibrate the Vandermonde columns before the QR solve; the raw
    // columns span ~5 orders of magnitude at degree 3
    Eigen::VectorXd scale(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        double norm = design.col(k).norm();
        scale[k] = norm > 0.0 ? norm : 1.0;
        design.col(k) /= scale[k];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < degree + 1)
        throw Error(Errc::SingularFit, "design matrix rank " + std::to_string(qr.rank()));
    Eigen::VectorXd c = qr.solve(ys);

    PolyModel model;
    model.degree = degree;
    model.rss = (ys - design * c).squaredNorm();
    c.array() /= scale.array();
    model.coeffs.assign(c.data(), c.data() + c.size());
    model.train_len = static_cast<int>(rows);
    model.n = season_rounds;
    return model;
}

}  // namespace

PolyModel fit_polynomial(std::span<const int> training_points, int degree, int season_rounds) {
    if (degree < 1 || degree > 3)
        throw Error(Errc::InsufficientData, "degree must be 1, 2 or 3");
    const int len = static_cast<int>(training_points.size());
    if (len < degree + 1)
        throw Error(Errc::InsufficientData, std::to_string(len) + " points for degree " +
                                                std::to_string(degree));
    Eigen::VectorXd xs(len), ys(len);
    for (int i = 0; i < len; ++i) {
        xs[i] = i + 1;
        ys[i] = training_points[static_cast<std::size_t>(i)];
    }
    return ols_fit(xs, ys, degree, season_rounds);
}

PolyModel fit_polynomial(const SeasonSeries& series, int t_s, int degree) {
    const int n = series.rounds();
    if (t_s < 0 || t_s >= n)
        throw Error(Errc::InsufficientData, "t_s " + std::to_string(t_s) + " outside [0, n)");
    return fit_polynomial(std::span<const int>(series.points).first(static_cast<std::size_t>(n - t_s)),
                          degree, n);
}

double extrapolate_raw(const PolyModel& model) { return model.at(model.n); }

long floored_value(const PolyModel& model, double round) {
    const double raw = model.at(round);
    // an exact fit extrapolates to an integer up to rounding noise; snap so
    // the floor does not lose a whole point to the last few ulps
    const double snapped = std::nearbyint(raw);
    if (std::fabs(raw - snapped) <= 1e-9 * std::max(1.0, std::fabs(raw)))
        return static_cast<long>(snapped);
    return static_cast<long>(std::floor(raw));
}

long extrapolate_final(const PolyModel& model) {
    return floored_value(model, static_cast<double>(model.n));
}

long extrapolate_final_clamped(const PolyModel& model, const SeasonSeries& series, int t_s) {
    long value = extrapolate_final(model);
    long lo = series.points[static_cast<std::size_t>(series.rounds() - t_s - 1)];
    long hi = 3L * series.rounds();
    return std::clamp(value, lo, hi);
}

EvalRecord evaluate_team(const SeasonSeries& series, int t_s, int degree, bool clamp) {
    if (t_s < 1)
        throw Error(Errc::InsufficientData, "t_s must be >= 1");
    PolyModel model = fit_polynomial(series, t_s, degree);
    EvalRecord rec;
    rec.team = series.team;
    rec.key = series.key;
    rec.t_s = t_s;
    rec.degree = degree;
    rec.predicted = clamp ? extrapolate_final_clamped(model, series, t_s) : extrapolate_final(model);
    rec.actual = series.final_points();
    rec.abs_error = std::labs(rec.predicted - rec.actual);
    return rec;
}

std::pair<double, double> half_season_slopes(const SeasonSeries& series) {
    const int n = series.rounds();
    if (n < 6) throw Error(Errc::InsufficientData, "need at least 6 rounds");
    const int half = n / 2;

    auto slope = [&](int from, int to) {  // rounds [from, to], original indices
        const int len = to - from + 1;
        Eigen::VectorXd xs(len), ys(len);
        for (int i = 0; i < len; ++i) {
            xs[i] = from + i;
            ys[i] = series.points[static_cast<std::size_t>(from + i - 1)];
        }
        return ols_fit(xs, ys, 1, n).coeffs[1];
    };
    return {slope(1, half), slope(half + 1, n)};
}

TableZone zone_of_position(int position, int team_count) {
    if (position <= 5) return TableZone::Top5;
    if (position > team_count - 5) return TableZone::Bottom5;
    int mid_start = (team_count - 5) / 2 + 1;
    if (position >= mid_start && position < mid_start + 5) return TableZone::Middle5;
    return TableZone::Other;
}

const char* zone_name(TableZone z) {
    switch (z) {
    case TableZone::Top5: return "top5";
    case TableZone::Middle5: return "middle5";
    case TableZone::Bottom5: return "bottom5";
    case TableZone::Other: return "other";
    }
    return "other";
}

Grouping parse_grouping(const std::string& name) {
    if (name == "degree") return Grouping::Degree;
    if (name == "ts") return Grouping::Ts;
    if (name == "n") return Grouping::SeasonLength;
    if (name == "country") return Grouping::Country;
    if (name == "team") return Grouping::Team;
    if (name == "zone") return Grouping::Zone;
    throw Error(Errc::UnknownGrouping, name);
}

const char* grouping_name(Grouping g) {
    switch (g) {
    case Grouping::Degree: return "degree";
    case Grouping::Ts: return "ts";
    case Grouping::SeasonLength: return "n";
    case Grouping::Country: return "country";
    case Grouping::Team: return "team";
    case Grouping::Zone: return "zone";
    }
    return "?";
}

std::vector<EvalRecord> sweep_records(const std::vector<Championship>& data,
                                      const std::vector<int>& ts_values,
                                      const std::vector<int>& degrees, bool clamp) {
    std::vector<EvalRecord> records;
    for (const Championship& ch : data) {
        for (const auto& [team, series] : ch.series) {
            for (int t_s : ts_values) {
                for (int degree : degrees) {
                    if (series.rounds() - t_s < degree + 1 || t_s < 1) continue;
                    records.push_back(evaluate_team(series, t_s, degree, clamp));
                }
            }
        }
    }
    return records;
}

std::vector<SweepRow> sweep_evaluations(const std::vector<Championship>& data,
                                        const std::vector<int>& ts_values,
                                        const std::vector<int>& degrees, Grouping grouping,
                                        bool clamp) {
    if (data.empty() || ts_values.empty() || degrees.empty())
        throw Error(Errc::InsufficientData, "empty sweep input");

    // zone grouping needs each championship's final table
    std::map<const Championship*, Standing> finals;
    if (grouping == Grouping::Zone) {
        for (const Championship& ch : data) {
            int min_rounds = 0;
            for (const auto& [_, s] : ch.series)
                min_rounds = min_rounds == 0 ? s.rounds() : std::min(min_rounds, s.rounds());
            finals.emplace(&ch, standing_after(ch.series, min_rounds, ch.key));
        }
    }

    // group key -> (numeric sort key, sum, count)
    struct Acc {
        double order = 0.0;
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::map<std::string, Acc> acc;
    for (const Championship& ch : data) {
        for (const auto& [team, series] : ch.series) {
            for (int t_s : ts_values) {
                for (int degree : degrees) {
                    if (series.rounds() - t_s < degree + 1 || t_s < 1) continue;
                    EvalRecord rec = evaluate_team(series, t_s, degree, clamp);
                    std::string group;
                    double order = 0.0;
                    switch (grouping) {
                    case Grouping::Degree:
                        group = std::to_string(degree);
                        order = degree;
                        break;
                    case Grouping::Ts:
                        group = std::to_string(t_s);
                        order = t_s;
                        break;
                    case Grouping::SeasonLength:
                        group = std::to_string(series.rounds());
                        order = series.rounds();
                        break;
                    case Grouping::Country:
                        group = ch.key.country;
                        break;
                    case Grouping::Team:
                        group = team;
                        break;
                    case Grouping::Zone: {
                        int pos = finals.at(&ch).rank_of.at(team);
                        TableZone z = zone_of_position(pos, static_cast<int>(ch.series.size()));
                        group = zone_name(z);
                        order = static_cast<double>(z);
                        break;
                    }
                    }
                    Acc& a = acc[group];
                    a.order = order;
                    a.sum += static_cast<double>(rec.abs_error);
                    a.count += 1;
                }
            }
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(acc.size());
    for (const auto& [group, a] : acc)
        rows.push_back({group, a.sum / static_cast<double>(a.count), a.count});
    std::stable_sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
        return acc.at(a.group).order < acc.at(b.group).order;
    });
    return rows;
}

}  // namespace leaguetrend
