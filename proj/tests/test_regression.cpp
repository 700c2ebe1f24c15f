#include "leaguetrend/regression.hpp"

#include <cmath>
#include <vector>

#include "leaguetrend/rng.hpp"
#include "test_util.hpp"

using namespace leaguetrend;

namespace {

SeasonSeries make_series(std::vector<int> points, const std::string& team = "X") {
    SeasonSeries s;
    s.team = team;
    s.points = std::move(points);
    s.goal_diff.assign(s.points.size(), 0);
    s.goals_for.assign(s.points.size(), 0);
    return s;
}

SeasonSeries linear_series(int slope, int rounds) {
    std::vector<int> pts;
    for (int i = 1; i <= rounds; ++i) pts.push_back(slope * i);
    return make_series(std::move(pts));
}

double rss_of(const PolyModel& model, std::span<const int> points) {
    double rss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double r = points[i] - model.at(static_cast<double>(i + 1));
        rss += r * r;
    }
    return rss;
}

}  // namespace

TEST_CASE("exact linear data recovered") {
    SeasonSeries s = linear_series(2, 20);
    PolyModel m = fit_polynomial(s, 5, 1);
    REQUIRE(m.coeffs.size() == 2);
    CHECK(std::fabs(m.coeffs[0]) < 1e-9);
    CHECK(m.coeffs[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(m.train_len == 15);
    CHECK(m.rss < 1e-12);
}

TEST_CASE("exact quadratic data recovered") {
    std::vector<int> pts;
    for (int i = 1; i <= 10; ++i) pts.push_back(i + i * i);
    PolyModel m = fit_polynomial(std::span<const int>(pts), 2, 10);
    REQUIRE(m.coeffs.size() == 3);
    CHECK(std::fabs(m.coeffs[0]) < 1e-9);
    CHECK(m.coeffs[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.coeffs[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("alternating win/draw sequence, full-length line fit") {
    // T = [3,4,7,8,11,12]; closed-form OLS gives slope 67/35, intercept 4/5,
    // rss 48/35 (hand-derived, confirmed by an independent reference fit).
    std::vector<int> pts = {3, 4, 7, 8, 11, 12};
    PolyModel m = fit_polynomial(std::span<const int>(pts), 1, 6);
    CHECK(m.coeffs[1] == doctest::Approx(67.0 / 35.0).epsilon(1e-12));
    CHECK(m.coeffs[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m.rss == doctest::Approx(48.0 / 35.0).epsilon(1e-10));
}

TEST_CASE("extrapolation floors the model value") {
    PolyModel linear;
    linear.degree = 1;
    linear.coeffs = {0.0, 2.0};
    linear.n = 38;
    CHECK(extrapolate_raw(linear) == doctest::Approx(76.0));
    CHECK(extrapolate_final(linear) == 76);

    PolyModel halfway;
    halfway.degree = 1;
    halfway.coeffs = {0.5, 2.0};
    halfway.n = 10;
    CHECK(extrapolate_final(halfway) == 20);  // floor(20.5)

    PolyModel negative;
    negative.degree = 1;
    negative.coeffs = {10.0, -1.0};
    negative.n = 20;
    CHECK(extrapolate_final(negative) == -10);  // no clamping by default
}

TEST_CASE("optional clamp keeps the forecast in [points so far, 3n]") {
    SeasonSeries s = make_series({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 6});
    // training on the first 8 rounds sees only zeros
    PolyModel m = fit_polynomial(s, 4, 1);
    CHECK(extrapolate_final(m) == 0);
    CHECK(extrapolate_final_clamped(m, s, 4) == 0);

    SeasonSeries down = make_series({3, 6, 9, 12, 12, 12, 12, 12});
    PolyModel dm = fit_polynomial(down, 4, 1);
    CHECK(extrapolate_final(dm) == 24);
    CHECK(extrapolate_final_clamped(dm, down, 4) == 24);  // inside the range already

    // a steeply negative synthetic fit gets pulled up to the points-so-far floor
    SeasonSeries fall = make_series({9, 9, 9, 9, 6 + 3, 9 + 3, 12, 12, 12, 12});
    PolyModel fm;
    fm.degree = 1;
    fm.coeffs = {30.0, -3.0};
    fm.n = 10;
    CHECK(extrapolate_final(fm) == 0);
    CHECK(extrapolate_final_clamped(fm, fall, 2) == 12);
}

TEST_CASE("evaluate_team on exactly linear series has zero error") {
    SeasonSeries draws = linear_series(1, 34);  // a draw every round
    EvalRecord rec = evaluate_team(draws, 10, 1);
    CHECK(rec.predicted == 34);
    CHECK(rec.actual == 34);
    CHECK(rec.abs_error == 0);

    EvalRecord rec2 = evaluate_team(linear_series(2, 38), 5, 1);
    CHECK(rec2.abs_error == 0);

    for (int t_s = 1; t_s <= 20; ++t_s)
        CHECK(evaluate_team(linear_series(3, 34), t_s, 1).abs_error == 0);
}

TEST_CASE("piecewise season with a mid-season pace change") {
    // First half paced at ~1.29 points/round, second at ~2.52: the fit on the
    // opening rounds misses the final total by roughly 19 * (2.52 - 1.29).
    std::vector<int> pts;
    for (int i = 1; i <= 19; ++i) pts.push_back(static_cast<int>(std::lround(1.29 * i)));
    int at_half = pts.back();
    for (int i = 20; i <= 38; ++i)
        pts.push_back(at_half + static_cast<int>(std::lround(2.52 * (i - 19))));
    SeasonSeries s = make_series(std::move(pts));

    EvalRecord rec = evaluate_team(s, 19, 1);
    CHECK(rec.actual == 73);
    CHECK(rec.predicted == 49);  // frozen from the independent reference fit
    CHECK(rec.abs_error == 24);

    auto [first, second] = half_season_slopes(s);
    CHECK(first == doctest::Approx(1.2964912280701753).epsilon(1e-9));
    CHECK(second == doctest::Approx(2.5).epsilon(1e-9));
    // the construction reproduces the target pace pattern
    CHECK(std::fabs(first - 1.29) < 0.05);
    CHECK(std::fabs(second - 2.52) < 0.05);
}

TEST_CASE("half-season slopes") {
    auto [a, b] = half_season_slopes(linear_series(2, 38));
    CHECK(a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<int> kink;
    for (int i = 1; i <= 19; ++i) kink.push_back(i);
    for (int i = 20; i <= 38; ++i) kink.push_back(19 + 3 * (i - 19));
    auto [c, d] = half_season_slopes(make_series(std::move(kink)));
    CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_CODE(half_season_slopes(make_series({1, 2, 3})), Errc::InsufficientData);
}

TEST_CASE("insufficient data and degree bounds") {
    CHECK_THROWS_CODE(fit_polynomial(linear_series(1, 10), 9, 1), Errc::InsufficientData);
    CHECK_THROWS_CODE(fit_polynomial(linear_series(1, 10), 8, 3), Errc::InsufficientData);
    CHECK_THROWS_CODE(fit_polynomial(linear_series(1, 10), 3, 4), Errc::InsufficientData);
    CHECK_THROWS_CODE(evaluate_team(linear_series(1, 10), 0, 1), Errc::InsufficientData);
}

TEST_CASE("degree nesting: rss never grows with degree") {
    Rng rng(0x90ce55);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 12 + static_cast<int>(rng.next_below(34));
        std::vector<int> pts;
        int total = 0;
        for (int i = 0; i < n; ++i) {
            std::uint64_t u = rng.next_below(3);
            total += u == 0 ? 0 : u == 1 ? 1 : 3;
            pts.push_back(total);
        }
        std::span<const int> view(pts);
        double r1 = fit_polynomial(view, 1, n).rss;
        double r2 = fit_polynomial(view, 2, n).rss;
        double r3 = fit_polynomial(view, 3, n).rss;
        CHECK(r2 <= r1 + 1e-9);
        CHECK(r3 <= r2 + 1e-9);
    }
}

TEST_CASE("fitted coefficients are a local rss minimum") {
    Rng rng(0x0b5e55);
    for (int iter = 0; iter < 30; ++iter) {
        int n = 10 + static_cast<int>(rng.next_below(30));
        std::vector<int> pts;
        int total = 0;
        for (int i = 0; i < n; ++i) {
            total += static_cast<int>(rng.next_below(4));
            pts.push_back(total);
        }
        std::span<const int> view(pts);
        for (int degree = 1; degree <= 3; ++degree) {
            PolyModel m = fit_polynomial(view, degree, n);
            double base = rss_of(m, view);
            for (std::size_t k = 0; k < m.coeffs.size(); ++k) {
                for (double eps : {1e-6, -1e-6}) {
                    PolyModel perturbed = m;
                    perturbed.coeffs[k] += eps;
                    CHECK(rss_of(perturbed, view) >= base - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("exact polynomial recovery, degree <= 3, n <= 50") {
    Rng rng(0xf17);
    for (int iter = 0; iter < 60; ++iter) {
        int degree = 1 + static_cast<int>(rng.next_below(3));
        int n = degree + 2 + static_cast<int>(rng.next_below(47));
        n = std::min(n, 50);
        std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
        for (auto& c : coeffs) c = static_cast<double>(rng.next_below(7)) - 3.0;
        if (coeffs.back() == 0.0) coeffs.back() = 1.0;
        std::vector<int> pts;
        for (int i = 1; i <= n; ++i) {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) v = v * i + coeffs[k];
            pts.push_back(static_cast<int>(std::llround(v)));
        }
        PolyModel m = fit_polynomial(std::span<const int>(pts), degree, n);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            CAPTURE(iter);
            CAPTURE(k);
            CHECK(std::fabs(m.coeffs[k] - coeffs[k]) < 1e-9);
        }
    }
}

TEST_CASE("translation shifts only the intercept") {
    Rng rng(0x7a45);
    for (int iter = 0; iter < 20; ++iter) {
        int n = 10 + static_cast<int>(rng.next_below(30));
        std::vector<int> pts, shifted;
        int total = 0;
        const int offset = 7;
        for (int i = 0; i < n; ++i) {
            total += static_cast<int>(rng.next_below(4));
            pts.push_back(total);
            shifted.push_back(total + offset);
        }
        for (int degree = 1; degree <= 3; ++degree) {
            PolyModel a = fit_polynomial(std::span<const int>(pts), degree, n);
            PolyModel b = fit_polynomial(std::span<const int>(shifted), degree, n);
            CHECK(std::fabs(b.coeffs[0] - a.coeffs[0] - offset) < 1e-9);
            for (std::size_t k = 1; k < a.coeffs.size(); ++k)
                CHECK(std::fabs(b.coeffs[k] - a.coeffs[k]) < 1e-9);
        }
    }
}

TEST_CASE("table zones") {
    CHECK(zone_of_position(1, 20) == TableZone::Top5);
    CHECK(zone_of_position(5, 20) == TableZone::Top5);
    CHECK(zone_of_position(6, 20) == TableZone::Other);
    CHECK(zone_of_position(8, 20) == TableZone::Middle5);
    CHECK(zone_of_position(12, 20) == TableZone::Middle5);
    CHECK(zone_of_position(13, 20) == TableZone::Other);
    CHECK(zone_of_position(16, 20) == TableZone::Bottom5);
    CHECK(zone_of_position(20, 20) == TableZone::Bottom5);
    CHECK(zone_of_position(7, 18) == TableZone::Middle5);
    CHECK(zone_of_position(11, 18) == TableZone::Middle5);
}

TEST_CASE("sweep: one cell equals evaluate_team, groupings are deterministic") {
    Championship ch;
    ch.key = SeasonKey{"synthetic", "LIN", "0001", ""};
    SeasonSeries s = linear_series(2, 30);
    s.team = "Solo";
    s.key = ch.key;
    ch.series["Solo"] = s;

    auto rows = sweep_evaluations({ch}, {10}, {1}, Grouping::Ts);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].group == "10");
    CHECK(rows[0].count == 1);
    CHECK(rows[0].mean_abs_error ==
          doctest::Approx(static_cast<double>(evaluate_team(s, 10, 1).abs_error)));

    auto again = sweep_evaluations({ch}, {10}, {1}, Grouping::Ts);
    CHECK(again.size() == rows.size());
    CHECK(again[0].group == rows[0].group);
    CHECK(again[0].mean_abs_error == rows[0].mean_abs_error);
}

TEST_CASE("sweep over a corpus of exactly linear series is all zero") {
    std::vector<Championship> data;
    Championship ch;
    ch.key = SeasonKey{"synthetic", "LIN", "0001", ""};
    for (int t = 0; t < 100; ++t) {
        SeasonSeries s = linear_series(1 + t % 3, 34);
        s.team = "T" + std::to_string(100 + t);
        s.key = ch.key;
        ch.series[s.team] = std::move(s);
    }
    data.push_back(std::move(ch));
    std::vector<int> ts = {1, 5, 10, 20};
    for (Grouping g : {Grouping::Degree, Grouping::Ts, Grouping::SeasonLength, Grouping::Team}) {
        for (const SweepRow& row : sweep_evaluations(data, ts, {1}, g))
            CHECK(row.mean_abs_error == 0.0);
    }
}

TEST_CASE("unknown grouping is rejected") {
    CHECK(parse_grouping("zone") == Grouping::Zone);
    CHECK_THROWS_CODE(parse_grouping("by-manager"), Errc::UnknownGrouping);
}
