// league-trend: fit season trends from match results and forecast final
// points and league tables.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "leaguetrend/datasource.hpp"
#include "leaguetrend/errors.hpp"
#include "leaguetrend/ingest.hpp"
#include "leaguetrend/rankmetrics.hpp"
#include "leaguetrend/regression.hpp"
#include "leaguetrend/report.hpp"
#include "leaguetrend/stats.hpp"

namespace fs = std::filesystem;
using namespace leaguetrend;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNetwork = 3;

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case Errc::NetworkUnavailable:
    case Errc::RemoteNotFound:
        return kExitNetwork;
    default:
        return kExitData;
    }
}

struct CommonOptions {
    std::string manifest = "data/manifest_fixtures.txt";
    std::optional<std::string> cache_dir_flag;
    bool offline = false;
    std::string fixtures = "data/fixtures";
    std::string url_template = kDefaultUrlTemplate;
    std::string alias_file = "data/aliases.tsv";
    std::string ts_spec = "1-20";
    std::vector<int> degrees = {1, 2, 3};
    std::string format = "csv";
    std::string out;
    int jobs = 1;
    bool clamp = false;
    std::uint64_t seed = 0;
};

std::vector<int> parse_ts_spec(const std::string& spec) {
    std::vector<int> values;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto dash = part.find('-');
        if (dash != std::string::npos && dash > 0) {
            int lo = std::stoi(part.substr(0, dash));
            int hi = std::stoi(part.substr(dash + 1));
            if (lo < 1 || hi < lo) throw CLI::ValidationError("--ts", "bad range " + part);
            for (int v = lo; v <= hi; ++v) values.push_back(v);
        } else {
            int v = std::stoi(part);
            if (v < 1) throw CLI::ValidationError("--ts", "holdout must be >= 1");
            values.push_back(v);
        }
    }
    if (values.empty()) throw CLI::ValidationError("--ts", "empty holdout list");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

int single_ts(const CommonOptions& common, int fallback) {
    if (common.ts_spec == "1-20") return fallback;  // default left untouched
    std::vector<int> ts = parse_ts_spec(common.ts_spec);
    if (ts.size() != 1)
        throw CLI::ValidationError("--ts", "this command takes a single holdout length");
    return ts[0];
}

int single_degree(const CommonOptions& common) {
    if (common.degrees.size() == 1) return common.degrees.front();
    return 1;  // default degree list means "linear" for single-forecast commands
}

std::string slurp_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::EmptyFile, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// "D1/1314" -> key, enriched from the manifest when the season is listed.
SeasonKey parse_season_arg(const std::string& arg, const std::vector<SeasonKey>& manifest) {
    auto slash = arg.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= arg.size())
        throw CLI::ValidationError("--season", "expected LEAGUE/SEASON, e.g. D1/1314");
    SeasonKey key;
    key.league_code = arg.substr(0, slash);
    key.season_code = arg.substr(slash + 1);
    if (!valid_league_code(key.league_code) || !valid_season_code(key.season_code))
        throw CLI::ValidationError("--season", "bad season id " + arg);
    key.display_name = key.league_code + " " + key.season_code;
    for (const SeasonKey& k : manifest) {
        if (k.league_code == key.league_code && k.season_code == key.season_code) return k;
    }
    return key;
}

std::vector<SeasonKey> manifest_or_empty(const std::string& path) {
    if (!fs::exists(path)) return {};
    return list_manifest(path);
}

AliasMap aliases_or_empty(const std::string& path) {
    if (!fs::exists(path)) return {};
    return load_aliases(path);
}

FetchOptions fetch_options(const CommonOptions& common) {
    FetchOptions opts;
    opts.offline = common.offline;
    opts.url_template = common.url_template;
    if (!common.fixtures.empty() && fs::exists(common.fixtures)) opts.fixture_dir = common.fixtures;
    return opts;
}

Championship load_championship(const SeasonKey& key, const fs::path& cache_dir,
                               const CommonOptions& common, const AliasMap& aliases,
                               std::vector<std::string>* warnings) {
    CacheEntry entry = fetch_season(key, cache_dir, fetch_options(common));
    ParseResult parsed = parse_matches(slurp_file(entry.local_path), key.league_code, aliases);
    if (parsed.skipped > 0 && warnings)
        warnings->push_back(key.league_code + "/" + key.season_code + ": skipped " +
                            std::to_string(parsed.skipped) + " malformed row(s)");
    SeriesBuild built = build_series(parsed.records, key);
    if (warnings)
        for (const std::string& w : built.warnings)
            warnings->push_back(key.league_code + "/" + key.season_code + ": " + w);
    return Championship{key, std::move(built.series)};
}

void emit_table(const Table& table, const CommonOptions& common) {
    std::string text = common.format == "json" ? to_json_lines(table) : to_csv(table);
    if (common.out.empty())
        std::cout << text;
    else
        write_text_file(common.out, text);
}

void write_report(const fs::path& dir, const std::string& stem, const Table& table) {
    write_text_file(dir / (stem + ".csv"), to_csv(table));
    write_text_file(dir / (stem + ".jsonl"), to_json_lines(table));
}

int levenshtein(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const SeasonSeries& find_team(const Championship& ch, const std::string& team) {
    auto it = ch.series.find(team);
    if (it != ch.series.end()) return it->second;

    std::vector<std::pair<int, std::string>> ranked;
    for (const auto& [name, _] : ch.series) ranked.emplace_back(levenshtein(team, name), name);
    std::sort(ranked.begin(), ranked.end());
    std::string hint;
    for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
        hint += (i ? ", " : "") + ranked[i].second;
    throw Error(Errc::TeamNotFound, "'" + team + "' - did you mean: " + hint + "?");
}

int min_rounds_of(const Championship& ch) {
    int min_rounds = 0;
    for (const auto& [_, s] : ch.series)
        min_rounds = min_rounds == 0 ? s.rounds() : std::min(min_rounds, s.rounds());
    return min_rounds;
}

// ---- subcommands

int cmd_fetch(const CommonOptions& common) {
    fs::path cache_dir = resolve_cache_dir(common.cache_dir_flag);
    fs::create_directories(cache_dir);
    std::vector<SeasonKey> keys = list_manifest(common.manifest);

    int failed = 0;
    bool network_failure = false;
    for (const SeasonKey& key : keys) {
        try {
            CacheEntry entry = fetch_season(key, cache_dir, fetch_options(common));
            std::cout << "OK   " << key.league_code << "/" << key.season_code << " "
                      << entry.byte_length << " bytes sha256:" << entry.checksum.substr(0, 12)
                      << "\n";
        } catch (const Error& e) {
            ++failed;
            network_failure = network_failure || exit_code_for(e) == kExitNetwork;
            std::cout << "FAIL " << key.league_code << "/" << key.season_code << " " << e.what()
                      << "\n";
        }
    }
    std::cerr << keys.size() - failed << "/" << keys.size() << " seasons available in "
              << cache_dir.string() << "\n";
    if (failed == 0) return kExitOk;
    return network_failure ? kExitNetwork : kExitData;
}

int cmd_predict_team(const CommonOptions& common, const std::string& season,
                     const std::string& team) {
    fs::path cache_dir = resolve_cache_dir(common.cache_dir_flag);
    fs::create_directories(cache_dir);
    SeasonKey key = parse_season_arg(season, manifest_or_empty(common.manifest));

    std::vector<std::string> warnings;
    Championship ch = load_championship(key, cache_dir, common, aliases_or_empty(common.alias_file),
                                        &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

    const SeasonSeries& series = find_team(ch, team);
    const int t_s = single_ts(common, 10);
    const int degree = single_degree(common);
    PolyModel model = fit_polynomial(series, t_s, degree);

    Table table;
    table.columns = {"team",  "league", "season",    "ts",       "degree",
                     "round", "actual", "predicted", "predicted_raw"};
    const int n = series.rounds();
    const long floor_pts = series.points[static_cast<std::size_t>(n - t_s - 1)];
    for (int round = n - t_s + 1; round <= n; ++round) {
        long predicted = floored_value(model, round);
        if (common.clamp) predicted = std::clamp(predicted, floor_pts, 3L * round);
        table.add_row({series.team, key.league_code, key.season_code, static_cast<long>(t_s),
                       static_cast<long>(degree), static_cast<long>(round),
                       static_cast<long>(series.points[static_cast<std::size_t>(round - 1)]),
                       predicted, model.at(round)});
    }
    emit_table(table, common);

    EvalRecord rec = evaluate_team(series, t_s, degree, common.clamp);
    std::cerr << series.team << ": predicted " << rec.predicted << ", actual " << rec.actual
              << ", abs error " << rec.abs_error << "\n";
    return kExitOk;
}

int cmd_predict_table(const CommonOptions& common, const std::string& season) {
    fs::path cache_dir = resolve_cache_dir(common.cache_dir_flag);
    fs::create_directories(cache_dir);
    SeasonKey key = parse_season_arg(season, manifest_or_empty(common.manifest));

    std::vector<std::string> warnings;
    Championship ch = load_championship(key, cache_dir, common, aliases_or_empty(common.alias_file),
                                        &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

    const int t_s = single_ts(common, 10);
    const int degree = single_degree(common);
    Standing actual = standing_after(ch.series, min_rounds_of(ch), key);
    PredictedStanding predicted = predict_final_standing(ch.series, t_s, degree, key);
    DistanceReport dist = displacement(actual, predicted.standing);

    Table table;
    table.columns = {"position",    "predicted_team", "predicted_points", "predicted_raw",
                     "actual_team", "actual_points",  "abs_rank_displacement"};
    for (int pos = 1; pos <= dist.m; ++pos) {
        const std::string& pteam =
            predicted.standing.ordered_teams[static_cast<std::size_t>(pos - 1)];
        const std::string& ateam = actual.ordered_teams[static_cast<std::size_t>(pos - 1)];
        table.add_row({static_cast<long>(pos), pteam, predicted.predicted_points.at(pteam),
                       predicted.raw_final.at(pteam), ateam,
                       static_cast<long>(ch.series.at(ateam).final_points()),
                       static_cast<long>(dist.per_team.at(pteam))});
    }
    emit_table(table, common);
    std::cerr << "D=" << dist.D << " max_D=" << dist.max_D << " d=" << format_cell_number(dist.d)
              << " (teams=" << dist.m << ", ts=" << t_s << ", degree=" << degree << ")\n";
    return kExitOk;
}

int cmd_evaluate(const CommonOptions& common) {
    fs::path cache_dir = resolve_cache_dir(common.cache_dir_flag);
    fs::create_directories(cache_dir);
    fs::path out_dir = common.out.empty() ? fs::path("league-trend-out") : fs::path(common.out);
    fs::create_directories(out_dir);

    std::vector<SeasonKey> keys = list_manifest(common.manifest);
    AliasMap aliases = aliases_or_empty(common.alias_file);
    std::vector<int> ts_values = parse_ts_spec(common.ts_spec);
    const std::vector<int>& degrees = common.degrees;

    // season-level parallel ingest; aggregation stays single-threaded and
    // ordered by manifest position
    std::vector<std::optional<Championship>> loaded(keys.size());
    std::vector<std::string> warnings;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < keys.size(); i = next.fetch_add(1)) {
            try {
                std::vector<std::string> w;
                Championship ch = load_championship(keys[i], cache_dir, common, aliases, &w);
                std::lock_guard lock(mu);
                loaded[i] = std::move(ch);
                warnings.insert(warnings.end(), w.begin(), w.end());
            } catch (const Error& e) {
                std::lock_guard lock(mu);
                warnings.push_back(keys[i].league_code + "/" + keys[i].season_code +
                                   " unusable: " + e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::max(1, common.jobs); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    std::vector<Championship> data;
    for (auto& slot : loaded)
        if (slot) data.push_back(std::move(*slot));
    if (data.empty()) {
        std::cerr << "no usable seasons\n";
        return kExitData;
    }

    // (1) mean absolute error aggregates, one file per grouping
    for (Grouping g : {Grouping::Degree, Grouping::Ts, Grouping::SeasonLength, Grouping::Country,
                       Grouping::Team, Grouping::Zone}) {
        Table table;
        if (g == Grouping::Degree) {
            table.columns = {"degree", "mean_abs_error", "count"};
            for (const SweepRow& row : sweep_evaluations(data, ts_values, degrees, g, common.clamp))
                table.add_row({row.group, row.mean_abs_error, static_cast<long>(row.count)});
        } else {
            table.columns = {"degree", grouping_name(g), "mean_abs_error", "count"};
            for (int degree : degrees)
                for (const SweepRow& row :
                     sweep_evaluations(data, ts_values, {degree}, g, common.clamp))
                    table.add_row({std::to_string(degree), row.group, row.mean_abs_error,
                                   static_cast<long>(row.count)});
        }
        write_report(out_dir, std::string("abs_error_by_") + grouping_name(g), table);
    }

    // (2) per-championship standing distances for the linear model
    Table dist_table;
    dist_table.columns = {"country", "league", "season", "ts", "teams", "D", "max_D", "d"};
    std::map<int, std::vector<double>> d_by_ts;
    for (const Championship& ch : data) {
        const int rounds = min_rounds_of(ch);
        Standing actual = standing_after(ch.series, rounds, ch.key);
        for (int t_s : ts_values) {
            if (rounds - t_s < 2) continue;
            DistanceReport rep =
                displacement(actual, predict_final_standing(ch.series, t_s, 1, ch.key).standing);
            dist_table.add_row({ch.key.country, ch.key.league_code, ch.key.season_code,
                                static_cast<long>(t_s), static_cast<long>(rep.m),
                                static_cast<long>(rep.D), static_cast<long>(rep.max_D), rep.d});
            d_by_ts[t_s].push_back(rep.d);
        }
    }
    write_report(out_dir, "displacement", dist_table);

    Table dist_summary;
    dist_summary.columns = {"ts", "mean_d", "median_d", "championships"};
    for (auto& [t_s, ds] : d_by_ts) {
        std::sort(ds.begin(), ds.end());
        double mean = 0.0;
        for (double v : ds) mean += v;
        mean /= static_cast<double>(ds.size());
        double median =
            ds.size() % 2 ? ds[ds.size() / 2] : 0.5 * (ds[ds.size() / 2 - 1] + ds[ds.size() / 2]);
        dist_summary.add_row(
            {static_cast<long>(t_s), mean, median, static_cast<long>(ds.size())});
    }
    write_report(out_dir, "displacement_summary", dist_summary);

    // (3) top/bottom-k true positive rates, table layout: rows t_s, columns
    // T3 B3 T6 B6 with counts and rates
    Table tpr;
    tpr.columns = {"ts", "T3", "T3_rate", "B3", "B3_rate", "T6", "T6_rate", "B6", "B6_rate"};
    for (int t_s : ts_values) {
        TprCell t3 = top_bottom_tpr(data, t_s, 3, TableEnd::Top, 1);
        TprCell b3 = top_bottom_tpr(data, t_s, 3, TableEnd::Bottom, 1);
        TprCell t6 = top_bottom_tpr(data, t_s, 6, TableEnd::Top, 1);
        TprCell b6 = top_bottom_tpr(data, t_s, 6, TableEnd::Bottom, 1);
        tpr.add_row({static_cast<long>(t_s), static_cast<long>(t3.hits), t3.rate,
                     static_cast<long>(b3.hits), b3.rate, static_cast<long>(t6.hits), t6.rate,
                     static_cast<long>(b6.hits), b6.rate});
    }
    write_report(out_dir, "tpr", tpr);

    // (4) perfect predictions + run summary
    long perfect = perfect_prediction_count(data, ts_values, 1);
    std::size_t series_count = 0;
    for (const Championship& ch : data) series_count += ch.series.size();
    std::string summary = "{\n";
    summary += "  \"championships\": " + std::to_string(data.size()) + ",\n";
    summary += "  \"series\": " + std::to_string(series_count) + ",\n";
    summary += "  \"ts\": \"" + common.ts_spec + "\",\n";
    summary += "  \"degrees\": [";
    for (std::size_t i = 0; i < degrees.size(); ++i)
        summary += (i ? "," : "") + std::to_string(degrees[i]);
    summary += "],\n";
    summary += "  \"perfect_predictions\": " + std::to_string(perfect) + "\n";
    summary += "}\n";
    write_text_file(out_dir / "summary.json", summary);

    // plot-ready long format: one observation per row
    Table long_table;
    long_table.columns = {"metric", "country", "league", "season", "team", "ts", "degree",
                          "value"};
    for (const EvalRecord& rec : sweep_records(data, ts_values, degrees, common.clamp))
        long_table.add_row({std::string("abs_error"), rec.key.country, rec.key.league_code,
                            rec.key.season_code, rec.team, static_cast<long>(rec.t_s),
                            static_cast<long>(rec.degree), static_cast<double>(rec.abs_error)});
    for (const auto& row : dist_table.rows)
        long_table.add_row({std::string("d"), row[0], row[1], row[2], std::string(), row[3],
                            static_cast<long>(1), row[7]});
    write_report(out_dir, "plotdata_long", long_table);

    std::cerr << "evaluated " << data.size() << " championships, " << series_count
              << " series; reports in " << out_dir.string() << "\n";
    return kExitOk;
}

int cmd_null_model(const CommonOptions& common, long count, int n, const std::string& probs_spec,
                   double level, int replicates) {
    NullModelConfig config;
    config.count = count;
    config.n = n;
    config.seed = common.seed;
    if (!probs_spec.empty()) {
        std::stringstream ss(probs_spec);
        std::string part;
        std::vector<double> probs;
        while (std::getline(ss, part, ',')) probs.push_back(std::stod(part));
        if (probs.size() != 3) throw CLI::ValidationError("--null-probs", "expected win,draw,loss");
        config.p_win = probs[0];
        config.p_draw = probs[1];
        config.p_loss = probs[2];
    }
    const int t_s = single_ts(common, 10);
    const int degree = single_degree(common);

    ConfidenceInterval ci = null_model_error(config, t_s, degree, level, replicates);
    Table table;
    table.columns = {"count",  "n",    "ts",             "degree", "p_win", "p_draw", "p_loss",
                     "seed",   "mean_abs_error", "lo",   "hi",    "level",  "replicates"};
    table.add_row({static_cast<long>(config.count), static_cast<long>(config.n),
                   static_cast<long>(t_s), static_cast<long>(degree), config.p_win, config.p_draw,
                   config.p_loss, static_cast<long>(config.seed), ci.estimate, ci.lo, ci.hi,
                   ci.level, static_cast<long>(ci.replicates)});
    emit_table(table, common);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Season trend fitting and league table forecasting from match results"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string cache_dir_flag;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--manifest", common.manifest, "Season manifest file");
        cmd->add_option("--cache-dir", cache_dir_flag,
                        "Cache directory (overrides LEAGUE_TREND_CACHE)");
        cmd->add_flag("--offline", common.offline, "Never touch the network");
        cmd->add_option("--fixtures", common.fixtures, "Directory of shipped season files");
        cmd->add_option("--url-template", common.url_template,
                        "Remote layout, e.g. https://host/{season_code}/{league_code}.csv");
        cmd->add_option("--alias-file", common.alias_file, "Team-name alias table");
        cmd->add_option("--ts", common.ts_spec, "Holdout rounds, e.g. 10 or 1-20 or 1,5,10");
        cmd->add_option("--degree", common.degrees, "Polynomial degree(s), subset of 1 2 3")
            ->check(CLI::Range(1, 3));
        cmd->add_option("--seed", common.seed, "RNG seed");
        cmd->add_option("--format", common.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", common.out, "Output file (directory for evaluate)");
        cmd->add_option("--jobs", common.jobs, "Season-level parallelism")
            ->check(CLI::Range(1, 256));
        cmd->add_flag("--clamp", common.clamp, "Clamp forecasts to [points so far, 3n]");
    };

    CLI::App* fetch = app.add_subcommand("fetch", "Download or import all manifest seasons");
    add_common(fetch);

    CLI::App* predict_team =
        app.add_subcommand("predict-team", "Holdout forecast for one team's season");
    std::string team, season;
    add_common(predict_team);
    predict_team->add_option("--team", team, "Team name")->required();
    predict_team->add_option("--season", season, "Season id, e.g. D1/1314")->required();

    CLI::App* predict_table =
        app.add_subcommand("predict-table", "Forecast a championship's final table");
    add_common(predict_table);
    predict_table->add_option("--season", season, "Season id, e.g. D1/1314")->required();

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Batch evaluation: errors, distances, TPR tables");
    add_common(evaluate);

    CLI::App* null_model =
        app.add_subcommand("null-model", "Prediction error on random-result seasons");
    add_common(null_model);
    long null_count = 100000;
    int null_n = 38;
    std::string null_probs;
    double level = 0.95;
    int replicates = 999;
    null_model->add_option("--count", null_count, "Number of synthetic seasons");
    null_model->add_option("--n", null_n, "Season length in rounds");
    null_model->add_option("--null-probs", null_probs, "win,draw,loss probabilities");
    null_model->add_option("--level", level, "Confidence level");
    null_model->add_option("--replicates", replicates, "Bootstrap replicates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    if (!cache_dir_flag.empty()) common.cache_dir_flag = cache_dir_flag;

    try {
        if (fetch->parsed()) return cmd_fetch(common);
        if (predict_team->parsed()) return cmd_predict_team(common, season, team);
        if (predict_table->parsed()) return cmd_predict_table(common, season);
        if (evaluate->parsed()) return cmd_evaluate(common);
        if (null_model->parsed())
            return cmd_null_model(common, null_count, null_n, null_probs, level, replicates);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
