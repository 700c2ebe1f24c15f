#include "leaguetrend/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "leaguetrend/errors.hpp"
#include "leaguetrend/regression.hpp"
#include "leaguetrend/rng.hpp"

namespace leaguetrend {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// unbiased sample variance
double variance_of(std::span<const double> v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 2000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    return h;
}

// (B+1)q-th order statistic of a sorted sample, linearly interpolated.
double order_quantile(const std::vector<double>& sorted, double q) {
    const double h = (static_cast<double>(sorted.size()) + 1.0) * q;
    if (h <= 1.0) return sorted.front();
    if (h >= static_cast<double>(sorted.size())) return sorted.back();
    const std::size_t k = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(k);
    const double lo = sorted[k - 1];
    const double hi = sorted[k];
    if (!std::isfinite(lo) || !std::isfinite(hi)) return frac < 0.5 ? lo : hi;
    return lo + frac * (hi - lo);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("student_t_cdf: df > 0");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);  // P(T >= |t|)
    return t >= 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, Alternative alt) {
    if (a.size() != b.size())
        throw Error(Errc::LengthMismatch, std::to_string(a.size()) + " vs " +
                                              std::to_string(b.size()) + " samples");
    if (a.size() < 2) throw Error(Errc::TooFewSamples, "need at least 2 pairs");

    const std::size_t m = a.size();
    std::vector<double> diff(m);
    bool all_zero = true;
    for (std::size_t i = 0; i < m; ++i) {
        diff[i] = a[i] - b[i];
        all_zero = all_zero && diff[i] == 0.0;
    }
    if (all_zero) throw Error(Errc::ZeroVariance, "all paired differences are zero");

    const double dbar = mean_of(diff);
    const double sd = std::sqrt(variance_of(diff, dbar));

    TTestResult res;
    res.df = static_cast<long>(m) - 1;
    if (sd == 0.0) {
        // constant nonzero shift: the statistic degenerates to +-infinity
        res.t = dbar > 0 ? kInf : -kInf;
        res.underflow = true;
        bool far_tail = (alt == Alternative::Less && dbar > 0) ||
                        (alt == Alternative::Greater && dbar < 0);
        res.p = far_tail ? 1.0 : 0.0;
        return res;
    }
    res.t = dbar / (sd / std::sqrt(static_cast<double>(m)));

    const double df = static_cast<double>(res.df);
    const double x = df / (df + res.t * res.t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);  // P(T >= |t|)
    switch (alt) {
    case Alternative::Less: res.p = res.t <= 0.0 ? tail : 1.0 - tail; break;
    case Alternative::Greater: res.p = res.t >= 0.0 ? tail : 1.0 - tail; break;
    case Alternative::TwoSided: res.p = std::min(1.0, 2.0 * tail); break;
    }
    if (res.p < 1e-300) {
        res.p = 0.0;
        res.underflow = true;
    }
    return res;
}

ConfidenceInterval studentized_bootstrap_ci(std::span<const double> samples, double level,
                                            int replicates, std::uint64_t seed) {
    if (samples.size() < 2) throw Error(Errc::TooFewSamples, "need at least 2 samples");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level in (0,1)");
    if (replicates < 1) throw std::invalid_argument("replicates >= 1");

    const std::size_t m = samples.size();
    const double mean = mean_of(samples);
    const double var = variance_of(samples, mean);
    if (var == 0.0) throw Error(Errc::DegenerateSample, "all samples equal");
    const double se = std::sqrt(var / static_cast<double>(m));

    std::vector<double> tstar(static_cast<std::size_t>(replicates));
    std::vector<double> resample(m);
    for (int b = 0; b < replicates; ++b) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            resample[i] = samples[rng.next_below(m)];
            sum += resample[i];
        }
        const double rmean = sum / static_cast<double>(m);
        double rvar = 0.0;
        for (double x : resample) rvar += (x - rmean) * (x - rmean);
        rvar /= static_cast<double>(m - 1);
        const double rse = std::sqrt(rvar / static_cast<double>(m));
        if (rse > 0.0)
            tstar[static_cast<std::size_t>(b)] = (rmean - mean) / rse;
        else
            tstar[static_cast<std::size_t>(b)] = rmean > mean ? kInf : rmean < mean ? -kInf : 0.0;
    }
    std::sort(tstar.begin(), tstar.end());

    const double alpha = 1.0 - level;
    ConfidenceInterval ci;
    ci.estimate = mean;
    ci.level = level;
    ci.replicates = replicates;
    ci.seed = seed;
    ci.lo = mean - order_quantile(tstar, 1.0 - alpha / 2.0) * se;
    ci.hi = mean - order_quantile(tstar, alpha / 2.0) * se;
    return ci;
}

std::vector<SeasonSeries> generate_null_series(const NullModelConfig& config) {
    if (config.count < 1) throw std::invalid_argument("count >= 1");
    if (config.n < 1) throw std::invalid_argument("n >= 1");
    if (config.p_win < 0 || config.p_draw < 0 || config.p_loss < 0 ||
        std::fabs(config.p_win + config.p_draw + config.p_loss - 1.0) > 1e-12)
        throw std::invalid_argument("outcome probabilities must be >= 0 and sum to 1");

    SeasonKey key{"synthetic", "NULL", "0001", "null model"};
    std::vector<SeasonSeries> out;
    out.reserve(static_cast<std::size_t>(config.count));
    for (long s = 0; s < config.count; ++s) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(s)));
        SeasonSeries series;
        series.team = "null-" + std::to_string(s);
        series.key = key;
        series.points.reserve(static_cast<std::size_t>(config.n));
        int total = 0;
        for (int i = 0; i < config.n; ++i) {
            const double u = rng.next_double();
            total += u < config.p_win ? 3 : u < config.p_win + config.p_draw ? 1 : 0;
            series.points.push_back(total);
        }
        series.goal_diff.assign(static_cast<std::size_t>(config.n), 0);
        series.goals_for.assign(static_cast<std::size_t>(config.n), 0);
        out.push_back(std::move(series));
    }
    return out;
}

ConfidenceInterval null_model_error(const NullModelConfig& config, int t_s, int degree,
                                    double level, int replicates) {
    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(config.count));
    for (const SeasonSeries& s : generate_null_series(config))
        errors.push_back(static_cast<double>(evaluate_team(s, t_s, degree).abs_error));

    const double mean = mean_of(errors);
    if (errors.size() < 2 || variance_of(errors, mean) == 0.0) {
        // deterministic outcome distributions produce constant errors; the
        // interval collapses to a point instead of failing
        ConfidenceInterval point;
        point.estimate = mean;
        point.lo = mean;
        point.hi = mean;
        point.level = level;
        point.replicates = 0;
        point.seed = config.seed;
        return point;
    }
    // fixed substream tag so the bootstrap never reuses a series stream
    const std::uint64_t boot_seed = derive_seed(config.seed, 0x626f6f74ull);
    ConfidenceInterval ci = studentized_bootstrap_ci(errors, level, replicates, boot_seed);
    ci.seed = config.seed;
    return ci;
}

}  // namespace leaguetrend
