#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leaguetrend/types.hpp"

namespace leaguetrend {

struct ConfidenceInterval {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.95;
    int replicates = 0;
    std::uint64_t seed = 0;
};

/// Bootstrap-t interval for the mean. Each replicate is studentized with its
/// own analytic standard error (replicate SD / sqrt(m)); the interval is
/// mean - t*_{1-a/2} se and mean - t*_{a/2} se. Replicates draw from
/// deterministic substreams of `seed`, so results are reproducible and
/// independent of evaluation order.
ConfidenceInterval studentized_bootstrap_ci(std::span<const double> samples, double level = 0.95,
                                            int replicates = 999, std::uint64_t seed = 0);

enum class Alternative { Less, Greater, TwoSided };

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    long df = 0;
    bool underflow = false;  // true when p fell below 1e-300 (or t was infinite)
};

/// Paired t-test on a[i] - b[i]. Less means "mean(a - b) < 0".
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, Alternative alt);

/// Student's t CDF through the regularized incomplete beta function.
double student_t_cdf(double t, double df);

/// I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

struct NullModelConfig {
    long count = 100000;
    int n = 38;
    // W/D/L law of one synthetic match. The default is the law induced by
    // drawing both scorelines uniformly from {0..4}: P(draw) = 1/5.
    double p_win = 0.40;
    double p_draw = 0.20;
    double p_loss = 0.40;
    std::uint64_t seed = 0;
};

/// Synthetic seasons: cumulative sums of i.i.d. {3,1,0} increments.
std::vector<SeasonSeries> generate_null_series(const NullModelConfig& config);

/// Mean |predicted - actual| of the polynomial extrapolation over null-model
/// seasons, with its bootstrap interval.
ConfidenceInterval null_model_error(const NullModelConfig& config, int t_s, int degree,
                                    double level = 0.95, int replicates = 999);

}  // namespace leaguetrend
