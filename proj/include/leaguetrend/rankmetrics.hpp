#pragma once

#include <map>
#include <string>
#include <vector>

#include "leaguetrend/regression.hpp"
#include "leaguetrend/types.hpp"

namespace leaguetrend {

/// Total absolute displacement between two standings of the same teams,
/// normalized by its maximum over the permutation group.
struct DistanceReport {
    long D = 0;      // sum of per-team rank displacements
    long max_D = 0;  // floor(m^2 / 2)
    double d = 0.0;  // D / max_D, in [0, 1]
    int m = 0;
    std::map<std::string, int> per_team;
};

DistanceReport displacement(const Standing& actual, const Standing& predicted);

/// floor(m^2 / 2): the largest displacement any permutation of m teams attains.
long max_displacement(int m);

/// Mean of d over uniformly random standings: (m^2 - 1) / (3 * floor(m^2/2)),
/// i.e. exactly 2/3 for odd m and 2/3 - 2/(3 m^2) for even m.
double expected_random_distance(int m);

/// Final table forecast: teams ranked by the unfloored extrapolated final
/// value (floored points reported alongside; ranking never uses them, so
/// flooring cannot manufacture ties).
struct PredictedStanding {
    Standing standing;
    std::map<std::string, double> raw_final;
    std::map<std::string, long> predicted_points;
};

PredictedStanding predict_final_standing(const std::map<std::string, SeasonSeries>& series,
                                         int t_s, int degree, const SeasonKey& key = {});

enum class TableEnd { Top, Bottom };

struct TprCell {
    int t_s = 0;
    int k = 0;
    TableEnd end = TableEnd::Top;
    std::size_t hits = 0;
    std::size_t total = 0;
    double rate = 0.0;
};

/// Fraction of championships whose predicted top-k (or bottom-k) teams match
/// the actual ones. Membership comparison by default; exact_positions
/// additionally requires the order inside the zone to match.
TprCell top_bottom_tpr(const std::vector<Championship>& championships, int t_s, int k,
                       TableEnd end, int degree = 1, bool exact_positions = false);

/// Number of (championship, t_s) pairs predicted with zero displacement.
long perfect_prediction_count(const std::vector<Championship>& championships,
                              const std::vector<int>& ts_values, int degree = 1);

}  // namespace leaguetrend
