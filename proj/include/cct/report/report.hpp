#pragma once

#include "cct/refine/refinery.hpp"

#include <string>
#include <vector>

namespace cct::report {

struct ScoreDistribution {
    std::vector<int> scores;                      // as given
    std::vector<std::pair<int, double>> cdf;      // at the six ladder points
};

// Empirical CDF over the satisfaction ladder {0,20,40,60,80,100}.
// Throws EmptyDistribution for empty input.
ScoreDistribution score_cdf(const std::vector<int>& scores);

struct PoolSizePoint {
    int n = 0;
    int best_score = 0;      // best among the first n initial candidates
    double cumulative_usd = 0.0;
};

// Best-score and cost as functions of pool size, computed over the
// initial generation of `history`.  Throws RangeError when the history
// has fewer than n_max initial candidates.
std::vector<PoolSizePoint> pool_size_curve(const refine::RunHistory& history, int n_max);

// Plain tabular text with a one-line header for downstream plotting.
std::string distribution_to_table(const ScoreDistribution& d);
std::string curve_to_table(const std::vector<PoolSizePoint>& points);

} // namespace cct::report
