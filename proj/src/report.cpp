#include "cct/report/report.hpp"

#include "cct/errors.hpp"
#include "cct/util.hpp"

#include <algorithm>
#include <sstream>

namespace cct::report {

static constexpr int kLadder[] = {0, 20, 40, 60, 80, 100};

ScoreDistribution score_cdf(const std::vector<int>& scores) {
    if (scores.empty())
        throw EmptyDistribution("score distribution needs at least one sample");
    ScoreDistribution d;
    d.scores = scores;
    const double n = double(scores.size());
    for (int point : kLadder) {
        std::size_t le = 0;
        for (int s : scores)
            if (s <= point) ++le;
        d.cdf.emplace_back(point, double(le) / n);
    }
    return d;
}

std::vector<PoolSizePoint> pool_size_curve(const refine::RunHistory& history, int n_max) {
    if (n_max < 1)
        throw RangeError("pool size curve needs n_max >= 1");
    if (history.iterations.empty())
        throw RangeError("pool size curve needs a run with at least one iteration");
    const auto& first = history.iterations.front().candidates;
    if (int(first.size()) < n_max)
        throw RangeError("pool size curve needs " + std::to_string(n_max) +
                         " initial candidates, run produced " + std::to_string(first.size()));

    std::vector<PoolSizePoint> out;
    int best = 0;
    double usd = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const auto& row = first[std::size_t(n - 1)];
        best = std::max(best, row.score);
        usd += row.usd;
        out.push_back({n, best, usd});
    }
    return out;
}

std::string distribution_to_table(const ScoreDistribution& d) {
    std::ostringstream os;
    os << "score cum_fraction\n";
    for (const auto& [point, frac] : d.cdf)
        os << point << " " << format_double(frac) << "\n";
    return os.str();
}

std::string curve_to_table(const std::vector<PoolSizePoint>& points) {
    std::ostringstream os;
    os << "pool_size best_score cumulative_usd\n";
    for (const auto& p : points)
        os << p.n << " " << p.best_score << " " << format_double(p.cumulative_usd) << "\n";
    return os.str();
}

} // namespace cct::report
