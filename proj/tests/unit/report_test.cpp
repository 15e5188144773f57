#include "doctest.h"

#include "cct/errors.hpp"
#include "cct/report/report.hpp"

#include <random>
#include <vector>

using namespace cct;
using namespace cct::report;

TEST_CASE("the cumulative distribution hits known fractions") {
    auto d = score_cdf({0, 0, 100});
    REQUIRE(d.cdf.size() == 6);
    CHECK(d.cdf[0] == std::pair<int, double>{0, 2.0 / 3.0});
    CHECK(d.cdf[1].second == doctest::Approx(2.0 / 3.0)); // nothing lands on 20
    CHECK(d.cdf[5] == std::pair<int, double>{100, 1.0});

    auto ladder = score_cdf({20, 40, 60, 80, 100});
    CHECK(ladder.cdf[0].second == doctest::Approx(0.0));
    CHECK(ladder.cdf[3].second == doctest::Approx(0.6)); // F(60) = 3/5
    CHECK(ladder.cdf[5].second == doctest::Approx(1.0));
}

TEST_CASE("an empty sample has no distribution") {
    CHECK_THROWS_AS(score_cdf({}), EmptyDistribution);
}

TEST_CASE("any sample yields a monotone distribution ending at one") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> scores;
        int n = 1 + int(rng() % 12);
        for (int i = 0; i < n; ++i) scores.push_back(pick(rng) * 20);
        auto d = score_cdf(scores);
        double prev = -1.0;
        for (const auto& [point, frac] : d.cdf) {
            CHECK(frac >= prev);
            CHECK(frac >= 0.0);
            CHECK(frac <= 1.0);
            prev = frac;
        }
        CHECK(d.cdf.back().second == doctest::Approx(1.0));
    }
}

TEST_CASE("the pool-size curve runs a prefix maximum over the first round") {
    refine::RunHistory h;
    h.iterations.push_back({{{"c0", 0, 0.01},
                             {"c1", 40, 0.01},
                             {"c2", 100, 0.02},
                             {"c3", 60, 0.01},
                             {"c4", 80, 0.01}},
                            100,
                            0.06});

    auto curve = pool_size_curve(h, 5);
    REQUIRE(curve.size() == 5);
    int expect_best[] = {0, 40, 100, 100, 100};
    double expect_usd[] = {0.01, 0.02, 0.04, 0.05, 0.06};
    for (int i = 0; i < 5; ++i) {
        CAPTURE(i);
        CHECK(curve[i].n == i + 1);
        CHECK(curve[i].best_score == expect_best[i]);
        CHECK(curve[i].cumulative_usd == doctest::Approx(expect_usd[i]));
    }
    for (size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].best_score >= curve[i - 1].best_score);
}

TEST_CASE("the curve refuses more points than the run generated") {
    refine::RunHistory h;
    h.iterations.push_back({{{"c0", 40, 0.0}}, 40, 0.0});
    CHECK_THROWS_AS(pool_size_curve(h, 2), RangeError);
    CHECK_THROWS_AS(pool_size_curve(h, 0), RangeError);
    CHECK_THROWS_AS(pool_size_curve(refine::RunHistory{}, 1), RangeError);
    CHECK_NOTHROW(pool_size_curve(h, 1));
}

TEST_CASE("tables carry plot-ready headers") {
    auto d = score_cdf({100});
    std::string dist = distribution_to_table(d);
    CHECK(dist.rfind("score cum_fraction\n", 0) == 0);
    CHECK(dist.find("\n100 1.0\n") != std::string::npos);
    CHECK(dist.find("\n0 0.0\n") != std::string::npos);

    refine::RunHistory h;
    h.iterations.push_back({{{"c0", 80, 0.018}}, 80, 0.018});
    std::string curve = curve_to_table(pool_size_curve(h, 1));
    CHECK(curve.rfind("pool_size best_score cumulative_usd\n", 0) == 0);
    CHECK(curve.find("\n1 80 0.018\n") != std::string::npos);
}
