#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "reservekit/core_model.hpp"
#include "reservekit/partitioner.hpp"

namespace reservekit {
namespace {

// Pairwise definition, evaluated directly.
double pairwise_cost(const std::vector<double>& v) {
    double acc = 0.0;
    for (double a : v)
        for (double b : v) acc += (a - b) * (a - b);
    return std::sqrt(acc);
}

std::vector<double> random_sorted(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    std::ranges::sort(v);
    return v;
}

TEST(SegmentCost, Examples) {
    const std::vector<double> fives{5, 5, 5};
    EXPECT_EQ(SegmentCostTable(fives).cost(0, 3), 0.0);
    const std::vector<double> two{0, 1};
    EXPECT_NEAR(SegmentCostTable(two).cost(0, 2), std::sqrt(2.0), 1e-15);
    const std::vector<double> three{0, 1, 2};
    EXPECT_NEAR(SegmentCostTable(three).cost(0, 3), std::sqrt(12.0), 1e-14);
    EXPECT_EQ(SegmentCostTable(three).cost(1, 1), 0.0);
}

TEST(SegmentCost, Errors) {
    const std::vector<double> three{0, 1, 2};
    const SegmentCostTable t(three);
    EXPECT_THROW(t.cost(2, 1), ValidationError);
    EXPECT_THROW(t.cost(0, 4), ValidationError);
    const std::vector<double> unsorted{1, 0};
    EXPECT_THROW(SegmentCostTable{unsorted}, ValidationError);
}

TEST(SegmentCost, MatchesPairwiseSumAndStd) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        auto v = random_sorted(rng, 1 + rng() % 20);
        for (auto& x : v) x = 100.0 + 10.0 * x;  // away from zero
        const SegmentCostTable t(v);
        const std::size_t l = rng() % v.size();
        const std::size_t r = l + rng() % (v.size() - l + 1);
        const std::vector<double> seg(v.begin() + static_cast<long>(l), v.begin() + static_cast<long>(r));
        EXPECT_NEAR(t.cost(l, r), pairwise_cost(seg), 1e-9 * (1.0 + pairwise_cost(seg)));
        EXPECT_NEAR(t.weighted_std(l, r) * std::sqrt(2.0), t.cost(l, r), 1e-12);
    }
}

TEST(OptimalPartition, TwoPointMasses) {
    const std::vector<double> v{0, 0, 1, 1};
    const auto p = optimal_k_partition(v, 2);
    EXPECT_EQ(p.objective, 0.0);
    EXPECT_EQ(p.cut_indices, (std::vector<std::size_t>{0, 2, 4}));
    ASSERT_EQ(p.thresholds.size(), 1u);
    EXPECT_DOUBLE_EQ(p.thresholds[0], 0.5);
}

TEST(OptimalPartition, IsolatesOutlier) {
    const std::vector<double> v{0, 0.1, 5};
    const auto p = optimal_k_partition(v, 2);
    EXPECT_EQ(p.cut_indices, (std::vector<std::size_t>{0, 2, 3}));
    EXPECT_NEAR(p.objective, std::sqrt(0.02), 1e-12);
    // The alternative split {0} | {0.1, 5}.
    EXPECT_NEAR(SegmentCostTable(v).cost(1, 3), std::sqrt(48.02), 1e-12);
}

TEST(OptimalPartition, EachPointAlone) {
    const std::vector<double> v{0, 1, 2, 3};
    const auto p = optimal_k_partition(v, 4);
    EXPECT_EQ(p.objective, 0.0);
    EXPECT_EQ(p.segment_count(), 4u);
}

TEST(OptimalPartition, TiesAreNeverSplit) {
    const std::vector<double> v{1, 1, 1, 2};
    const auto p = optimal_k_partition(v, 3);
    for (std::size_t c : p.cut_indices) EXPECT_TRUE(c == 0 || c == 3 || c == 4);
    EXPECT_EQ(p.segment_count(), 2u);
    EXPECT_EQ(p.objective, 0.0);
}

TEST(OptimalPartition, ExtraCellsCollapse) {
    const std::vector<double> v{0, 1};
    const auto p = optimal_k_partition(v, 5);
    EXPECT_EQ(p.segment_count(), 2u);
    EXPECT_EQ(p.cut_indices.size(), 6u);
    EXPECT_EQ(p.objective, 0.0);
}

TEST(OptimalPartition, Errors) {
    const std::vector<double> unsorted{0, 2, 1};
    EXPECT_THROW(optimal_k_partition(unsorted, 2), ValidationError);
    const std::vector<double> none;
    EXPECT_THROW(optimal_k_partition(none, 2), ValidationError);
    const std::vector<double> one{1};
    EXPECT_THROW(optimal_k_partition(one, 0), ValidationError);
}

TEST(BruteForce, SingleSegmentAndSmallCases) {
    const std::vector<double> v{0, 0.3, 0.4, 2};
    EXPECT_DOUBLE_EQ(brute_force_partition(v, 1).objective, SegmentCostTable(v).cost(0, 4));
    const std::vector<double> w{0, 0.1, 5};
    EXPECT_DOUBLE_EQ(brute_force_partition(w, 2).objective, optimal_k_partition(w, 2).objective);
    const std::vector<double> x{1, 2, 4, 8};
    EXPECT_DOUBLE_EQ(brute_force_partition(x, 3).objective, optimal_k_partition(x, 3).objective);
}

TEST(BruteForce, RefusesLargeInstances) {
    const std::vector<double> v(16, 1.0);
    try {
        brute_force_partition(v, 2);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "oracle limited to small instances");
    }
}

TEST(OptimalPartition, MatchesBruteForceOnRandomInstances) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto v = random_sorted(rng, 1 + rng() % 12);
        const std::size_t k = 1 + rng() % 4;
        const double dp = optimal_k_partition(v, k).objective;
        const double brute = brute_force_partition(v, k).objective;
        EXPECT_NEAR(dp, brute, 1e-12 * std::max(1.0, brute)) << "trial " << trial;
    }
}

TEST(OptimalPartition, ParallelKernelMatchesSerialReference) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto v = random_sorted(rng, 50 + rng() % 400);
        // Inject ties.
        for (std::size_t i = 1; i < v.size(); i += 7) v[i] = v[i - 1];
        const std::size_t k_max = 1 + rng() % 12;
        const auto par = optimal_partitions(v, k_max);
        const auto ser = optimal_partitions_serial(v, k_max);
        ASSERT_EQ(par.size(), ser.size());
        for (std::size_t k = 0; k < k_max; ++k) {
            EXPECT_EQ(par[k].objective, ser[k].objective);
            EXPECT_EQ(par[k].cut_indices, ser[k].cut_indices);
            EXPECT_EQ(par[k].thresholds, ser[k].thresholds);
        }
    }
}

TEST(OptimalPartition, StructuralProperties) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto v = random_sorted(rng, 1 + rng() % 30);
        const std::size_t n = v.size();
        const auto all = optimal_partitions(v, n + 1);

        for (std::size_t k = 1; k < all.size(); ++k) EXPECT_LE(all[k].objective, all[k - 1].objective);
        EXPECT_NEAR(all[n - 1].objective, 0.0, 1e-12);

        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(n);
        EXPECT_NEAR(all[0].objective, std::sqrt(2.0) * static_cast<double>(n) * std::sqrt(var), 1e-12);

        for (const auto& p : all) {
            EXPECT_TRUE(std::ranges::is_sorted(p.cut_indices));
            EXPECT_GE(p.objective, 0.0);
            double sum = 0.0;
            const SegmentCostTable t(v);
            for (std::size_t j = 1; j < p.cut_indices.size(); ++j) sum += t.cost(p.cut_indices[j - 1], p.cut_indices[j]);
            EXPECT_NEAR(sum, p.objective, 1e-12);
        }

        const std::size_t k = 1 + rng() % 5;
        auto shifted = v;
        auto scaled = v;
        for (auto& x : shifted) x += 3.7;
        for (auto& x : scaled) x *= 2.5;
        const double base = all[std::min(k, all.size()) - 1].objective;
        EXPECT_NEAR(optimal_k_partition(shifted, k).objective, base, 1e-10);
        EXPECT_NEAR(optimal_k_partition(scaled, k).objective, 2.5 * base, 1e-10);
    }
}

TEST(OptimalPartition, ThresholdsReproduceIndexPartition) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = random_sorted(rng, 2 + rng() % 60);
        for (auto& x : v) x = std::round(x * 20.0) / 20.0;  // plenty of ties
        const std::size_t k = 1 + rng() % 6;
        const auto p = optimal_k_partition(v, k);
        const PiecewiseReserve cells(p.thresholds, std::vector<double>(p.thresholds.size() + 1, 0.0));

        std::vector<std::size_t> boundaries;
        for (std::size_t c : p.cut_indices)
            if (boundaries.empty() || boundaries.back() != c) boundaries.push_back(c);
        // Non-empty segment s (in order) must map to cell s.
        std::size_t cell = 0;
        for (std::size_t s = 1; s < boundaries.size(); ++s) {
            for (std::size_t i = boundaries[s - 1]; i < boundaries[s]; ++i) EXPECT_EQ(cells.cell_of(v[i]), cell);
            ++cell;
        }
    }
}

}  // namespace
}  // namespace reservekit
