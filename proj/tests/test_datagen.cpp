#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "reservekit/datagen.hpp"

namespace reservekit {
namespace {

// Lognormal mixture moments: E[e^X] = e^{mu + s^2/2}, E[e^{2X}] = e^{2mu + 2s^2}.
constexpr double kFeatureMean = 2.1066826509924286;
constexpr double kFeatureVariance = 2.4774958237093134;

TEST(Rng, SplitmixReferenceValues) {
    // Reference outputs of splitmix64 seeded with 0.
    std::uint64_t state = 0;
    EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(splitmix64(state), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(splitmix64(state), 0x06c45d188009454fULL);
}

TEST(Rng, UniformAndNormalMoments) {
    Xoshiro256 rng(123);
    const int n = 200000;
    double su = 0.0, sn = 0.0, sn2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = rng.normal();
        ASSERT_TRUE(std::isfinite(z));
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n) * 1.5);
    EXPECT_NEAR(sn / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(sn2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Rng, SubstreamsDiffer) {
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
    EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
    EXPECT_NE(stream_id(StreamRole::features, 0), stream_id(StreamRole::beta, 0));
}

TEST(Scenario, NamesAndValidation) {
    EXPECT_EQ(parse_scenario("linear"), Scenario::linear);
    EXPECT_EQ(parse_scenario(to_string(Scenario::bimodal)), Scenario::bimodal);
    EXPECT_THROW(parse_scenario("cubic"), ValidationError);
    ScenarioConfig bad;
    bad.noise_sigma = -1.0;
    EXPECT_THROW(generate_dataset(bad), ValidationError);
    bad = {};
    bad.n = 0;
    EXPECT_THROW(generate_dataset(bad), ValidationError);
}

TEST(Generate, DeterministicAndShaped) {
    ScenarioConfig cfg;
    cfg.n = 500;
    cfg.seed = 7;
    const auto a = generate_dataset(cfg);
    const auto b = generate_dataset(cfg);
    ASSERT_EQ(a.size(), 500u);
    EXPECT_EQ(a.dimension(), 10u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].features, b[i].features);
        EXPECT_EQ(a[i].bid, b[i].bid);
        for (double x : a[i].features) EXPECT_GT(x, 0.0);
        EXPECT_GE(a[i].bid, 0.0);
    }
    cfg.seed = 8;
    EXPECT_NE(generate_dataset(cfg)[0].features, a[0].features);
}

TEST(Generate, PrefixIsStableInN) {
    ScenarioConfig small;
    small.n = 50;
    ScenarioConfig large = small;
    large.n = 400;
    const auto a = generate_dataset(small);
    const auto b = generate_dataset(large);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].features, b[i].features);
        EXPECT_EQ(a[i].bid, b[i].bid);
    }
}

TEST(Generate, NoiselessLinearBidIsFeatureSum) {
    ScenarioConfig cfg;
    cfg.n = 200;
    cfg.noise_sigma = 0.0;
    const auto data = generate_dataset(cfg);
    for (const auto& s : data.samples()) {
        double sum = 0.0;
        for (double x : s.features) sum += x;
        EXPECT_EQ(s.bid, sum);
    }
}

TEST(Generate, BimodalBranches) {
    FeatureMatrix x{2, 2, {20.0, 15.0, 5.0, 7.0}};
    ScenarioConfig cfg;
    cfg.n = 2;
    cfg.d = 2;
    cfg.noise_sigma = 0.0;
    EXPECT_EQ(gen_bimodal_bids(x, cfg), (std::vector<double>{40.0, 12.0}));
    EXPECT_EQ(gen_linear_bids(x, cfg), (std::vector<double>{35.0, 12.0}));
}

TEST(Generate, FeatureMomentsMatchMixture) {
    ScenarioConfig cfg;
    cfg.n = 100000;
    cfg.d = 1;
    const auto x = gen_features(cfg);
    double sum = 0.0, sq = 0.0;
    for (double v : x.data) sum += v;
    const double mean = sum / static_cast<double>(cfg.n);
    for (double v : x.data) sq += (v - mean) * (v - mean);
    const double var = sq / static_cast<double>(cfg.n);
    const double se_mean = std::sqrt(kFeatureVariance / static_cast<double>(cfg.n));
    EXPECT_NEAR(mean, kFeatureMean, 3.0 * se_mean);
    // Var of the sample variance needs the fourth moment; 4% is several standard errors.
    EXPECT_NEAR(var, kFeatureVariance, 0.04 * kFeatureVariance);
}

TEST(Generate, LinearMeanBid) {
    ScenarioConfig cfg;
    cfg.n = 100000;
    const auto data = generate_dataset(cfg);
    double sum = 0.0;
    for (const auto& s : data.samples()) sum += s.bid;
    EXPECT_NEAR(sum / static_cast<double>(cfg.n), 10.0 * kFeatureMean, 0.1);
}

TEST(Generate, BimodalSwitchFrequencyAndGap) {
    ScenarioConfig cfg;
    cfg.n = 100000;
    cfg.scenario = Scenario::bimodal;
    const auto data = generate_dataset(cfg);
    std::size_t high = 0;
    for (const auto& s : data.samples()) {
        EXPECT_FALSE(s.bid > 30.1 && s.bid < 39.9) << s.bid;
        if (s.bid > 35.0) ++high;
    }

    // Independent Monte Carlo estimate of P(sum of 10 features > 30).
    std::mt19937_64 rng(99);
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> z(0.0, 0.5);
    const int trials = 400000;
    int over = 0;
    for (int t = 0; t < trials; ++t) {
        double s = 0.0;
        for (int j = 0; j < 10; ++j) s += std::exp((coin(rng) ? 0.0 : 1.0) + z(rng));
        if (s > 30.0) ++over;
    }
    const double p = static_cast<double>(over) / trials;
    const double observed = static_cast<double>(high) / static_cast<double>(cfg.n);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(cfg.n)) + std::sqrt(p * (1 - p) / trials);
    EXPECT_GT(p, 0.01);
    EXPECT_NEAR(observed, p, 4.0 * se);
}

}  // namespace
}  // namespace reservekit
