#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "reservekit/core_model.hpp"

namespace reservekit {

/// splitmix64 step (Vigna): state += 0x9e3779b97f4a7c15, then the
/// 30/27/31-shift finalizer with multipliers 0xbf58476d1ce4e5b9 and
/// 0x94d049bb133111eb.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed of substream `stream` under `seed`: two splitmix64 finalizations,
/// mix(seed, stream) = sm(seed ^ sm(stream)).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// xoshiro256** with its state filled from splitmix64(seed).
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    /// Top 53 bits scaled into [0, 1).
    double uniform() noexcept;
    /// Box-Muller, cosine branch only: exactly two uniforms per draw.
    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

private:
    std::uint64_t s_[4];
};

/// Draw roles; sample i of role r uses the stream (r << 40) | i.
enum class StreamRole : std::uint64_t { features = 1, beta = 2, alpha = 3 };

std::uint64_t stream_id(StreamRole role, std::size_t sample) noexcept;

enum class Scenario { linear, bimodal };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& name);

struct ScenarioConfig {
    std::size_t n = 4000;
    std::size_t d = 10;
    double noise_sigma = 0.01;
    Scenario scenario = Scenario::linear;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Lognormal mixture used for every feature coordinate: with probability 1/2
/// exp(N(0, 0.5^2)), otherwise exp(N(1, 0.5^2)).
struct FeatureMixture {
    static constexpr double weight = 0.5;
    static constexpr double mu_low = 0.0;
    static constexpr double mu_high = 1.0;
    static constexpr double sigma = 0.5;
};

struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

FeatureMatrix gen_features(const ScenarioConfig& config);

/// b_i = max(x_i . 1 + beta_i, 0), beta_i ~ N(0, sigma^2).
std::vector<double> gen_linear_bids(const FeatureMatrix& features, const ScenarioConfig& config);

/// s_i = max(x_i . 1 + beta_i, 0); b_i = 40 + alpha_i if s_i > 30, else s_i.
/// alpha_i is an independent draw with beta's distribution. Bids are floored at
/// 0 in the (sigma-dependent, astronomically rare) case 40 + alpha_i < 0.
std::vector<double> gen_bimodal_bids(const FeatureMatrix& features, const ScenarioConfig& config);

inline constexpr double kBimodalSwitch = 30.0;
inline constexpr double kBimodalHighBid = 40.0;

Dataset generate_dataset(const ScenarioConfig& config);

}  // namespace reservekit
