#include "reservekit/datagen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace reservekit {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t s = stream;
    std::uint64_t t = seed ^ splitmix64(s);
    return splitmix64(t);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
    for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() noexcept {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256::normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t stream_id(StreamRole role, std::size_t sample) noexcept {
    return (static_cast<std::uint64_t>(role) << 40) | static_cast<std::uint64_t>(sample);
}

std::string to_string(Scenario s) { return s == Scenario::linear ? "linear" : "bimodal"; }

Scenario parse_scenario(const std::string& name) {
    if (name == "linear") return Scenario::linear;
    if (name == "bimodal") return Scenario::bimodal;
    throw ValidationError("unknown scenario '" + name + "' (expected linear or bimodal)");
}

void ScenarioConfig::validate() const {
    if (n < 1) throw ValidationError("n must be at least 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ValidationError("noise sigma must be >= 0");
}

FeatureMatrix gen_features(const ScenarioConfig& config) {
    config.validate();
    FeatureMatrix x{config.n, config.d, std::vector<double>(config.n * config.d)};
    const auto n = static_cast<std::ptrdiff_t>(config.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Xoshiro256 rng(mix_seed(config.seed, stream_id(StreamRole::features, static_cast<std::size_t>(i))));
        double* row = x.data.data() + static_cast<std::size_t>(i) * config.d;
        for (std::size_t j = 0; j < config.d; ++j) {
            const double mu = rng.uniform() < FeatureMixture::weight ? FeatureMixture::mu_low
                                                                     : FeatureMixture::mu_high;
            row[j] = std::exp(rng.normal(mu, FeatureMixture::sigma));
        }
    }
    return x;
}

namespace {

double noise(const ScenarioConfig& config, StreamRole role, std::size_t i) {
    Xoshiro256 rng(mix_seed(config.seed, stream_id(role, i)));
    return rng.normal(0.0, config.noise_sigma);
}

double shifted_sum(const FeatureMatrix& features, const ScenarioConfig& config, std::size_t i) {
    double s = 0.0;
    for (double v : features.row(i)) s += v;
    return std::max(s + noise(config, StreamRole::beta, i), 0.0);
}

}  // namespace

std::vector<double> gen_linear_bids(const FeatureMatrix& features, const ScenarioConfig& config) {
    config.validate();
    std::vector<double> bids(features.rows);
    const auto n = static_cast<std::ptrdiff_t>(features.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        bids[static_cast<std::size_t>(i)] = shifted_sum(features, config, static_cast<std::size_t>(i));
    }
    return bids;
}

std::vector<double> gen_bimodal_bids(const FeatureMatrix& features, const ScenarioConfig& config) {
    config.validate();
    std::vector<double> bids(features.rows);
    const auto n = static_cast<std::ptrdiff_t>(features.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(i);
        const double s = shifted_sum(features, config, row);
        bids[row] = s > kBimodalSwitch
                        ? std::max(kBimodalHighBid + noise(config, StreamRole::alpha, row), 0.0)
                        : s;
    }
    return bids;
}

Dataset generate_dataset(const ScenarioConfig& config) {
    const auto x = gen_features(config);
    const auto bids = config.scenario == Scenario::linear ? gen_linear_bids(x, config)
                                                          : gen_bimodal_bids(x, config);
    std::vector<Sample> samples(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        const auto row = x.row(i);
        samples[i] = {{row.begin(), row.end()}, bids[i]};
    }
    return Dataset(config.d, std::move(samples));
}

}  // namespace reservekit
