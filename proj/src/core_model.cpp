#include "reservekit/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "reservekit/regression.hpp"

namespace reservekit {

namespace {

void check_sample(const Sample& s, std::size_t dimension) {
    if (s.features.size() != dimension) {
        throw ValidationError("sample has " + std::to_string(s.features.size()) +
                              " features, dataset dimension is " + std::to_string(dimension));
    }
    if (!std::isfinite(s.bid) || s.bid < 0.0) {
        throw ValidationError("bids must be finite and non-negative");
    }
}

}  // namespace

Dataset::Dataset(std::size_t dimension, std::vector<Sample> samples)
    : dimension_(dimension), samples_(std::move(samples)) {
    for (const auto& s : samples_) check_sample(s, dimension_);
}

void Dataset::add(Sample sample) {
    check_sample(sample, dimension_);
    samples_.push_back(std::move(sample));
}

std::vector<double> Dataset::bids() const {
    std::vector<double> out(samples_.size());
    std::ranges::transform(samples_, out.begin(), &Sample::bid);
    return out;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out(dimension_);
    out.samples_.reserve(rows.size());
    for (std::size_t r : rows) out.samples_.push_back(samples_.at(r));
    return out;
}

EmpiricalStats empirical_stats(std::span<const double> bids) {
    if (bids.empty()) throw ValidationError("empty dataset");
    const double m = static_cast<double>(bids.size());
    double sum = 0.0;
    for (double b : bids) sum += b;
    const double mean = sum / m;
    // Two-pass variance; the one-pass form loses precision for bids far from 0.
    double ss = 0.0;
    for (double b : bids) ss += (b - mean) * (b - mean);
    return {mean, ss / m, bids.size()};
}

EmpiricalStats empirical_stats(const Dataset& dataset) {
    const auto bids = dataset.bids();
    return empirical_stats(bids);
}

PiecewiseReserve::PiecewiseReserve(std::vector<double> thresholds, std::vector<double> reserves,
                                   std::string predictor_id)
    : thresholds_(std::move(thresholds)),
      reserves_(std::move(reserves)),
      predictor_id_(std::move(predictor_id)) {
    if (reserves_.size() != thresholds_.size() + 1) {
        throw ValidationError("a piecewise reserve needs exactly one more reserve than thresholds");
    }
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        if (!std::isfinite(thresholds_[i])) throw ValidationError("thresholds must be finite");
        if (i > 0 && !(thresholds_[i - 1] < thresholds_[i])) {
            throw ValidationError("thresholds must be strictly increasing");
        }
    }
    for (double r : reserves_) {
        if (!std::isfinite(r) || r < 0.0) throw ValidationError("reserves must be finite and non-negative");
    }
}

std::size_t PiecewiseReserve::cell_of(double prediction) const noexcept {
    // Number of thresholds strictly below the prediction: (t_{j-1}, t_j].
    return static_cast<std::size_t>(std::ranges::lower_bound(thresholds_, prediction) -
                                    thresholds_.begin());
}

RevenueReport evaluate_prices(std::span<const double> prices, std::span<const double> bids) {
    if (bids.empty()) throw ValidationError("empty dataset");
    if (prices.size() != bids.size()) throw ValidationError("price and bid counts differ");
    double bid_sum = 0.0;
    double revenue_sum = 0.0;
    for (std::size_t i = 0; i < bids.size(); ++i) {
        bid_sum += bids[i];
        revenue_sum += posted_price_revenue(prices[i], bids[i]);
    }
    const double m = static_cast<double>(bids.size());
    RevenueReport report;
    report.count = bids.size();
    report.mean_bid = bid_sum / m;
    report.mean_revenue = revenue_sum / m;
    report.separation = report.mean_bid - report.mean_revenue;
    return report;
}

RevenueReport evaluate_reserve(const PiecewiseReserve& reserve,
                               std::span<const double> predictions,
                               std::span<const double> bids) {
    if (bids.empty()) throw ValidationError("empty dataset");
    if (predictions.size() != bids.size()) throw ValidationError("prediction and bid counts differ");

    const std::size_t k = reserve.cell_count();
    std::vector<std::vector<double>> cell_bids(k);
    std::vector<double> prices(bids.size());
    for (std::size_t i = 0; i < bids.size(); ++i) {
        const std::size_t c = reserve.cell_of(predictions[i]);
        prices[i] = reserve.reserves()[c];
        cell_bids[c].push_back(bids[i]);
    }

    RevenueReport report = evaluate_prices(prices, bids);
    report.per_cell.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        CellReport& cell = report.per_cell[c];
        cell.reserve = reserve.reserves()[c];
        cell.count = cell_bids[c].size();
        if (cell.count == 0) continue;
        const auto stats = empirical_stats(cell_bids[c]);
        cell.mean_bid = stats.mean_bid;
        cell.bid_std = std::sqrt(stats.variance);
        double rev = 0.0;
        for (double b : cell_bids[c]) rev += posted_price_revenue(cell.reserve, b);
        cell.mean_revenue = rev / static_cast<double>(cell.count);
    }
    return report;
}

RevenueReport evaluate_reserve(const PiecewiseReserve& reserve, const Predictor& predictor,
                               const Dataset& dataset) {
    if (predictor.dimension() != dataset.dimension()) {
        throw ValidationError("predictor dimension " + std::to_string(predictor.dimension()) +
                              " does not match dataset dimension " +
                              std::to_string(dataset.dimension()));
    }
    if (!reserve.predictor_id().empty() && reserve.predictor_id() != predictor.id()) {
        throw ValidationError("reserve was built for predictor " + reserve.predictor_id() +
                              ", got " + predictor.id());
    }
    const auto predictions = predictor.predict_all(dataset);
    const auto bids = dataset.bids();
    return evaluate_reserve(reserve, predictions, bids);
}

}  // namespace reservekit
