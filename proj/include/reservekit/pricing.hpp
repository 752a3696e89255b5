#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reservekit/core_model.hpp"
#include "reservekit/regression.hpp"

namespace reservekit {

/// Equal-width buckets over [range_low, range_high]; values snap to bucket midpoints.
struct QuantizationConfig {
    std::size_t buckets = 1000;
    double range_low = 0.0;
    double range_high = 50.0;

    /// 1000 buckets over [0, 50], the setting used for the synthetic experiments.
    static QuantizationConfig auction_preset() { return {}; }

    void validate() const;
};

double quantize(double value, const QuantizationConfig& quant);
std::vector<double> quantize(std::span<const double> values, const QuantizationConfig& quant);

struct ReservePrice {
    double price = 0.0;
    double mean_revenue = 0.0;
};

/// Monopoly reserve of an empirical bid distribution: argmax_r r * #{b_i >= r}.
/// The optimum is always attained at a bid; ties go to the lowest price.
ReservePrice empirical_optimal_reserve(std::span<const double> bids);

/// Prices fixed cells: each cell of `thresholds` gets the empirical monopoly
/// reserve of the bids whose prediction falls in it. Cells without samples
/// take the reserve of the nearest non-empty cell (left on ties).
PiecewiseReserve price_cells(std::vector<double> thresholds, std::span<const double> predictions,
                             std::span<const double> bids, std::string predictor_id = {});

/// RIC-h from precomputed predictions. Splits the (optionally quantized)
/// prediction axis into at most k minimum-variance cells and prices each cell
/// at its empirical monopoly reserve.
PiecewiseReserve ric_h(std::span<const double> predictions, std::span<const double> bids, std::size_t k,
                       const std::optional<QuantizationConfig>& quant = std::nullopt,
                       std::string predictor_id = {});

PiecewiseReserve ric_h(const Dataset& train, const Predictor& predictor, std::size_t k,
                       const std::optional<QuantizationConfig>& quant = std::nullopt);

/// RIC-h for every k in [1, k_max] from a single partition pass; result [k-1] is for k.
std::vector<PiecewiseReserve> ric_h_all(std::span<const double> predictions, std::span<const double> bids,
                                        std::size_t k_max,
                                        const std::optional<QuantizationConfig>& quant = std::nullopt,
                                        std::string predictor_id = {});

/// r(x) = max(h(x) - offset, 0).
struct OffsetReserve {
    double offset = 0.0;
    std::string predictor_id;

    double price(double prediction) const noexcept {
        return prediction - offset > 0.0 ? prediction - offset : 0.0;
    }
};

std::vector<double> offset_prices(const OffsetReserve& rule, std::span<const double> predictions);

/// {h_i - b_i : h_i - b_i > 0} u {0}, sorted and deduplicated, each rounded up to the
/// smallest offset at which sample i still accepts. Empirical
/// revenue as a function of the offset only jumps up at these points.
std::vector<double> offset_candidates(std::span<const double> predictions, std::span<const double> bids);

/// Candidate offset with the largest empirical revenue on (predictions, bids);
/// ties go to the smallest offset.
double best_offset(std::span<const double> candidates, std::span<const double> predictions,
                   std::span<const double> bids);

OffsetReserve offset_reserve_fit(std::span<const double> predictions, std::span<const double> bids,
                                 std::string predictor_id = {});
OffsetReserve offset_reserve_fit(const Dataset& train, const Predictor& predictor);

/// eta^(2/3) for a squared loss eta^2.
double theoretical_offset(double eta_sq);

/// Text form:
///
///     predictor <id>            (omitted when the id is empty)
///     threshold t_1 ... t_{k-1}
///     reserve r_1 ... r_k
std::string to_text(const PiecewiseReserve& reserve);
PiecewiseReserve reserve_from_text(const std::string& text);

}  // namespace reservekit
