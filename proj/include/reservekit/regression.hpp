#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "reservekit/core_model.hpp"

namespace reservekit {

enum class PredictorKind { linear, constant, external_table };

std::string to_string(PredictorKind kind);

/// Bid predictor h: features -> predicted bid.
///
/// Linear predictors compute w.x + w0. Constant predictors ignore the
/// features. External-table predictors replay predictions produced elsewhere,
/// keyed by a hash of the exact feature vector; looking up an unseen vector
/// is a validation error.
///
/// Text format, one value per line:
///
///     linear | constant | external-table
///     d
///     linear:          w_0 ... w_{d-1}, then the intercept
///     constant:        the value
///     external-table:  entry count, then "<hex hash> <value>" lines
class Predictor {
public:
    static Predictor linear(std::vector<double> weights, double intercept);
    static Predictor constant(std::size_t dimension, double value);
    static Predictor table(std::size_t dimension, std::map<std::uint64_t, double> entries);
    /// Table predictor replaying `predictions[i]` for `dataset[i]`.
    static Predictor table(const Dataset& dataset, std::span<const double> predictions);

    PredictorKind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double intercept() const noexcept { return intercept_; }

    double predict(std::span<const double> features) const;
    std::vector<double> predict_all(const Dataset& dataset) const;

    /// Stable fingerprint of the serialized form; reserves record it.
    std::string id() const;

    std::string to_text() const;
    static Predictor from_text(const std::string& text);

    friend bool operator==(const Predictor&, const Predictor&) = default;

private:
    Predictor() = default;

    PredictorKind kind_ = PredictorKind::constant;
    std::size_t dimension_ = 0;
    std::vector<double> weights_;
    double intercept_ = 0.0;
    std::map<std::uint64_t, double> table_;
};

/// FNV-1a over the IEEE bit patterns of the features (-0.0 folded onto 0.0).
std::uint64_t feature_hash(std::span<const double> features) noexcept;

inline constexpr double kDefaultRidge = 1e-8;

/// Minimizes sum (w.x_i + w0 - b_i)^2 + ridge * |w|^2 with an unpenalized
/// intercept. Throws when the normal matrix is singular.
Predictor fit_linear_least_squares(const Dataset& train, double ridge = kDefaultRidge);

struct LossReport {
    double squared_loss = 0.0;
    double rmse = 0.0;
};

LossReport squared_loss(std::span<const double> predictions, std::span<const double> bids);
LossReport squared_loss(const Predictor& predictor, const Dataset& dataset);

}  // namespace reservekit
