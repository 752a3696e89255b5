#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reservekit {

/// Raised for any violated precondition or malformed input. The CLI maps it
/// to exit code 2; every other exception is treated as an internal error.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Sample {
    std::vector<double> features;
    double bid = 0.0;
};

/// An ordered collection of (features, bid) pairs sharing one feature
/// dimension. Bids are non-negative and finite.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t dimension) : dimension_(dimension) {}
    Dataset(std::size_t dimension, std::vector<Sample> samples);

    void add(Sample sample);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<Sample>& samples() const noexcept { return samples_; }

    std::vector<double> bids() const;

    /// Samples at the given positions, in that order.
    Dataset subset(std::span<const std::size_t> rows) const;

private:
    std::size_t dimension_ = 0;
    std::vector<Sample> samples_;
};

struct EmpiricalStats {
    double mean_bid = 0.0;
    double variance = 0.0;  // population convention, 1/m
    std::size_t count = 0;
};

EmpiricalStats empirical_stats(std::span<const double> bids);
EmpiricalStats empirical_stats(const Dataset& dataset);

/// Piecewise-constant reserve on the prediction axis. Cell j covers the
/// half-open interval (t_{j-1}, t_j] with t_0 = -inf and t_k = +inf.
class PiecewiseReserve {
public:
    PiecewiseReserve() : reserves_{0.0} {}
    PiecewiseReserve(std::vector<double> thresholds, std::vector<double> reserves,
                     std::string predictor_id = {});

    std::size_t cell_count() const noexcept { return reserves_.size(); }
    std::size_t cell_of(double prediction) const noexcept;
    double price(double prediction) const noexcept { return reserves_[cell_of(prediction)]; }

    const std::vector<double>& thresholds() const noexcept { return thresholds_; }
    const std::vector<double>& reserves() const noexcept { return reserves_; }
    const std::string& predictor_id() const noexcept { return predictor_id_; }

    friend bool operator==(const PiecewiseReserve&, const PiecewiseReserve&) = default;

private:
    std::vector<double> thresholds_;
    std::vector<double> reserves_;
    std::string predictor_id_;
};

struct CellReport {
    std::size_t count = 0;
    double mean_bid = 0.0;
    double reserve = 0.0;
    double mean_revenue = 0.0;  // averaged over the cell's own samples
    double bid_std = 0.0;
};

struct RevenueReport {
    double mean_bid = 0.0;
    double mean_revenue = 0.0;
    double separation = 0.0;
    std::size_t count = 0;
    std::vector<CellReport> per_cell;
};

/// Rev(p, b) = p * 1{b >= p}.
inline double posted_price_revenue(double price, double bid) noexcept {
    return bid >= price ? price : 0.0;
}

/// Aggregate revenue of an arbitrary per-sample price vector.
RevenueReport evaluate_prices(std::span<const double> prices, std::span<const double> bids);

/// Revenue of a piecewise reserve given precomputed predictions.
RevenueReport evaluate_reserve(const PiecewiseReserve& reserve,
                               std::span<const double> predictions,
                               std::span<const double> bids);

class Predictor;

/// Revenue of a piecewise reserve on a dataset. Fails when the predictor's
/// dimension differs from the dataset's, or when the reserve records a
/// different predictor id.
RevenueReport evaluate_reserve(const PiecewiseReserve& reserve, const Predictor& predictor,
                               const Dataset& dataset);

}  // namespace reservekit
