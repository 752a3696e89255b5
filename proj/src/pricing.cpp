#include "reservekit/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "reservekit/partitioner.hpp"
#include "reservekit/text.hpp"

namespace reservekit {

void QuantizationConfig::validate() const {
    if (buckets == 0) throw ValidationError("quantization needs at least one bucket");
    if (!(range_low < range_high) || !std::isfinite(range_low) || !std::isfinite(range_high)) {
        throw ValidationError("quantization range must satisfy low < high");
    }
}

double quantize(double value, const QuantizationConfig& quant) {
    const double width = quant.range_high - quant.range_low;
    const double b = static_cast<double>(quant.buckets);
    const double clamped = std::clamp(value, quant.range_low, quant.range_high);
    // Scale before dividing so exact bucket edges land on exact integers.
    double index = std::floor((clamped - quant.range_low) * b / width);
    index = std::clamp(index, 0.0, b - 1.0);
    return quant.range_low + (index + 0.5) * width / b;
}

std::vector<double> quantize(std::span<const double> values, const QuantizationConfig& quant) {
    quant.validate();
    std::vector<double> out(values.size());
    std::ranges::transform(values, out.begin(), [&](double v) { return quantize(v, quant); });
    return out;
}

ReservePrice empirical_optimal_reserve(std::span<const double> bids) {
    if (bids.empty()) throw ValidationError("cannot price an empty bid list");
    std::vector<double> sorted(bids.begin(), bids.end());
    std::ranges::sort(sorted);
    const std::size_t m = sorted.size();

    double best_total = -1.0;
    double best_price = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        // Ascending sweep with a strict comparison keeps the lowest price on ties.
        const double total = sorted[i] * static_cast<double>(m - i);
        if (total > best_total) {
            best_total = total;
            best_price = sorted[i];
        }
    }
    return {best_price, best_total / static_cast<double>(m)};
}

namespace {

void check_inputs(std::span<const double> predictions, std::span<const double> bids) {
    if (bids.empty()) throw ValidationError("empty dataset");
    if (predictions.size() != bids.size()) throw ValidationError("prediction and bid counts differ");
    for (double p : predictions) {
        if (!std::isfinite(p)) throw ValidationError("predictions must be finite");
    }
}

// Empty cells take the reserve of the nearest non-empty cell, measured between
// cell centres; unbounded end cells use their one finite edge as centre.
void fill_empty_cells(const std::vector<double>& thresholds, const std::vector<std::size_t>& counts,
                      std::vector<double>& reserves) {
    const std::size_t k = reserves.size();
    if (k == 1) return;
    auto centre = [&](std::size_t j) {
        if (j == 0) return thresholds.front();
        if (j == k - 1) return thresholds.back();
        return thresholds[j - 1] + (thresholds[j] - thresholds[j - 1]) / 2.0;
    };
    const std::vector<double> original = reserves;
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] > 0) continue;
        std::optional<std::size_t> left, right;
        for (std::size_t i = j; i-- > 0;) {
            if (counts[i] > 0) { left = i; break; }
        }
        for (std::size_t i = j + 1; i < k; ++i) {
            if (counts[i] > 0) { right = i; break; }
        }
        if (left && right) {
            const double dl = centre(j) - centre(*left);
            const double dr = centre(*right) - centre(j);
            reserves[j] = original[dr < dl ? *right : *left];
        } else if (left) {
            reserves[j] = original[*left];
        } else if (right) {
            reserves[j] = original[*right];
        }
    }
}

}  // namespace

PiecewiseReserve price_cells(std::vector<double> thresholds, std::span<const double> predictions,
                             std::span<const double> bids, std::string predictor_id) {
    check_inputs(predictions, bids);
    const std::size_t k = thresholds.size() + 1;
    const PiecewiseReserve cells(thresholds, std::vector<double>(k, 0.0));
    std::vector<std::vector<double>> cell_bids(k);
    for (std::size_t i = 0; i < bids.size(); ++i) cell_bids[cells.cell_of(predictions[i])].push_back(bids[i]);

    std::vector<double> reserves(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
        counts[j] = cell_bids[j].size();
        if (counts[j] > 0) reserves[j] = empirical_optimal_reserve(cell_bids[j]).price;
    }
    fill_empty_cells(thresholds, counts, reserves);
    return PiecewiseReserve(std::move(thresholds), std::move(reserves), std::move(predictor_id));
}

std::vector<PiecewiseReserve> ric_h_all(std::span<const double> predictions, std::span<const double> bids,
                                        std::size_t k_max, const std::optional<QuantizationConfig>& quant,
                                        std::string predictor_id) {
    check_inputs(predictions, bids);
    if (k_max == 0) throw ValidationError("k must be at least 1");

    std::vector<double> axis = quant ? quantize(predictions, *quant)
                                     : std::vector<double>(predictions.begin(), predictions.end());
    std::ranges::sort(axis);
    const auto partitions = optimal_partitions(axis, k_max);

    std::vector<PiecewiseReserve> out;
    out.reserve(k_max);
    for (const auto& part : partitions) {
        out.push_back(price_cells(part.thresholds, predictions, bids, predictor_id));
    }
    return out;
}

PiecewiseReserve ric_h(std::span<const double> predictions, std::span<const double> bids, std::size_t k,
                       const std::optional<QuantizationConfig>& quant, std::string predictor_id) {
    auto all = ric_h_all(predictions, bids, k, quant, std::move(predictor_id));
    return std::move(all.back());
}

PiecewiseReserve ric_h(const Dataset& train, const Predictor& predictor, std::size_t k,
                       const std::optional<QuantizationConfig>& quant) {
    if (train.empty()) throw ValidationError("empty dataset");
    const auto predictions = predictor.predict_all(train);
    const auto bids = train.bids();
    return ric_h(predictions, bids, k, quant, predictor.id());
}

std::vector<double> offset_prices(const OffsetReserve& rule, std::span<const double> predictions) {
    std::vector<double> out(predictions.size());
    std::ranges::transform(predictions, out.begin(), [&](double h) { return rule.price(h); });
    return out;
}

std::vector<double> offset_candidates(std::span<const double> predictions, std::span<const double> bids) {
    check_inputs(predictions, bids);
    std::vector<double> out{0.0};
    for (std::size_t i = 0; i < bids.size(); ++i) {
        double gap = predictions[i] - bids[i];
        if (!(gap > 0.0)) continue;
        // Rounding can leave h - (h - b) just above b; step up until the bid clears.
        while (predictions[i] - gap > bids[i]) gap = std::nextafter(gap, INFINITY);
        out.push_back(gap);
    }
    std::ranges::sort(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double best_offset(std::span<const double> candidates, std::span<const double> predictions,
                   std::span<const double> bids) {
    check_inputs(predictions, bids);
    std::vector<double> ts;
    for (double t : candidates) {
        if (std::isfinite(t) && t >= 0.0) ts.push_back(t);
    }
    if (ts.empty()) throw ValidationError("no admissible offset candidates");
    std::ranges::sort(ts);
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const std::size_t c = ts.size();

    // Sample i pays h_i - t exactly for candidates in [start_i, end_i): the
    // acceptance test b >= h - t is monotone in t, and the price hits zero at t >= h.
    std::vector<double> sum_delta(c + 1, 0.0);
    std::vector<long> count_delta(c + 1, 0);
    for (std::size_t i = 0; i < bids.size(); ++i) {
        const double h = predictions[i];
        const double b = bids[i];
        const auto start = std::ranges::partition_point(ts, [&](double t) { return !(b >= h - t); }) - ts.begin();
        const auto end = std::ranges::partition_point(ts, [&](double t) { return t < h; }) - ts.begin();
        if (start >= end) continue;
        sum_delta[static_cast<std::size_t>(start)] += h;
        sum_delta[static_cast<std::size_t>(end)] -= h;
        count_delta[static_cast<std::size_t>(start)] += 1;
        count_delta[static_cast<std::size_t>(end)] -= 1;
    }

    double best_revenue = -1.0;
    double best_t = ts.front();
    double sum_h = 0.0;
    long active = 0;
    for (std::size_t j = 0; j < c; ++j) {
        sum_h += sum_delta[j];
        active += count_delta[j];
        const double revenue = active > 0 ? sum_h - static_cast<double>(active) * ts[j] : 0.0;
        if (revenue > best_revenue) {
            best_revenue = revenue;
            best_t = ts[j];
        }
    }
    return best_t;
}

OffsetReserve offset_reserve_fit(std::span<const double> predictions, std::span<const double> bids,
                                 std::string predictor_id) {
    const auto candidates = offset_candidates(predictions, bids);
    return {best_offset(candidates, predictions, bids), std::move(predictor_id)};
}

OffsetReserve offset_reserve_fit(const Dataset& train, const Predictor& predictor) {
    if (train.empty()) throw ValidationError("empty dataset");
    const auto predictions = predictor.predict_all(train);
    const auto bids = train.bids();
    return offset_reserve_fit(predictions, bids, predictor.id());
}

double theoretical_offset(double eta_sq) {
    if (!(eta_sq >= 0.0)) throw ValidationError("squared loss must be non-negative");
    return std::cbrt(eta_sq);
}

std::string to_text(const PiecewiseReserve& reserve) {
    std::ostringstream out;
    if (!reserve.predictor_id().empty()) out << "predictor " << reserve.predictor_id() << '\n';
    out << "threshold";
    for (double t : reserve.thresholds()) out << ' ' << format_double(t);
    out << "\nreserve";
    for (double r : reserve.reserves()) out << ' ' << format_double(r);
    out << '\n';
    return out.str();
}

PiecewiseReserve reserve_from_text(const std::string& text) {
    std::string id;
    std::optional<std::vector<double>> thresholds, reserves;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        auto fields = split(line, ' ');
        std::erase_if(fields, [](std::string_view f) { return f.empty(); });
        const auto key = fields.front();
        if (key == "predictor") {
            if (fields.size() != 2) throw ValidationError("reserve file line " + std::to_string(line_no) + ": bad predictor id");
            id = std::string(fields[1]);
            continue;
        }
        std::vector<double> values;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto v = parse_double(fields[i]);
            if (!v) throw ValidationError("reserve file line " + std::to_string(line_no) + ": bad number");
            values.push_back(*v);
        }
        if (key == "threshold" && !thresholds) {
            thresholds = std::move(values);
        } else if (key == "reserve" && !reserves) {
            reserves = std::move(values);
        } else {
            throw ValidationError("reserve file line " + std::to_string(line_no) + ": unexpected '" +
                                  std::string(key) + "'");
        }
    }
    if (!thresholds || !reserves) throw ValidationError("reserve file needs a threshold line and a reserve line");
    return PiecewiseReserve(std::move(*thresholds), std::move(*reserves), std::move(id));
}

}  // namespace reservekit
