#include "reservekit/partitioner.hpp"

#include <algorithm>
#include <string>

#include "partitioner_detail.hpp"
#include "reservekit/core_model.hpp"

namespace reservekit {

namespace {

void check_sorted(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw ValidationError("values must be finite");
        if (i > 0 && values[i] < values[i - 1]) {
            throw ValidationError("values must be sorted ascending (position " + std::to_string(i) + ")");
        }
    }
}

}  // namespace

SegmentCostTable::SegmentCostTable(std::span<const double> sorted_values)
    : prefix_sum_(sorted_values.size() + 1, 0.0),
      prefix_sq_(sorted_values.size() + 1, 0.0),
      run_start_(sorted_values.size(), 0) {
    check_sorted(sorted_values);
    double shift = 0.0;
    for (double v : sorted_values) shift += v;
    if (!sorted_values.empty()) shift /= static_cast<double>(sorted_values.size());
    for (std::size_t i = 0; i < sorted_values.size(); ++i) {
        const double y = sorted_values[i] - shift;
        prefix_sum_[i + 1] = prefix_sum_[i] + y;
        prefix_sq_[i + 1] = prefix_sq_[i] + y * y;
        run_start_[i] = i > 0 && sorted_values[i - 1] == sorted_values[i] ? run_start_[i - 1] : i;
    }
}

double SegmentCostTable::cost(std::size_t l, std::size_t r) const {
    if (l > r) throw ValidationError("segment start exceeds segment end");
    if (r > size()) throw ValidationError("segment end beyond table");
    return cost_unchecked(l, r);
}

double SegmentCostTable::weighted_std(std::size_t l, std::size_t r) const {
    return cost(l, r) / std::sqrt(2.0);
}

std::vector<std::size_t> allowed_cuts(std::span<const double> sorted_values) {
    std::vector<std::size_t> cuts{0};
    for (std::size_t i = 1; i < sorted_values.size(); ++i) {
        if (sorted_values[i - 1] < sorted_values[i]) cuts.push_back(i);
    }
    if (!sorted_values.empty()) cuts.push_back(sorted_values.size());
    return cuts;
}

PartitionResult make_partition(std::span<const double> sorted_values, const SegmentCostTable& table,
                               std::vector<std::size_t> cut_indices) {
    PartitionResult out;
    const std::size_t n = sorted_values.size();
    for (std::size_t j = 1; j < cut_indices.size(); ++j) {
        const std::size_t l = cut_indices[j - 1];
        const std::size_t r = cut_indices[j];
        out.objective += table.cost(l, r);
        out.weighted_std += table.weighted_std(l, r);
    }
    // Thresholds go between the neighbours of every distinct interior cut.
    std::vector<std::size_t> interior;
    for (std::size_t c : cut_indices) {
        if (c > 0 && c < n && (interior.empty() || interior.back() != c)) interior.push_back(c);
    }
    for (std::size_t c : interior) {
        const double lo = sorted_values[c - 1];
        const double hi = sorted_values[c];
        double t = lo + (hi - lo) / 2.0;
        if (!(t < hi)) t = lo;  // adjacent doubles: cells are (.., t] so lo still works
        out.thresholds.push_back(t);
    }
    out.cut_indices = std::move(cut_indices);
    return out;
}

namespace detail {

PartitionTables init_tables(std::span<const double> sorted_values, std::size_t k_max) {
    if (sorted_values.empty()) throw ValidationError("cannot partition an empty array");
    if (k_max == 0) throw ValidationError("k must be at least 1");
    PartitionTables dp;
    dp.cuts = allowed_cuts(sorted_values);
    const std::size_t p = dp.cuts.size();
    dp.cost.assign(k_max + 1, std::vector<double>(p, kInf));
    dp.from.assign(k_max + 1, std::vector<std::uint32_t>(p, 0));
    dp.cost[0][0] = 0.0;
    return dp;
}

std::vector<PartitionResult> extract_results(std::span<const double> sorted_values,
                                             const SegmentCostTable& table, const PartitionTables& dp) {
    const std::size_t k_max = dp.cost.size() - 1;
    const std::size_t last = dp.cuts.size() - 1;
    std::vector<PartitionResult> results;
    results.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        std::vector<std::size_t> cuts(k + 1);
        std::size_t j = last;
        for (std::size_t l = k; l > 0; --l) {
            cuts[l] = dp.cuts[j];
            j = dp.from[l][j];
        }
        cuts[0] = 0;
        PartitionResult r = make_partition(sorted_values, table, std::move(cuts));
        // Report the DP's own sum so the objective is exactly what was minimized.
        r.objective = dp.cost[k][last];
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace detail

std::vector<PartitionResult> optimal_partitions(std::span<const double> sorted_values, std::size_t k_max) {
    const SegmentCostTable table(sorted_values);
    auto dp = detail::init_tables(sorted_values, k_max);
    const auto& cuts = dp.cuts;
    const auto p = static_cast<std::ptrdiff_t>(cuts.size());

    for (std::size_t l = 1; l <= k_max; ++l) {
        const std::vector<double>& prev = dp.cost[l - 1];
        std::vector<double>& cur = dp.cost[l];
        std::vector<std::uint32_t>& from = dp.from[l];
        // Work grows linearly with j; small dynamic chunks keep threads balanced.
#pragma omp parallel for schedule(dynamic, 32)
        for (std::ptrdiff_t j = 0; j < p; ++j) {
            const std::size_t r = cuts[static_cast<std::size_t>(j)];
            double best = detail::kInf;
            std::uint32_t arg = 0;
            for (std::ptrdiff_t i = 0; i <= j; ++i) {
                const double base = prev[static_cast<std::size_t>(i)];
                if (base == detail::kInf) continue;
                const double c = base + table.cost_unchecked(cuts[static_cast<std::size_t>(i)], r);
                if (c < best) {
                    best = c;
                    arg = static_cast<std::uint32_t>(i);
                }
            }
            cur[static_cast<std::size_t>(j)] = best;
            from[static_cast<std::size_t>(j)] = arg;
        }
    }
    return detail::extract_results(sorted_values, table, dp);
}

PartitionResult optimal_k_partition(std::span<const double> sorted_values, std::size_t k) {
    auto all = optimal_partitions(sorted_values, k);
    return std::move(all.back());
}

}  // namespace reservekit
