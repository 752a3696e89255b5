// Serial reference DP and the exhaustive oracle the OpenMP kernel is tested against.

#include <string>

#include "partitioner_detail.hpp"
#include "reservekit/core_model.hpp"
#include "reservekit/partitioner.hpp"

namespace reservekit {

std::vector<PartitionResult> optimal_partitions_serial(std::span<const double> sorted_values,
                                                       std::size_t k_max) {
    const SegmentCostTable table(sorted_values);
    auto dp = detail::init_tables(sorted_values, k_max);
    const std::size_t p = dp.cuts.size();

    for (std::size_t l = 1; l <= k_max; ++l) {
        for (std::size_t j = 0; j < p; ++j) {
            double best = detail::kInf;
            std::uint32_t arg = 0;
            for (std::size_t i = 0; i <= j; ++i) {
                if (dp.cost[l - 1][i] == detail::kInf) continue;
                const double c = dp.cost[l - 1][i] + table.cost_unchecked(dp.cuts[i], dp.cuts[j]);
                if (c < best) {
                    best = c;
                    arg = static_cast<std::uint32_t>(i);
                }
            }
            dp.cost[l][j] = best;
            dp.from[l][j] = arg;
        }
    }
    return detail::extract_results(sorted_values, table, dp);
}

namespace {

struct BruteForce {
    const SegmentCostTable& table;
    const std::vector<std::size_t>& cuts;
    std::size_t k;
    std::vector<std::size_t> current;
    std::vector<std::size_t> best_cuts;
    double best = detail::kInf;

    // current holds i_0..i_{depth-1}; the next cut is any allowed position >= the last.
    void search(std::size_t from_index, double acc) {
        if (current.size() == k) {
            const double total = acc + table.cost_unchecked(current.back(), cuts.back());
            if (total < best) {
                best = total;
                best_cuts = current;
                best_cuts.push_back(cuts.back());
            }
            return;
        }
        for (std::size_t i = from_index; i < cuts.size(); ++i) {
            const double seg = table.cost_unchecked(current.back(), cuts[i]);
            current.push_back(cuts[i]);
            search(i, acc + seg);
            current.pop_back();
        }
    }
};

double combinations(std::size_t n, std::size_t r) {
    double c = 1.0;
    for (std::size_t i = 1; i <= r; ++i) c = c * static_cast<double>(n - r + i) / static_cast<double>(i);
    return c;
}

}  // namespace

PartitionResult brute_force_partition(std::span<const double> sorted_values, std::size_t k) {
    if (sorted_values.size() > kBruteForceMaxValues) {
        throw ValidationError("oracle limited to small instances");
    }
    if (sorted_values.empty()) throw ValidationError("cannot partition an empty array");
    if (k == 0) throw ValidationError("k must be at least 1");
    const SegmentCostTable table(sorted_values);
    const auto cuts = allowed_cuts(sorted_values);
    // k-1 interior cuts chosen with repetition from cuts.size() positions.
    if (combinations(cuts.size() + k - 2, k - 1) > 5e7) {
        throw ValidationError("oracle limited to small instances");
    }

    BruteForce search{table, cuts, k, {0}, {}, detail::kInf};
    search.search(0, 0.0);
    PartitionResult r = make_partition(sorted_values, table, search.best_cuts);
    r.objective = search.best;
    return r;
}

}  // namespace reservekit
