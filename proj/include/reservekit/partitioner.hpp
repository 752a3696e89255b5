#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace reservekit {

/// O(1) segment statistics over an ascending array via prefix sums.
///
/// Values are shifted by their mean before accumulation; the cost is
/// translation invariant, and the shift keeps 2*n*sum(y^2) - 2*(sum y)^2 from
/// cancelling catastrophically when the values sit far from zero.
class SegmentCostTable {
public:
    explicit SegmentCostTable(std::span<const double> sorted_values);

    std::size_t size() const noexcept { return prefix_sum_.size() - 1; }

    /// sqrt of sum_{i,i'} (y_i - y_i')^2 over the values at positions [l, r).
    double cost(std::size_t l, std::size_t r) const;

    /// n_s * sigma_s over [l, r), population sigma. Equals cost / sqrt(2).
    double weighted_std(std::size_t l, std::size_t r) const;

    /// Same as cost() without bounds checks; for the DP inner loop.
    double cost_unchecked(std::size_t l, std::size_t r) const noexcept {
        // Runs of equal values cost exactly 0; prefix sums would leave rounding noise.
        if (r <= l || run_start_[r - 1] <= l) return 0.0;
        const double n = static_cast<double>(r - l);
        const double s = prefix_sum_[r] - prefix_sum_[l];
        const double q = prefix_sq_[r] - prefix_sq_[l];
        const double radicand = 2.0 * n * q - 2.0 * s * s;
        return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
    }

private:
    std::vector<double> prefix_sum_;
    std::vector<double> prefix_sq_;
    std::vector<std::size_t> run_start_;  // first position holding the same value
};

struct PartitionResult {
    /// i_0 = 0 <= i_1 <= ... <= i_k = n; segment j covers sorted positions [i_{j-1}, i_j).
    std::vector<std::size_t> cut_indices;
    /// One threshold per boundary between non-empty segments; empty segments are merged.
    std::vector<double> thresholds;
    double objective = 0.0;
    double weighted_std = 0.0;

    std::size_t segment_count() const noexcept { return thresholds.size() + 1; }
};

/// Positions where a cut may go: 0, n, and every i with y[i-1] < y[i].
/// Equal values never land on opposite sides of a cut.
std::vector<std::size_t> allowed_cuts(std::span<const double> sorted_values);

/// Rebuilds thresholds, objective and weighted_std for a set of cut indices.
PartitionResult make_partition(std::span<const double> sorted_values, const SegmentCostTable& table,
                               std::vector<std::size_t> cut_indices);

/// Minimum-cost k-segment partitions for every k in [1, k_max], computed with
/// one O(k_max * n^2) dynamic program. The layer sweep runs under OpenMP.
/// Result [k-1] holds the optimum for k segments.
std::vector<PartitionResult> optimal_partitions(std::span<const double> sorted_values, std::size_t k_max);

/// Single-threaded reference for optimal_partitions; identical results.
std::vector<PartitionResult> optimal_partitions_serial(std::span<const double> sorted_values,
                                                       std::size_t k_max);

PartitionResult optimal_k_partition(std::span<const double> sorted_values, std::size_t k);

/// Exhaustive search over every nondecreasing cut tuple. Test oracle; n <= 15.
PartitionResult brute_force_partition(std::span<const double> sorted_values, std::size_t k);

inline constexpr std::size_t kBruteForceMaxValues = 15;

}  // namespace reservekit
