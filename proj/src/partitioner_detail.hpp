#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "reservekit/partitioner.hpp"

namespace reservekit::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// DP tables over allowed cut positions. cost[l][j] is the best cost of
/// splitting sorted positions [0, cuts[j]) into l segments; from[l][j] is
/// the index (into cuts) of the last segment's start.
struct PartitionTables {
    std::vector<std::size_t> cuts;
    std::vector<std::vector<double>> cost;
    std::vector<std::vector<std::uint32_t>> from;
};

PartitionTables init_tables(std::span<const double> sorted_values, std::size_t k_max);

std::vector<PartitionResult> extract_results(std::span<const double> sorted_values,
                                             const SegmentCostTable& table, const PartitionTables& dp);

}  // namespace reservekit::detail
