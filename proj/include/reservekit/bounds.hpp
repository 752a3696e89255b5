#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reservekit/core_model.hpp"

namespace reservekit {

/// Mean bid B, monopoly revenue R, separation S = B - R and variance of a bid
/// distribution.
struct DistributionSummary {
    double mean_bid = 0.0;
    double monopoly_revenue = 0.0;
    double separation = 0.0;
    double variance = 0.0;
};

/// One evaluated inequality. For "lhs <= rhs" checks slack = rhs - lhs, for
/// "lhs >= rhs" checks slack = lhs - rhs; either way negative slack means the
/// inequality failed.
struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double slack = 0.0;

    double relative_slack() const noexcept;
};

inline constexpr double kBoundTolerance = 1e-9;

/// Builds a check from its slack; satisfied when slack >= -1e-9 * max(1, |lhs|, |rhs|).
BoundCheck make_check(std::string name, double lhs, double rhs, double slack);

DistributionSummary summarize_empirical(std::span<const double> bids);

/// sigma^2 >= 2 R^2 e^{S/R} - B^2 - R^2.
BoundCheck check_variance_lower_bound(const DistributionSummary& d);

/// S <= (3R)^{1/3} sigma^{2/3} and S <= (3B)^{1/3} sigma^{2/3}.
std::pair<BoundCheck, BoundCheck> check_separation_bound(const DistributionSummary& d);

/// B / R <= 4.78 + 2 ln(1 + sigma^2 / B^2).
BoundCheck check_approx_ratio(const DistributionSummary& d);

/// Truncated equal-revenue distribution: G(x) = 1 below 1, 1/x on [1, M],
/// with the remaining mass 1/M at M. Closed form, R = 1.
DistributionSummary equal_revenue_summary(double M);

/// 2 sqrt(ln(1/delta) / 2m) + 4 sqrt(2 ln Pi / m) with ln Pi = (2k-1) ln m - k ln k,
/// floored at 0. Meaningful only for bids in [0, 1].
double generalization_gap(std::size_t m, std::size_t k, double delta);

/// Observed separation of the max(h - eta^{2/3}, 0) rule against eta^{1/2} + 2 eta^{2/3}.
BoundCheck check_offset_lemma(double observed_separation, double eta_sq);

/// S_hat <= (3 B_hat)^{1/3} ((1/m) sum_j m_j sigma_j)^{2/3}, sigma_j being
/// per-cell bid standard deviations, for a reserve priced at each cell's
/// empirical optimum.
BoundCheck check_cluster_separation(const RevenueReport& report);

/// Phi(C^h) <= Phi(C*) + 4 m eta_hat: bid-variance cost of the cells chosen
/// from predictions against the best bid clustering.
BoundCheck check_prediction_clustering(double phi_prediction_cells, double phi_best, std::size_t m,
                                       double eta_hat);

/// (12 B eta^2)^{1/3} with B = 1, as a multiple of eta^{2/3}: 12^{1/3}.
double separation_constant();

}  // namespace reservekit
