#include "reservekit/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "reservekit/pricing.hpp"

namespace reservekit {

double BoundCheck::relative_slack() const noexcept {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale > 0.0 ? slack / scale : 0.0;
}

BoundCheck make_check(std::string name, double lhs, double rhs, double slack) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return {std::move(name), lhs, rhs, slack >= -kBoundTolerance * scale, slack};
}

DistributionSummary summarize_empirical(std::span<const double> bids) {
    if (bids.empty()) throw ValidationError("empty bid list");
    const auto stats = empirical_stats(bids);
    const auto monopoly = empirical_optimal_reserve(bids);
    return {stats.mean_bid, monopoly.mean_revenue, stats.mean_bid - monopoly.mean_revenue, stats.variance};
}

namespace {

void require_revenue(const DistributionSummary& d) {
    if (!(d.monopoly_revenue > 0.0)) throw ValidationError("degenerate zero-revenue distribution");
}

}  // namespace

BoundCheck check_variance_lower_bound(const DistributionSummary& d) {
    require_revenue(d);
    const double r = d.monopoly_revenue;
    const double rhs = 2.0 * r * r * std::exp(d.separation / r) - d.mean_bid * d.mean_bid - r * r;
    return make_check("variance_lower_bound", d.variance, rhs, d.variance - rhs);
}

std::pair<BoundCheck, BoundCheck> check_separation_bound(const DistributionSummary& d) {
    require_revenue(d);
    const double sigma_23 = std::cbrt(d.variance);  // (sigma^2)^{1/3}
    const double via_revenue = std::cbrt(3.0 * d.monopoly_revenue) * sigma_23;
    const double via_mean = std::cbrt(3.0 * d.mean_bid) * sigma_23;
    return {make_check("separation_vs_revenue", d.separation, via_revenue, via_revenue - d.separation),
            make_check("separation_vs_mean", d.separation, via_mean, via_mean - d.separation)};
}

BoundCheck check_approx_ratio(const DistributionSummary& d) {
    require_revenue(d);
    if (!(d.mean_bid > 0.0)) throw ValidationError("mean bid must be positive");
    const double lhs = d.mean_bid / d.monopoly_revenue;
    const double rhs = 4.78 + 2.0 * std::log1p(d.variance / (d.mean_bid * d.mean_bid));
    return make_check("approx_ratio", lhs, rhs, rhs - lhs);
}

DistributionSummary equal_revenue_summary(double M) {
    if (!(M > 1.0) || !std::isfinite(M)) throw ValidationError("equal-revenue truncation needs M > 1");
    const double e = std::log(M);
    // Var = 2M - 1 - (1 + ln M)^2 = 2 (M - 1 - ln M - ln^2 M / 2), written with
    // expm1 so the cancellation near M = 1 stays benign.
    const double variance = 2.0 * (std::expm1(e) - e - e * e / 2.0);
    return {1.0 + e, 1.0, e, variance};
}

double generalization_gap(std::size_t m, std::size_t k, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
    if (m < 2) throw ValidationError("generalization gap needs m >= 2");
    if (k < 1) throw ValidationError("k must be at least 1");
    const double md = static_cast<double>(m);
    const double kd = static_cast<double>(k);
    const double log_growth = std::max(0.0, (2.0 * kd - 1.0) * std::log(md) - kd * std::log(kd));
    return 2.0 * std::sqrt(std::log(1.0 / delta) / (2.0 * md)) + 4.0 * std::sqrt(2.0 * log_growth / md);
}

BoundCheck check_offset_lemma(double observed_separation, double eta_sq) {
    if (!(eta_sq >= 0.0)) throw ValidationError("squared loss must be non-negative");
    const double eta = std::sqrt(eta_sq);
    const double rhs = std::sqrt(eta) + 2.0 * std::cbrt(eta * eta);
    return make_check("offset_lemma", observed_separation, rhs, rhs - observed_separation);
}

BoundCheck check_cluster_separation(const RevenueReport& report) {
    if (report.count == 0) throw ValidationError("empty revenue report");
    double weighted = 0.0;
    for (const auto& cell : report.per_cell) weighted += static_cast<double>(cell.count) * cell.bid_std;
    weighted /= static_cast<double>(report.count);
    const double rhs = std::cbrt(3.0 * report.mean_bid) * std::cbrt(weighted * weighted);
    return make_check("cluster_separation", report.separation, rhs, rhs - report.separation);
}

BoundCheck check_prediction_clustering(double phi_prediction_cells, double phi_best, std::size_t m,
                                       double eta_hat) {
    const double rhs = phi_best + 4.0 * static_cast<double>(m) * eta_hat;
    return make_check("prediction_clustering", phi_prediction_cells, rhs, rhs - phi_prediction_cells);
}

double separation_constant() { return std::cbrt(12.0); }

}  // namespace reservekit
