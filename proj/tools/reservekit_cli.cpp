// reservekit: generate data, fit predictors and reserve rules, run experiments.
//
// Exit status: 0 on success, 2 on invalid input or usage, 1 on internal errors.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reservekit/bounds.hpp"
#include "reservekit/core_model.hpp"
#include "reservekit/datagen.hpp"
#include "reservekit/harness.hpp"
#include "reservekit/pricing.hpp"
#include "reservekit/regression.hpp"
#include "reservekit/text.hpp"

namespace rk = reservekit;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

std::vector<std::size_t> parse_k_grid(const std::string& spec) {
    std::vector<std::size_t> out;
    for (auto field : rk::split(spec, ',')) {
        field = rk::trim(field);
        const auto v = rk::parse_double(field);
        if (!v || *v < 1.0 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
            throw rk::ValidationError("bad k grid entry '" + std::string(field) + "'");
        }
        out.push_back(static_cast<std::size_t>(*v));
    }
    if (out.empty()) throw rk::ValidationError("k grid must not be empty");
    return out;
}

std::optional<rk::QuantizationConfig> prediction_range_quantizer(const std::vector<double>& predictions) {
    const auto [lo, hi] = std::ranges::minmax(predictions);
    if (!(lo < hi)) return std::nullopt;
    return rk::QuantizationConfig{1000, lo, hi};
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        rk::write_file(path, text);
    }
}

void print_report(const rk::RevenueReport& rep) {
    std::cout << "count " << rep.count << '\n'
              << "mean_bid " << rk::format_double(rep.mean_bid) << '\n'
              << "mean_revenue " << rk::format_double(rep.mean_revenue) << '\n'
              << "separation " << rk::format_double(rep.separation) << '\n';
    for (std::size_t j = 0; j < rep.per_cell.size(); ++j) {
        const auto& c = rep.per_cell[j];
        std::cout << "cell " << j << " count " << c.count << " reserve " << rk::format_double(c.reserve)
                  << " mean_bid " << rk::format_double(c.mean_bid) << " mean_revenue "
                  << rk::format_double(c.mean_revenue) << '\n';
    }
}

void print_check(const rk::BoundCheck& c) {
    std::cout << c.name << ' ' << rk::format_double(c.lhs) << ' ' << rk::format_double(c.rhs) << ' '
              << (c.satisfied ? "true" : "false") << ' ' << rk::format_double(c.slack) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reserve prices from bid predictions"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
    std::string scenario = "linear";
    rk::ScenarioConfig gen_cfg;
    std::string gen_out;
    gen->add_option("--scenario", scenario, "linear or bimodal")->capture_default_str();
    gen->add_option("--sigma", gen_cfg.noise_sigma, "Bid noise standard deviation")->capture_default_str();
    gen->add_option("--n", gen_cfg.n, "Number of samples")->capture_default_str();
    gen->add_option("--d", gen_cfg.d, "Feature dimension")->capture_default_str();
    gen->add_option("--seed", gen_cfg.seed)->capture_default_str();
    gen->add_option("--out", gen_out, "Output CSV (stdout when omitted)");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a linear bid predictor, optionally a RIC-h reserve");
    std::string fit_train, fit_predictor_out, fit_reserve_out;
    double fit_ridge = rk::kDefaultRidge;
    std::size_t fit_k = 0;
    bool fit_quantize = true;
    fit->add_option("--train", fit_train, "Training CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--out", fit_predictor_out, "Predictor output file")->required();
    fit->add_option("--ridge", fit_ridge, "Ridge penalty on the weights")->capture_default_str();
    fit->add_option("--k", fit_k, "Also fit a reserve with this many cells");
    fit->add_option("--reserve-out", fit_reserve_out, "Reserve output file (with --k)");
    fit->add_flag("--quantize,!--no-quantize", fit_quantize,
                  "Snap predictions to 1000 buckets over their training range")
        ->capture_default_str();

    // price
    auto* price = app.add_subcommand("price", "Apply a serialized reserve to a CSV");
    std::string price_reserve, price_predictor, price_data, price_out;
    price->add_option("--reserve", price_reserve)->required()->check(CLI::ExistingFile);
    price->add_option("--predictor", price_predictor)->required()->check(CLI::ExistingFile);
    price->add_option("--data", price_data)->required()->check(CLI::ExistingFile);
    price->add_option("--out", price_out, "Output CSV (stdout when omitted)");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Empirical revenue of a reserve rule on a CSV");
    std::string eval_reserve, eval_predictor, eval_data;
    std::optional<double> eval_offset;
    eval->add_option("--predictor", eval_predictor)->required()->check(CLI::ExistingFile);
    eval->add_option("--data", eval_data)->required()->check(CLI::ExistingFile);
    auto* eval_res_opt = eval->add_option("--reserve", eval_reserve, "Piecewise reserve file")
                             ->check(CLI::ExistingFile);
    auto* eval_off_opt = eval->add_option("--offset", eval_offset, "Use max(h - offset, 0) instead");
    eval_res_opt->excludes(eval_off_opt);

    // experiment
    auto* exp = app.add_subcommand("experiment", "Compare RIC-h, offset and monopoly reserves");
    rk::ExperimentConfig exp_cfg;
    std::string exp_scenario = "linear", exp_k_grid = "2,4,6,8,10,12,14,16,18,20,22,24", exp_out, exp_summary,
                exp_input;
    exp->add_option("--scenario", exp_scenario, "linear or bimodal")->capture_default_str();
    exp->add_option("--sigma", exp_cfg.sigma, "Bid noise standard deviation")->capture_default_str();
    exp->add_option("--n", exp_cfg.n, "Samples per split")->capture_default_str();
    exp->add_option("--d", exp_cfg.d, "Feature dimension")->capture_default_str();
    exp->add_option("--seed", exp_cfg.seed)->capture_default_str();
    exp->add_option("--k-grid", exp_k_grid, "Comma-separated cell counts")->capture_default_str();
    exp->add_flag("--quantize,!--no-quantize", exp_cfg.quantize, "Quantize predictions before clustering")
        ->capture_default_str();
    exp->add_option("--replicas", exp_cfg.replicas)->capture_default_str();
    exp->add_option("--input", exp_input, "Use this CSV instead of synthetic data")->check(CLI::ExistingFile);
    exp->add_option("--train-size", exp_cfg.csv_train, "Training rows drawn from --input")->capture_default_str();
    exp->add_option("--out", exp_out, "Per-replica report CSV")->required();
    exp->add_option("--summary-out", exp_summary, "Summary CSV (mean and std per method)");

    // bounds-check
    auto* bounds = app.add_subcommand("bounds-check", "Evaluate the revenue inequalities on a bid sample");
    std::string bounds_bids;
    std::optional<double> bounds_m;
    auto* bids_opt = bounds->add_option("--bids", bounds_bids, "CSV with a bid column")->check(CLI::ExistingFile);
    auto* m_opt = bounds->add_option("--equal-revenue", bounds_m, "Truncated equal-revenue distribution at M");
    bids_opt->excludes(m_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (gen->parsed()) {
            gen_cfg.scenario = rk::parse_scenario(scenario);
            std::ostringstream out;
            rk::write_csv(rk::generate_dataset(gen_cfg), out);
            emit(out.str(), gen_out);
        } else if (fit->parsed()) {
            const auto train = rk::load_csv(fit_train);
            const auto h = rk::fit_linear_least_squares(train, fit_ridge);
            rk::write_file(fit_predictor_out, h.to_text());
            const auto loss = rk::squared_loss(h, train);
            std::cout << "predictor " << h.id() << '\n'
                      << "train_squared_loss " << rk::format_double(loss.squared_loss) << '\n';
            if (fit_k > 0) {
                if (fit_reserve_out.empty()) throw rk::ValidationError("--k needs --reserve-out");
                const auto pred = h.predict_all(train);
                const auto quant = fit_quantize ? prediction_range_quantizer(pred) : std::nullopt;
                const auto bids = train.bids();
                const auto reserve = rk::ric_h(pred, bids, fit_k, quant, h.id());
                rk::write_file(fit_reserve_out, rk::to_text(reserve));
                std::cout << "cells " << reserve.cell_count() << '\n'
                          << "train_revenue "
                          << rk::format_double(rk::evaluate_reserve(reserve, pred, bids).mean_revenue) << '\n';
            } else if (!fit_reserve_out.empty()) {
                throw rk::ValidationError("--reserve-out needs --k");
            }
        } else if (price->parsed()) {
            const auto reserve = rk::reserve_from_text(rk::read_file(price_reserve));
            const auto h = rk::Predictor::from_text(rk::read_file(price_predictor));
            if (!reserve.predictor_id().empty() && reserve.predictor_id() != h.id()) {
                throw rk::ValidationError("reserve was fitted with predictor " + reserve.predictor_id() +
                                          ", got " + h.id());
            }
            const auto data = rk::load_csv(price_data);
            std::ostringstream out;
            out << "prediction,reserve\n";
            for (double p : h.predict_all(data)) {
                out << rk::format_double(p) << ',' << rk::format_double(reserve.price(p)) << '\n';
            }
            emit(out.str(), price_out);
        } else if (eval->parsed()) {
            const auto h = rk::Predictor::from_text(rk::read_file(eval_predictor));
            const auto data = rk::load_csv(eval_data);
            if (eval_offset) {
                const auto prices = rk::offset_prices({*eval_offset, h.id()}, h.predict_all(data));
                const auto bids = data.bids();
                print_report(rk::evaluate_prices(prices, bids));
            } else if (!eval_reserve.empty()) {
                print_report(rk::evaluate_reserve(rk::reserve_from_text(rk::read_file(eval_reserve)), h, data));
            } else {
                throw rk::ValidationError("evaluate needs --reserve or --offset");
            }
        } else if (exp->parsed()) {
            exp_cfg.scenario = rk::parse_scenario(exp_scenario);
            exp_cfg.k_grid = parse_k_grid(exp_k_grid);
            if (!exp_input.empty()) exp_cfg.input_csv = exp_input;
            const auto report = rk::run_experiment(exp_cfg);
            rk::write_report(report, exp_out);
            if (!exp_summary.empty()) rk::write_file(exp_summary, rk::summary_csv(report));
            std::cout << rk::summary_csv(report);
        } else if (bounds->parsed()) {
            rk::DistributionSummary d;
            if (bounds_m) {
                d = rk::equal_revenue_summary(*bounds_m);
            } else if (!bounds_bids.empty()) {
                const auto data = rk::load_csv(bounds_bids);
                const auto bids = data.bids();
                d = rk::summarize_empirical(bids);
            } else {
                throw rk::ValidationError("bounds-check needs --bids or --equal-revenue");
            }
            std::cout << "mean_bid " << rk::format_double(d.mean_bid) << '\n'
                      << "monopoly_revenue " << rk::format_double(d.monopoly_revenue) << '\n'
                      << "separation " << rk::format_double(d.separation) << '\n'
                      << "variance " << rk::format_double(d.variance) << '\n';
            print_check(rk::check_variance_lower_bound(d));
            const auto [via_r, via_b] = rk::check_separation_bound(d);
            print_check(via_r);
            print_check(via_b);
            print_check(rk::check_approx_ratio(d));
        }
    } catch (const rk::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
