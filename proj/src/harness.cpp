#include "reservekit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "reservekit/pricing.hpp"
#include "reservekit/text.hpp"

namespace reservekit {

// ---- CSV -------------------------------------------------------------------

Dataset parse_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) -> ValidationError {
        return ValidationError(source + ":" + std::to_string(line_no) + ": " + msg);
    };

    if (!std::getline(in, line)) {
        line_no = 1;
        throw fail("missing header row");
    }
    ++line_no;
    const auto header = split(trim(line), ',');
    const auto bid_col = std::ranges::find_if(header, [](std::string_view h) { return trim(h) == "bid"; });
    if (bid_col == header.end()) throw fail("schema error: missing column 'bid'");
    if (bid_col != header.end() - 1) throw fail("schema error: column 'bid' must be last");
    const std::size_t d = header.size() - 1;
    for (std::size_t j = 0; j < d; ++j) {
        const std::string expected = "f" + std::to_string(j);
        if (trim(header[j]) != expected) {
            throw fail("schema error: expected column '" + expected + "', found '" + std::string(trim(header[j])) + "'");
        }
    }

    Dataset data(d);
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        const auto fields = split(row, ',');
        if (fields.size() != d + 1) {
            throw fail("expected " + std::to_string(d + 1) + " fields, found " + std::to_string(fields.size()));
        }
        Sample s;
        s.features.resize(d);
        for (std::size_t j = 0; j <= d; ++j) {
            const auto v = parse_double(fields[j]);
            if (!v || !std::isfinite(*v)) throw fail("malformed number '" + std::string(trim(fields[j])) + "'");
            (j < d ? s.features[j] : s.bid) = *v;
        }
        if (s.bid < 0.0) throw fail("negative bid");
        data.add(std::move(s));
    }
    return data;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    return parse_csv(in, path.string());
}

void write_csv(const Dataset& dataset, std::ostream& out) {
    for (std::size_t j = 0; j < dataset.dimension(); ++j) out << 'f' << j << ',';
    out << "bid\n";
    for (const auto& s : dataset.samples()) {
        for (double x : s.features) out << format_double(x) << ',';
        out << format_double(s.bid) << '\n';
    }
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ostringstream out;
    write_csv(dataset, out);
    write_file(path, out.str());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << contents;
    if (!out) throw ValidationError("write failed for " + path.string());
}

// ---- experiments -------------------------------------------------------------

std::vector<std::size_t> default_k_grid() {
    std::vector<std::size_t> grid;
    for (std::size_t k = 2; k <= 24; k += 2) grid.push_back(k);
    return grid;
}

void ExperimentConfig::validate() const {
    if (replicas < 1) throw ValidationError("replicas must be at least 1");
    if (k_grid.empty()) throw ValidationError("k grid must not be empty");
    if (std::ranges::any_of(k_grid, [](std::size_t k) { return k == 0; })) {
        throw ValidationError("k grid entries must be positive");
    }
    if (!input_csv) ScenarioConfig{n, d, sigma, scenario, seed}.validate();
    if (!(ridge >= 0.0)) throw ValidationError("ridge must be >= 0");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::ric_h: return "ric_h";
        case Method::offset: return "offset";
        case Method::monopoly: return "monopoly";
    }
    return "unknown";
}

const MethodResult& ReplicaResult::result(Method m) const {
    const auto it = std::ranges::find(methods, m, &MethodResult::method);
    if (it == methods.end()) throw std::out_of_range("method missing from replica result");
    return *it;
}

std::size_t select_k(const std::map<std::size_t, double>& holdout_revenues) {
    if (holdout_revenues.empty()) throw ValidationError("no holdout revenues to select from");
    auto best = holdout_revenues.begin();
    for (auto it = holdout_revenues.begin(); it != holdout_revenues.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

namespace {

std::uint64_t replica_seed(const ExperimentConfig& config, std::size_t replica, std::uint64_t split) {
    return mix_seed(config.seed + replica, split);
}

}  // namespace

Splits make_splits(const ExperimentConfig& config, std::size_t replica, const std::optional<Dataset>& source) {
    if (!source) {
        auto make = [&](std::uint64_t split) {
            return generate_dataset({config.n, config.d, config.sigma, config.scenario,
                                     replica_seed(config, replica, split)});
        };
        return {make(1), make(2), make(3)};
    }

    const std::size_t m = source->size();
    if (m < 3) throw ValidationError("need at least 3 rows to form train/holdout/test splits");
    std::vector<std::size_t> rows(m);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Xoshiro256 rng(replica_seed(config, replica, 0));
    for (std::size_t i = m - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
        std::swap(rows[i], rows[std::min(j, i)]);
    }
    const std::size_t train = std::max<std::size_t>(1, std::min(config.csv_train, m / 3));
    const std::size_t holdout = (m - train) / 2;
    const std::span<const std::size_t> all(rows);
    return {source->subset(all.subspan(0, train)), source->subset(all.subspan(train, holdout)),
            source->subset(all.subspan(train + holdout))};
}

ReplicaResult run_replica(const ExperimentConfig& config, const Splits& splits, std::size_t replica) {
    const Predictor h = fit_linear_least_squares(splits.train, config.ridge);
    const auto train_pred = h.predict_all(splits.train);
    const auto hold_pred = h.predict_all(splits.holdout);
    const auto test_pred = h.predict_all(splits.test);
    const auto train_bids = splits.train.bids();
    const auto hold_bids = splits.holdout.bids();
    const auto test_bids = splits.test.bids();

    std::optional<QuantizationConfig> quant;
    if (config.quantize) {
        if (config.input_csv) {
            const auto [lo, hi] = std::ranges::minmax(train_pred);
            if (lo < hi) quant = QuantizationConfig{1000, lo, hi};
        } else {
            quant = QuantizationConfig::auction_preset();
        }
    }

    ReplicaResult out;
    out.replica = replica;
    out.train_squared_loss = squared_loss(train_pred, train_bids).squared_loss;

    const std::size_t k_max = std::ranges::max(config.k_grid);
    const auto reserves = ric_h_all(train_pred, train_bids, k_max, quant, h.id());
    for (std::size_t k : config.k_grid) {
        out.holdout_revenue[k] = evaluate_reserve(reserves[k - 1], hold_pred, hold_bids).mean_revenue;
    }
    out.chosen_k = select_k(out.holdout_revenue);
    const double ric_test = evaluate_reserve(reserves[out.chosen_k - 1], test_pred, test_bids).mean_revenue;

    out.offset = best_offset(offset_candidates(train_pred, train_bids), hold_pred, hold_bids);
    const double offset_test = evaluate_prices(offset_prices({out.offset, h.id()}, test_pred), test_bids).mean_revenue;

    const double monopoly_test = evaluate_reserve(reserves[0], test_pred, test_bids).mean_revenue;

    auto normalized = [&](double v) {
        return monopoly_test > 0.0 ? v / monopoly_test : std::numeric_limits<double>::quiet_NaN();
    };
    out.methods = {
        {Method::ric_h, reserves[out.chosen_k - 1].cell_count(), ric_test, normalized(ric_test)},
        {Method::offset, 0, offset_test, normalized(offset_test)},
        {Method::monopoly, 1, monopoly_test, normalized(monopoly_test)},
    };
    return out;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::optional<Dataset> source;
    if (config.input_csv) source = load_csv(*config.input_csv);

    ExperimentReport report;
    report.config = config;
    report.replicas.resize(config.replicas);

    // Replicas fill their own slot; the reduction below runs in replica order.
    const auto replicas = static_cast<std::ptrdiff_t>(config.replicas);
    std::vector<std::exception_ptr> errors(config.replicas);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < replicas; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        try {
            const auto splits = make_splits(config, idx, source);
            report.replicas[idx] = run_replica(config, splits, idx);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    for (Method m : {Method::ric_h, Method::offset, Method::monopoly}) {
        std::vector<double> raw, norm;
        for (const auto& rep : report.replicas) {
            raw.push_back(rep.result(m).revenue_raw);
            norm.push_back(rep.result(m).revenue_normalized);
        }
        const auto [mr, sr] = mean_std(raw);
        const auto [mn, sn] = mean_std(norm);
        report.summary.push_back({m, mr, sr, mn, sn});
    }
    return report;
}

std::string report_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "replica,method,k,revenue_raw,revenue_normalized\n";
    for (const auto& rep : report.replicas) {
        for (const auto& m : rep.methods) {
            out << rep.replica << ',' << to_string(m.method) << ',' << m.k << ',' << format_double(m.revenue_raw)
                << ',' << format_double(m.revenue_normalized) << '\n';
        }
    }
    return out.str();
}

std::string summary_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "sigma,method,mean_raw,std_raw,mean_normalized,std_normalized\n";
    const std::string sigma = report.config.input_csv ? "" : format_double(report.config.sigma);
    for (const auto& s : report.summary) {
        out << sigma << ',' << to_string(s.method) << ',' << format_double(s.mean_raw) << ','
            << format_double(s.std_raw) << ',' << format_double(s.mean_normalized) << ','
            << format_double(s.std_normalized) << '\n';
    }
    return out.str();
}

void write_report(const ExperimentReport& report, const std::filesystem::path& path) {
    write_file(path, report_csv(report));
}

}  // namespace reservekit
