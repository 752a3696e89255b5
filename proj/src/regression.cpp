#include "reservekit/regression.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "reservekit/text.hpp"

namespace reservekit {

std::string to_string(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::linear: return "linear";
        case PredictorKind::constant: return "constant";
        case PredictorKind::external_table: return "external-table";
    }
    return "unknown";
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) noexcept {
    for (int byte = 0; byte < 8; ++byte) {
        h ^= (word >> (8 * byte)) & 0xffU;
        h *= kFnvPrime;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::uint64_t feature_hash(std::span<const double> features) noexcept {
    std::uint64_t h = kFnvOffset;
    for (double x : features) {
        if (x == 0.0) x = 0.0;
        h = fnv1a(h, std::bit_cast<std::uint64_t>(x));
    }
    return h;
}

Predictor Predictor::linear(std::vector<double> weights, double intercept) {
    Predictor p;
    p.kind_ = PredictorKind::linear;
    p.dimension_ = weights.size();
    p.weights_ = std::move(weights);
    p.intercept_ = intercept;
    return p;
}

Predictor Predictor::constant(std::size_t dimension, double value) {
    Predictor p;
    p.kind_ = PredictorKind::constant;
    p.dimension_ = dimension;
    p.intercept_ = value;
    return p;
}

Predictor Predictor::table(std::size_t dimension, std::map<std::uint64_t, double> entries) {
    Predictor p;
    p.kind_ = PredictorKind::external_table;
    p.dimension_ = dimension;
    p.table_ = std::move(entries);
    return p;
}

Predictor Predictor::table(const Dataset& dataset, std::span<const double> predictions) {
    if (predictions.size() != dataset.size()) {
        throw ValidationError("prediction count does not match dataset size");
    }
    std::map<std::uint64_t, double> entries;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto [it, inserted] = entries.emplace(feature_hash(dataset[i].features), predictions[i]);
        if (!inserted && it->second != predictions[i]) {
            throw ValidationError("conflicting predictions for identical feature vectors (row " +
                                  std::to_string(i + 1) + ")");
        }
    }
    return table(dataset.dimension(), std::move(entries));
}

double Predictor::predict(std::span<const double> features) const {
    if (features.size() != dimension_) {
        throw ValidationError("predictor expects " + std::to_string(dimension_) + " features, got " +
                              std::to_string(features.size()));
    }
    switch (kind_) {
        case PredictorKind::linear: {
            double acc = intercept_;
            for (std::size_t j = 0; j < dimension_; ++j) acc += weights_[j] * features[j];
            return acc;
        }
        case PredictorKind::constant:
            return intercept_;
        case PredictorKind::external_table: {
            const auto it = table_.find(feature_hash(features));
            if (it == table_.end()) throw ValidationError("no recorded prediction for feature vector");
            return it->second;
        }
    }
    return intercept_;
}

std::vector<double> Predictor::predict_all(const Dataset& dataset) const {
    std::vector<double> out(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) out[i] = predict(dataset[i].features);
    return out;
}

std::string Predictor::id() const {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : to_text()) {
        h ^= c;
        h *= kFnvPrime;
    }
    return hex64(h);
}

std::string Predictor::to_text() const {
    std::ostringstream out;
    out << to_string(kind_) << '\n' << dimension_ << '\n';
    switch (kind_) {
        case PredictorKind::linear:
            for (double w : weights_) out << format_double(w) << '\n';
            out << format_double(intercept_) << '\n';
            break;
        case PredictorKind::constant:
            out << format_double(intercept_) << '\n';
            break;
        case PredictorKind::external_table:
            out << table_.size() << '\n';
            for (const auto& [key, value] : table_) out << hex64(key) << ' ' << format_double(value) << '\n';
            break;
    }
    return out.str();
}

Predictor Predictor::from_text(const std::string& text) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        line = trim(line);
        if (!line.empty()) lines.push_back(line);
    }
    std::size_t pos = 0;
    auto next = [&](const char* what) -> std::string_view {
        if (pos >= lines.size()) throw ValidationError(std::string("predictor file truncated: missing ") + what);
        return lines[pos++];
    };
    auto number = [&](const char* what) {
        const auto tok = next(what);
        const auto v = parse_double(tok);
        if (!v || !std::isfinite(*v)) {
            throw ValidationError("predictor file line " + std::to_string(pos) + ": bad " + what);
        }
        return *v;
    };
    auto count = [&](const char* what) {
        const double v = number(what);
        if (v < 0 || v != std::floor(v)) {
            throw ValidationError("predictor file line " + std::to_string(pos) + ": bad " + what);
        }
        return static_cast<std::size_t>(v);
    };

    const auto kind = next("kind");
    const std::size_t d = count("dimension");
    if (kind == "linear") {
        std::vector<double> w(d);
        for (auto& x : w) x = number("weight");
        const double w0 = number("intercept");
        return linear(std::move(w), w0);
    }
    if (kind == "constant") return constant(d, number("value"));
    if (kind == "external-table") {
        const std::size_t n = count("entry count");
        std::map<std::uint64_t, double> entries;
        for (std::size_t i = 0; i < n; ++i) {
            const auto line = next("table entry");
            const auto parts = split(line, ' ');
            const auto value = parts.size() == 2 ? parse_double(parts[1]) : std::nullopt;
            std::uint64_t key = 0;
            if (!value || parts[0].size() != 16 ||
                std::sscanf(std::string(parts[0]).c_str(), "%16llx",
                            reinterpret_cast<unsigned long long*>(&key)) != 1) {
                throw ValidationError("predictor file line " + std::to_string(pos) + ": bad table entry");
            }
            entries.emplace(key, *value);
        }
        return table(d, std::move(entries));
    }
    throw ValidationError("unknown predictor kind '" + std::string(kind) + "'");
}

Predictor fit_linear_least_squares(const Dataset& train, double ridge) {
    if (train.empty()) throw ValidationError("empty dataset");
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ValidationError("ridge must be >= 0");

    const std::size_t m = train.size();
    const std::size_t d = train.dimension();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    Eigen::VectorXd b(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = train[i].features[j];
        b(static_cast<Eigen::Index>(i)) = train[i].bid;
    }

    // Centering eliminates the unpenalized intercept from the normal equations.
    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const double b_mean = b.mean();
    if (d == 0) return Predictor::linear({}, b_mean);
    x.rowwise() -= x_mean;
    b.array() -= b_mean;

    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += ridge;
    const Eigen::VectorXd rhs = x.transpose() * b;

    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    const bool singular = llt.info() != Eigen::Success ||
                          llt.rcond() < 64 * std::numeric_limits<double>::epsilon();
    if (singular) {
        throw ValidationError(ridge == 0.0
                                  ? "normal matrix is singular; use a ridge penalty > 0"
                                  : "normal matrix is numerically singular; increase the ridge penalty");
    }
    const Eigen::VectorXd w = llt.solve(rhs);
    std::vector<double> weights(w.data(), w.data() + w.size());
    const double intercept = b_mean - x_mean.dot(w);
    return Predictor::linear(std::move(weights), intercept);
}

LossReport squared_loss(std::span<const double> predictions, std::span<const double> bids) {
    if (bids.empty()) throw ValidationError("empty dataset");
    if (predictions.size() != bids.size()) throw ValidationError("prediction and bid counts differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < bids.size(); ++i) {
        const double e = predictions[i] - bids[i];
        acc += e * e;
    }
    const double loss = acc / static_cast<double>(bids.size());
    return {loss, std::sqrt(loss)};
}

LossReport squared_loss(const Predictor& predictor, const Dataset& dataset) {
    const auto predictions = predictor.predict_all(dataset);
    const auto bids = dataset.bids();
    return squared_loss(predictions, bids);
}

}  // namespace reservekit
