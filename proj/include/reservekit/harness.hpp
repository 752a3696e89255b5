#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reservekit/core_model.hpp"
#include "reservekit/datagen.hpp"
#include "reservekit/regression.hpp"

namespace reservekit {

// ---- dataset CSV: header f0,...,f{d-1},bid; one sample per line ----------

Dataset parse_csv(std::istream& in, const std::string& source = "<stream>");
Dataset load_csv(const std::filesystem::path& path);
void write_csv(const Dataset& dataset, std::ostream& out);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

// ---- experiments -----------------------------------------------------------

std::vector<std::size_t> default_k_grid();  // 2, 4, ..., 24

struct ExperimentConfig {
    /// When set, samples come from this CSV instead of the synthetic generator.
    std::optional<std::filesystem::path> input_csv;
    Scenario scenario = Scenario::linear;
    double sigma = 0.01;
    std::size_t n = 4000;  // per split for synthetic data
    std::size_t d = 10;
    /// Training-sample size when reading a CSV; holdout and test share the rest.
    std::size_t csv_train = 20000;
    std::size_t replicas = 20;
    std::vector<std::size_t> k_grid = default_k_grid();
    bool quantize = true;
    std::uint64_t seed = 1;
    double ridge = kDefaultRidge;

    void validate() const;
};

enum class Method { ric_h, offset, monopoly };

std::string to_string(Method m);

struct MethodResult {
    Method method = Method::monopoly;
    std::size_t k = 0;  // cells used; 0 for the offset rule
    double revenue_raw = 0.0;
    double revenue_normalized = 0.0;
};

struct ReplicaResult {
    std::size_t replica = 0;
    std::size_t chosen_k = 0;
    double offset = 0.0;
    double train_squared_loss = 0.0;
    std::map<std::size_t, double> holdout_revenue;  // k -> RIC-h holdout mean revenue
    std::vector<MethodResult> methods;              // ric_h, offset, monopoly

    const MethodResult& result(Method m) const;
};

struct MethodSummary {
    Method method = Method::monopoly;
    double mean_raw = 0.0;
    double std_raw = 0.0;
    double mean_normalized = 0.0;
    double std_normalized = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    Method anchor = Method::monopoly;
    std::vector<ReplicaResult> replicas;
    std::vector<MethodSummary> summary;
};

/// argmax of holdout revenue; ties go to the smallest k.
std::size_t select_k(const std::map<std::size_t, double>& holdout_revenues);

struct Splits {
    Dataset train;
    Dataset holdout;
    Dataset test;
};

/// Train/holdout/test for one replica. Seeds derive from config.seed + replica.
Splits make_splits(const ExperimentConfig& config, std::size_t replica,
                   const std::optional<Dataset>& source = std::nullopt);

ReplicaResult run_replica(const ExperimentConfig& config, const Splits& splits, std::size_t replica);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Tidy CSV: replica,method,k,revenue_raw,revenue_normalized.
std::string report_csv(const ExperimentReport& report);
/// sigma,method,mean_raw,std_raw,mean_normalized,std_normalized.
std::string summary_csv(const ExperimentReport& report);
void write_report(const ExperimentReport& report, const std::filesystem::path& path);

}  // namespace reservekit
