#pragma once

#include "betaelm/config.hpp"
#include "betaelm/dataset.hpp"
#include "betaelm/task.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace betaelm {

/// One metric evaluation of one (model, noise, run, fold) cell.
struct RawRow {
    std::string dataset;
    std::string model;
    std::string noise;
    std::size_t run = 0;
    std::size_t fold = 0;
    std::uint64_t seed = 0;
    std::string partition;  // train, test, test1, test2, ...
    MetricKind metric = MetricKind::RMSE;
    double value = 0.0;
};

/// Mean +- sample std over runs for one (model, noise, partition) cell.
/// Fold values within a run are averaged first.
struct SummaryRow {
    std::string dataset;
    std::string model;
    std::string noise;
    std::string partition;
    MetricKind metric = MetricKind::RMSE;
    std::size_t runs = 0;
    double mean = 0.0;
    double std = 0.0;
};

/// Improvement rates (percent) of rec-elm-bbfnn over tanh-elm (IR1),
/// rec-tanh-elm (IR2) and elm-bbfnn (IR3). Missing baselines stay empty.
struct ImprovementRow {
    std::string dataset;
    std::string noise;
    std::string partition;
    MetricKind metric = MetricKind::RMSE;
    std::optional<double> ir1;
    std::optional<double> ir2;
    std::optional<double> ir3;
};

/// Network output next to its target on the test partition (prediction
/// tasks, first run only).
struct PredictionRow {
    std::string dataset;
    std::string model;
    std::string noise;
    std::size_t run = 0;
    std::size_t fold = 0;
    std::size_t index = 0;
    double target = 0.0;
    double prediction = 0.0;
};

struct ExperimentOutput {
    std::vector<RawRow> raw;
    std::vector<SummaryRow> summary;
    std::vector<ImprovementRow> improvement;
    std::vector<PredictionRow> predictions;
    std::vector<std::string> warnings;
};

/// base_seed XOR FNV-1a("model|run|fold|noise"). Seeds of one model never
/// depend on which other models are configured.
std::uint64_t cell_seed(std::uint64_t base_seed, std::string_view tag, std::size_t run,
                        std::size_t fold, std::string_view noise);

/// Loads the configured dataset (CSV, optional lag windowing).
Dataset load_dataset(const ExperimentConfig& config);

/// Runs every (model, noise, run, fold) cell on an already loaded dataset.
/// Throws on the first failing cell; nothing partial is returned.
ExperimentOutput run_experiment(const ExperimentConfig& config, const Dataset& data);

/// Loads the dataset and runs the experiment.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Test-partition summaries in first-appearance order of the raw rows.
std::vector<SummaryRow> summarize(const std::vector<RawRow>& raw);
std::vector<ImprovementRow> improvement_rates(const std::vector<SummaryRow>& summary);

// CSV output. Column order is fixed; reals use the shortest round-trip form.
std::string raw_csv(const std::vector<RawRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string improvement_csv(const std::vector<ImprovementRow>& rows);
std::string predictions_csv(const std::vector<PredictionRow>& rows);

std::vector<RawRow> parse_raw_csv(const std::filesystem::path& path);

/// Writes raw.csv, summary.csv, improvement.csv and, when present,
/// predictions.csv into `dir` (created if missing).
void write_outputs(const ExperimentOutput& out, const std::filesystem::path& dir);

}  // namespace betaelm
