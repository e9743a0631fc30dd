#pragma once

#include "betaelm/task.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace betaelm {

/// Share of predictions whose nearest class code (rounded half away from
/// zero, clamped to [0, C-1]) equals the target code.
double classification_accuracy(std::span<const double> pred, std::span<const double> target,
                               int num_classes);

double mse(std::span<const double> pred, std::span<const double> target);
double rmse(std::span<const double> pred, std::span<const double> target);

/// Relative gain of `candidate` over `baseline`, signed so that a positive
/// value always means the candidate is better (higher CA, lower error).
/// Throws UndefinedRate when baseline == 0.
double improvement_rate(double candidate, double baseline, MetricKind kind);

/// Evaluates the metric appropriate for `kind` on the given vectors.
double evaluate_metric(MetricKind kind, std::span<const double> pred,
                       std::span<const double> target, int num_classes);

struct RunResult {
    MetricKind metric = MetricKind::RMSE;
    double value = 0.0;
    std::uint64_t run_seed = 0;
    std::string partition = "test";
};

struct EvalReport {
    MetricKind metric = MetricKind::RMSE;
    std::vector<RunResult> per_run;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single run
};

/// Mean and sample standard deviation over runs. Throws InvalidInput on an
/// empty list or mixed metric kinds.
EvalReport aggregate(std::vector<RunResult> runs);

/// Mean and sample standard deviation of plain values.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);

}  // namespace betaelm
