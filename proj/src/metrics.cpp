#include "betaelm/metrics.hpp"

#include "betaelm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace betaelm {

namespace {

void check_pair(std::span<const double> pred, std::span<const double> target,
                const char* what)
{
    if (pred.empty()) {
        throw InvalidInput(std::string(what) + ": empty input");
    }
    if (pred.size() != target.size()) {
        throw InvalidInput(std::string(what) + ": prediction and target lengths differ (" +
                           std::to_string(pred.size()) + " vs " +
                           std::to_string(target.size()) + ")");
    }
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!std::isfinite(pred[i]) || !std::isfinite(target[i])) {
            throw InvalidInput(std::string(what) + ": non-finite value at index " +
                               std::to_string(i));
        }
    }
}

}  // namespace

double classification_accuracy(std::span<const double> pred, std::span<const double> target,
                               int num_classes)
{
    check_pair(pred, target, "classification_accuracy");
    if (num_classes < 1) {
        throw InvalidInput("classification_accuracy: num_classes must be >= 1");
    }
    const double top = static_cast<double>(num_classes - 1);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double decoded = std::clamp(std::round(pred[i]), 0.0, top);
        if (decoded == target[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

double mse(std::span<const double> pred, std::span<const double> target)
{
    check_pair(pred, target, "mse");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = target[i] - pred[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> target)
{
    return std::sqrt(mse(pred, target));
}

double improvement_rate(double candidate, double baseline, MetricKind kind)
{
    if (baseline == 0.0) {
        throw UndefinedRate("improvement_rate: baseline is zero");
    }
    if (kind == MetricKind::CA) {
        return (candidate - baseline) / baseline;
    }
    return (baseline - candidate) / baseline;
}

double evaluate_metric(MetricKind kind, std::span<const double> pred,
                       std::span<const double> target, int num_classes)
{
    switch (kind) {
    case MetricKind::CA: return classification_accuracy(pred, target, num_classes);
    case MetricKind::MSE: return mse(pred, target);
    case MetricKind::RMSE: return rmse(pred, target);
    }
    throw InvalidInput("evaluate_metric: unknown metric");
}

MeanStd mean_std(std::span<const double> values)
{
    if (values.empty()) {
        throw InvalidInput("mean_std: no values");
    }
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    if (values.size() == 1) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0))};
}

EvalReport aggregate(std::vector<RunResult> runs)
{
    if (runs.empty()) {
        throw InvalidInput("aggregate: no run results");
    }
    const MetricKind kind = runs.front().metric;
    std::vector<double> values;
    values.reserve(runs.size());
    for (const RunResult& r : runs) {
        if (r.metric != kind) {
            throw InvalidInput("aggregate: mixed metric kinds");
        }
        values.push_back(r.value);
    }
    // Sorting makes the floating-point sums independent of run order.
    std::sort(values.begin(), values.end());
    const MeanStd ms = mean_std(values);

    EvalReport report;
    report.metric = kind;
    report.per_run = std::move(runs);
    report.mean = ms.mean;
    report.std = ms.std;
    return report;
}

}  // namespace betaelm
