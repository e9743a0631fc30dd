#include "betaelm/task.hpp"

namespace betaelm {

std::string_view to_string(TaskKind kind)
{
    switch (kind) {
    case TaskKind::classification: return "classification";
    case TaskKind::prediction: return "prediction";
    case TaskKind::regression: return "regression";
    }
    return "?";
}

std::string_view to_string(MetricKind kind)
{
    switch (kind) {
    case MetricKind::CA: return "CA";
    case MetricKind::MSE: return "MSE";
    case MetricKind::RMSE: return "RMSE";
    }
    return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view text)
{
    if (text == "classification") return TaskKind::classification;
    if (text == "prediction") return TaskKind::prediction;
    if (text == "regression") return TaskKind::regression;
    return std::nullopt;
}

std::optional<MetricKind> parse_metric_kind(std::string_view text)
{
    if (text == "CA" || text == "ca") return MetricKind::CA;
    if (text == "MSE" || text == "mse") return MetricKind::MSE;
    if (text == "RMSE" || text == "rmse") return MetricKind::RMSE;
    return std::nullopt;
}

}  // namespace betaelm
