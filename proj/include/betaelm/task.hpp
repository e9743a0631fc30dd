#pragma once

#include <optional>
#include <string_view>

namespace betaelm {

enum class TaskKind { classification, prediction, regression };
enum class MetricKind { CA, MSE, RMSE };

struct Task {
    TaskKind kind = TaskKind::regression;
    int num_classes = 0;  // classification only

    static Task classification(int classes) { return {TaskKind::classification, classes}; }
    static Task prediction() { return {TaskKind::prediction, 0}; }
    static Task regression() { return {TaskKind::regression, 0}; }

    bool operator==(const Task&) const = default;
};

std::string_view to_string(TaskKind kind);
std::string_view to_string(MetricKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view text);
std::optional<MetricKind> parse_metric_kind(std::string_view text);

}  // namespace betaelm
