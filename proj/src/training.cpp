#include "betaelm/training.hpp"

#include "betaelm/error.hpp"
#include "betaelm/metrics.hpp"

#include <span>
#include <string>

namespace betaelm {

namespace {
thread_local std::uint64_t g_assembly_calls = 0;
}

HiddenMatrix assemble_hidden_matrix(const Network& net, const Matrix& inputs)
{
    if (inputs.rows() < 1) {
        throw InvalidInput("assemble_hidden_matrix: no samples");
    }
    if (static_cast<std::size_t>(inputs.cols()) != net.input_dim()) {
        throw InvalidInput("assemble_hidden_matrix: inputs have " +
                           std::to_string(inputs.cols()) + " columns, expected " +
                           std::to_string(net.input_dim()));
    }
    ++g_assembly_calls;

    HiddenMatrix out;
    out.h.resize(inputs.rows(), static_cast<Eigen::Index>(net.hidden_dim()));
    Vector state = zero_state(net);
    Eigen::Index zero_rows = 0;
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        const Vector u = inputs.row(t).transpose();
        state = net.recurrent() ? hidden_rec(net, u, state) : hidden_ff(net, u);
        out.h.row(t) = state.transpose();
        if (state.isZero(0.0)) {
            ++zero_rows;
        }
    }
    out.zero_row_fraction =
        static_cast<double>(zero_rows) / static_cast<double>(inputs.rows());
    return out;
}

Matrix solve_output_weights(const Matrix& h, const Matrix& targets)
{
    if (h.rows() != targets.rows()) {
        throw InvalidInput("solve_output_weights: H has " + std::to_string(h.rows()) +
                           " rows but targets have " + std::to_string(targets.rows()));
    }
    require_finite(targets, "solve_output_weights targets");
    return pseudo_inverse(h) * targets;
}

TrainResult train(const ModelConfig& config, const Matrix& inputs, const Matrix& targets,
                  const Task& task)
{
    if (inputs.rows() != targets.rows()) {
        throw InvalidInput("train: inputs and targets have different sample counts");
    }
    if (static_cast<std::size_t>(targets.cols()) != config.output_dim) {
        throw InvalidInput("train: targets have " + std::to_string(targets.cols()) +
                           " columns, expected output_dim " +
                           std::to_string(config.output_dim));
    }

    TrainResult result;
    result.model.network = init_model(config);
    const HiddenMatrix hidden = assemble_hidden_matrix(result.model.network, inputs);
    if (hidden.zero_row_fraction > 0.5) {
        result.warnings.push_back(
            "hidden matrix: " + std::to_string(hidden.zero_row_fraction * 100.0) +
            "% of rows are identically zero; beta supports may exclude the data");
    }
    result.model.w_out = solve_output_weights(hidden.h, targets);

    const Matrix fitted = hidden.h * result.model.w_out;
    const std::span<const double> pred(fitted.data(), static_cast<std::size_t>(fitted.size()));
    const std::span<const double> want(targets.data(), static_cast<std::size_t>(targets.size()));
    result.fit_metric =
        task.kind == TaskKind::classification ? MetricKind::CA : MetricKind::RMSE;
    result.fit_value = evaluate_metric(result.fit_metric, pred, want, task.num_classes);
    return result;
}

std::uint64_t hidden_assembly_calls()
{
    return g_assembly_calls;
}

}  // namespace betaelm
