#pragma once

#include "betaelm/linalg.hpp"
#include "betaelm/model.hpp"
#include "betaelm/task.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace betaelm {

/// Hidden activations over a sample sequence, one row per sample.
struct HiddenMatrix {
    Matrix h;                       // M x N
    double zero_row_fraction = 0.0; // share of rows that are identically zero
};

/// Row t is the hidden state after presenting sample t. Recurrent networks
/// chain states from the zero initial state in row order.
HiddenMatrix assemble_hidden_matrix(const Network& net, const Matrix& inputs);

/// Minimum-norm least-squares solution of h * W = targets, i.e.
/// pinv(h) * targets. Returns N x L.
Matrix solve_output_weights(const Matrix& h, const Matrix& targets);

struct TrainResult {
    TrainedModel model;
    MetricKind fit_metric = MetricKind::RMSE;  // CA for classification, else RMSE
    double fit_value = 0.0;
    std::vector<std::string> warnings;
};

/// Single-pass ELM training: init_model, one hidden-matrix assembly, one
/// pseudo-inverse solve, then the training-set fit metric.
TrainResult train(const ModelConfig& config, const Matrix& inputs, const Matrix& targets,
                  const Task& task);

/// Number of assemble_hidden_matrix calls made on the current thread.
std::uint64_t hidden_assembly_calls();

}  // namespace betaelm
