#pragma once

#include "betaelm/beta.hpp"
#include "betaelm/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace betaelm {

enum class Activation { tanh, beta };

std::string_view to_string(Activation a);

/// Architecture and initialisation settings for one network.
struct ModelConfig {
    std::size_t input_dim = 1;   // K
    std::size_t hidden_dim = 20; // N
    std::size_t output_dim = 1;  // L
    Activation activation = Activation::tanh;
    bool recurrent = false;
    std::optional<BetaRanges> beta_ranges;  // required for Activation::beta
    double rec_connectivity = 0.1;          // share of nonzero recurrent weights
    double rec_spectral_radius = 0.9;
    double input_weight_scale = 1.0;        // w_in ~ Uniform(-scale, scale)
    std::uint64_t seed = 0;

    /// Throws InvalidInput naming the first violated constraint.
    void validate() const;

    bool operator==(const ModelConfig&) const = default;
};

/// Randomly initialised network with frozen input/recurrent weights.
struct Network {
    ModelConfig config;
    Matrix w_in;                    // N x K
    std::optional<Matrix> w_rec;    // N x N, present iff config.recurrent
    std::optional<BetaBank> input_beta;  // N x K, present iff beta activation
    std::optional<BetaBank> rec_beta;    // N x N, present iff beta and recurrent

    std::size_t input_dim() const { return config.input_dim; }
    std::size_t hidden_dim() const { return config.hidden_dim; }
    bool recurrent() const { return w_rec.has_value(); }
    bool is_beta() const { return input_beta.has_value(); }

    bool operator==(const Network&) const;
};

/// A network plus its solved readout.
struct TrainedModel {
    Network network;
    Matrix w_out;  // N x L

    std::size_t output_dim() const { return static_cast<std::size_t>(w_out.cols()); }

    bool operator==(const TrainedModel&) const;
};

/// Draws w_in, the sparse spectral-radius-scaled w_rec and the beta banks
/// from a generator seeded with config.seed.
Network init_model(const ModelConfig& config);

/// Hidden state of the all-zero initial condition.
Vector zero_state(const Network& net);

/// Stateless hidden mapping. Tanh: tanh(w_in u). Beta: for each neuron the
/// product over inputs of beta(w_in(j, i) * u_i).
Vector hidden_ff(const Network& net, const Vector& u);

/// One recurrent step. Tanh: tanh(w_in u + w_rec prev). Beta: the
/// feed-forward product times the product of beta(w_rec(j, k) * prev_k)
/// over the connections k that exist in w_rec.
/// Throws ContractViolation on a feed-forward network.
Vector hidden_rec(const Network& net, const Vector& u, const Vector& prev);

struct ForwardResult {
    Matrix outputs;     // M x L, row t is w_out^T x(t)
    Vector final_state; // state after the last sample
};

/// Runs the inputs (M x K, one sample per row) through the network in
/// order and applies the linear readout.
ForwardResult forward(const TrainedModel& model, const Matrix& inputs,
                      const Vector& initial_state);

}  // namespace betaelm
