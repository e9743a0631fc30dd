#include "betaelm/model.hpp"

#include "betaelm/error.hpp"
#include "betaelm/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace betaelm {

std::string_view to_string(Activation a)
{
    return a == Activation::tanh ? "tanh" : "beta";
}

void ModelConfig::validate() const
{
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 1) {
        throw InvalidInput("ModelConfig: input, hidden and output sizes must be >= 1");
    }
    if (recurrent) {
        if (!(rec_spectral_radius > 0.0 && rec_spectral_radius < 1.0)) {
            throw InvalidInput("ModelConfig: rec_spectral_radius must lie in (0, 1)");
        }
        if (!(rec_connectivity > 0.0 && rec_connectivity <= 1.0)) {
            throw InvalidInput("ModelConfig: rec_connectivity must lie in (0, 1]");
        }
    }
    if (!(input_weight_scale > 0.0) || !std::isfinite(input_weight_scale)) {
        throw InvalidInput("ModelConfig: input_weight_scale must be positive");
    }
    if (activation == Activation::beta) {
        if (!beta_ranges) {
            throw InvalidInput("ModelConfig: beta activation requires beta_ranges");
        }
        beta_ranges->validate();
    }
}

bool Network::operator==(const Network& o) const
{
    auto same = [](const std::optional<Matrix>& a, const std::optional<Matrix>& b) {
        if (a.has_value() != b.has_value()) {
            return false;
        }
        return !a || (a->rows() == b->rows() && a->cols() == b->cols() && *a == *b);
    };
    return config == o.config && w_in.rows() == o.w_in.rows() &&
           w_in.cols() == o.w_in.cols() && w_in == o.w_in && same(w_rec, o.w_rec) &&
           input_beta == o.input_beta && rec_beta == o.rec_beta;
}

bool TrainedModel::operator==(const TrainedModel& o) const
{
    return network == o.network && w_out.rows() == o.w_out.rows() &&
           w_out.cols() == o.w_out.cols() && w_out == o.w_out;
}

namespace {

Matrix sparse_recurrent(std::size_t n, double connectivity, Rng& rng)
{
    const std::size_t cells = n * n;
    const auto wanted = static_cast<std::size_t>(
        std::llround(connectivity * static_cast<double>(cells)));
    const std::size_t nnz = std::clamp<std::size_t>(wanted, 1, cells);

    std::vector<std::size_t> index(cells);
    std::iota(index.begin(), index.end(), std::size_t{0});
    // Partial Fisher-Yates: the first nnz slots become the chosen positions.
    for (std::size_t i = 0; i < nnz; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, cells - 1);
        std::swap(index[i], index[pick(rng)]);
    }

    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < nnz; ++i) {
        double value = 0.0;
        while (value == 0.0) {
            value = uniform(rng, -1.0, 1.0);
        }
        w(static_cast<Eigen::Index>(index[i] / n), static_cast<Eigen::Index>(index[i] % n)) =
            value;
    }
    return w;
}

void check_input(const Network& net, const Vector& u)
{
    if (static_cast<std::size_t>(u.size()) != net.input_dim()) {
        throw InvalidInput("input has length " + std::to_string(u.size()) + ", expected " +
                           std::to_string(net.input_dim()));
    }
}

double input_product(const Network& net, std::size_t j, const Vector& u)
{
    const BetaBank& bank = *net.input_beta;
    double product = 1.0;
    for (std::size_t i = 0; i < net.input_dim() && product != 0.0; ++i) {
        const double weighted = net.w_in(static_cast<Eigen::Index>(j),
                                         static_cast<Eigen::Index>(i)) *
                                u(static_cast<Eigen::Index>(i));
        product *= beta_1d(weighted, bank.at(j, i));
    }
    return product;
}

}  // namespace

Network init_model(const ModelConfig& config)
{
    config.validate();
    Rng rng(config.seed);

    const auto n = static_cast<Eigen::Index>(config.hidden_dim);
    const auto k = static_cast<Eigen::Index>(config.input_dim);
    const double scale = config.input_weight_scale;

    Network net;
    net.config = config;
    net.w_in.resize(n, k);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < k; ++i) {
            net.w_in(j, i) = uniform(rng, -scale, scale);
        }
    }

    if (config.recurrent) {
        constexpr int kMaxAttempts = 100;
        for (int attempt = 0; attempt < kMaxAttempts && !net.w_rec; ++attempt) {
            Matrix raw = sparse_recurrent(config.hidden_dim, config.rec_connectivity, rng);
            try {
                net.w_rec = scale_to_spectral_radius(raw, config.rec_spectral_radius);
            } catch (const DegenerateMatrix&) {
                // Nilpotent draw; try another pattern.
            }
        }
        if (!net.w_rec) {
            throw DegenerateMatrix("init_model: every recurrent draw had spectral radius 0 "
                                   "after 100 attempts; raise rec_connectivity");
        }
    }

    if (config.activation == Activation::beta) {
        net.input_beta = BetaBank::sample(config.hidden_dim, config.input_dim,
                                          *config.beta_ranges, rng);
        if (config.recurrent) {
            net.rec_beta = BetaBank::sample(config.hidden_dim, config.hidden_dim,
                                            *config.beta_ranges, rng);
        }
    }
    return net;
}

Vector zero_state(const Network& net)
{
    return Vector::Zero(static_cast<Eigen::Index>(net.hidden_dim()));
}

Vector hidden_ff(const Network& net, const Vector& u)
{
    check_input(net, u);
    if (!net.is_beta()) {
        return (net.w_in * u).array().tanh().matrix();
    }
    Vector x(static_cast<Eigen::Index>(net.hidden_dim()));
    for (std::size_t j = 0; j < net.hidden_dim(); ++j) {
        x(static_cast<Eigen::Index>(j)) = input_product(net, j, u);
    }
    return x;
}

Vector hidden_rec(const Network& net, const Vector& u, const Vector& prev)
{
    if (!net.recurrent()) {
        throw ContractViolation("hidden_rec called on a feed-forward network");
    }
    check_input(net, u);
    if (static_cast<std::size_t>(prev.size()) != net.hidden_dim()) {
        throw InvalidInput("previous state has length " + std::to_string(prev.size()) +
                           ", expected " + std::to_string(net.hidden_dim()));
    }
    const Matrix& w_rec = *net.w_rec;
    if (!net.is_beta()) {
        return (net.w_in * u + w_rec * prev).array().tanh().matrix();
    }

    const BetaBank& bank = *net.rec_beta;
    const std::size_t n = net.hidden_dim();
    Vector x(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        double product = input_product(net, j, u);
        for (std::size_t k = 0; k < n && product != 0.0; ++k) {
            const double w = w_rec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            if (w == 0.0) {
                continue;  // no synapse
            }
            product *= beta_1d(w * prev(static_cast<Eigen::Index>(k)), bank.at(j, k));
        }
        x(static_cast<Eigen::Index>(j)) = product;
    }
    return x;
}

ForwardResult forward(const TrainedModel& model, const Matrix& inputs,
                      const Vector& initial_state)
{
    const Network& net = model.network;
    if (static_cast<std::size_t>(inputs.cols()) != net.input_dim()) {
        throw InvalidInput("forward: inputs have " + std::to_string(inputs.cols()) +
                           " columns, expected " + std::to_string(net.input_dim()));
    }
    if (static_cast<std::size_t>(initial_state.size()) != net.hidden_dim()) {
        throw InvalidInput("forward: initial state has wrong length");
    }

    ForwardResult result;
    result.outputs.resize(inputs.rows(), model.w_out.cols());
    Vector state = initial_state;
    for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
        const Vector u = inputs.row(t).transpose();
        state = net.recurrent() ? hidden_rec(net, u, state) : hidden_ff(net, u);
        result.outputs.row(t) = (model.w_out.transpose() * state).transpose();
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace betaelm
