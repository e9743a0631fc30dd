#include "betaelm/error.hpp"
#include "betaelm/linalg.hpp"
#include "betaelm/metrics.hpp"
#include "betaelm/training.hpp"
#include "test_support.hpp"

#include <Eigen/LU>
#include <doctest.h>

#include <cmath>

using namespace betaelm;
using betaelm::testing::max_abs;
using betaelm::testing::random_matrix;

namespace {

ModelConfig small_config(Activation a, bool recurrent, std::size_t n = 12)
{
    ModelConfig c;
    c.input_dim = 2;
    c.hidden_dim = n;
    c.activation = a;
    c.recurrent = recurrent;
    if (a == Activation::beta) {
        c.beta_ranges = BetaRanges{1, 2, 1, 2, -2, -0.1, 0.1, 2};
    }
    c.seed = 17;
    return c;
}

}  // namespace

TEST_CASE("solve_output_weights recovers planted weights")
{
    Rng rng(1);
    const Matrix h = random_matrix(60, 10, rng);
    const Matrix w = random_matrix(10, 3, rng);
    const Matrix solved = solve_output_weights(h, h * w);
    CHECK(solved.rows() == 10);
    CHECK(solved.cols() == 3);
    CHECK(max_abs(solved - w) < 1e-9);
}

TEST_CASE("underdetermined solve gives the minimum-norm solution")
{
    Rng rng(2);
    const Matrix h = random_matrix(5, 12, rng);
    const Matrix y = random_matrix(5, 1, rng);
    const Matrix w = solve_output_weights(h, y);
    CHECK(max_abs(h * w - y) < 1e-10);
    // Minimum norm <=> orthogonal to the null space of h.
    const Matrix kernel = Eigen::FullPivLU<Matrix>(h).kernel();
    CHECK(kernel.cols() == 7);
    CHECK(max_abs(kernel.transpose() * w) < 1e-10);
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
        CHECK((w + 0.1 * kernel.col(c)).norm() > w.norm());
    }
}

TEST_CASE("overdetermined solve minimises the residual")
{
    Rng rng(3);
    const Matrix h = random_matrix(40, 6, rng);
    const Matrix y = random_matrix(40, 1, rng);
    const Matrix w = solve_output_weights(h, y);
    const double best = (h * w - y).norm();
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix bumped = w + 1e-3 * random_matrix(6, 1, rng);
        CHECK((h * bumped - y).norm() >= best);
    }
    // Normal equations.
    CHECK(max_abs(h.transpose() * (h * w - y)) < 1e-10);
}

TEST_CASE("assemble_hidden_matrix rows follow the state recursion")
{
    const Network net = init_model(small_config(Activation::tanh, true));
    Rng rng(4);
    const Matrix inputs = random_matrix(25, 2, rng);
    const HiddenMatrix hm = assemble_hidden_matrix(net, inputs);
    CHECK(hm.h.rows() == 25);
    CHECK(hm.h.cols() == 12);
    Vector x = zero_state(net);
    for (Eigen::Index t = 0; t < 25; ++t) {
        x = hidden_rec(net, inputs.row(t).transpose(), x);
        CHECK(max_abs(hm.h.row(t).transpose() - x) == 0.0);
    }

    const Network ff = init_model(small_config(Activation::beta, false));
    const HiddenMatrix hf = assemble_hidden_matrix(ff, inputs);
    for (Eigen::Index t = 0; t < 25; ++t) {
        CHECK(max_abs(hf.h.row(t).transpose() - hidden_ff(ff, inputs.row(t).transpose())) == 0.0);
    }
}

TEST_CASE("zero_row_fraction counts dead rows")
{
    ModelConfig c = small_config(Activation::beta, false, 4);
    c.beta_ranges = BetaRanges{1, 1, 1, 1, 0.5, 0.5, 1, 1};  // support (0.5, 1) only
    const Network net = init_model(c);
    Matrix inputs = Matrix::Zero(4, 2);  // w*0 = 0 is outside every support
    const HiddenMatrix hm = assemble_hidden_matrix(net, inputs);
    CHECK(hm.zero_row_fraction == 1.0);
}

TEST_CASE("train makes one assembly and one pseudo-inverse")
{
    Rng rng(5);
    const Matrix inputs = random_matrix(80, 2, rng);
    const Matrix targets = inputs.col(0).array().sin().matrix();
    for (const Activation a : {Activation::tanh, Activation::beta}) {
        for (const bool rec : {false, true}) {
            const auto assemblies = hidden_assembly_calls();
            const auto inverses = pseudo_inverse_calls();
            const TrainResult r = train(small_config(a, rec), inputs, targets, Task::regression());
            CHECK(hidden_assembly_calls() - assemblies == 1);
            CHECK(pseudo_inverse_calls() - inverses == 1);
            CHECK(r.fit_metric == MetricKind::RMSE);
            CHECK(r.model.w_out.rows() == 12);
            CHECK(r.model.w_out.cols() == 1);
        }
    }
}

TEST_CASE("train reports the training fit on the same data")
{
    Rng rng(6);
    const Matrix inputs = random_matrix(50, 2, rng);
    const Matrix targets = (inputs.col(0) - 0.5 * inputs.col(1)).array().tanh().matrix();
    const TrainResult r = train(small_config(Activation::tanh, false, 30), inputs, targets,
                                Task::regression());
    const ForwardResult f = forward(r.model, inputs, zero_state(r.model.network));
    const Vector pred = f.outputs.col(0);
    const Vector tgt = targets.col(0);
    const std::span<const double> p(pred.data(), 50);
    const std::span<const double> t(tgt.data(), 50);
    CHECK(r.fit_value == doctest::Approx(rmse(p, t)).epsilon(1e-12));
    CHECK(r.fit_value < 0.05);
}

TEST_CASE("train fit metric for classification is accuracy")
{
    Rng rng(7);
    const Matrix inputs = random_matrix(60, 2, rng);
    Matrix targets(60, 1);
    for (Eigen::Index i = 0; i < 60; ++i) {
        targets(i, 0) = inputs(i, 0) > 0 ? 1.0 : 0.0;
    }
    const TrainResult r = train(small_config(Activation::tanh, false, 20), inputs, targets,
                                Task::classification(2));
    CHECK(r.fit_metric == MetricKind::CA);
    CHECK(r.fit_value >= 0.9);
    CHECK(r.fit_value <= 1.0);
}

TEST_CASE("train warns when most hidden rows are zero")
{
    ModelConfig c = small_config(Activation::beta, false, 4);
    c.beta_ranges = BetaRanges{1, 1, 1, 1, 0.5, 0.5, 1, 1};
    const Matrix inputs = Matrix::Zero(10, 2);
    const Matrix targets = Matrix::Ones(10, 1);
    const TrainResult r = train(c, inputs, targets, Task::regression());
    CHECK_FALSE(r.warnings.empty());
    CHECK(max_abs(r.model.w_out) == 0.0);
}

TEST_CASE("train rejects mismatched shapes")
{
    const Matrix inputs = Matrix::Zero(10, 2);
    CHECK_THROWS_AS(train(small_config(Activation::tanh, false), inputs, Matrix::Zero(9, 1),
                          Task::regression()),
                    InvalidInput);
    CHECK_THROWS_AS(train(small_config(Activation::tanh, false), Matrix::Zero(10, 3),
                          Matrix::Zero(10, 1), Task::regression()),
                    InvalidInput);
}
