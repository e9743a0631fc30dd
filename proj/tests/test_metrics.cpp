#include "betaelm/error.hpp"
#include "betaelm/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace betaelm;

TEST_CASE("classification_accuracy rounds and clamps")
{
    const std::vector<double> pred{0.2, 0.9, 1.6, 2.4};
    const std::vector<double> target{0, 1, 2, 2};
    CHECK(classification_accuracy(pred, target, 3) == 1.0);

    const std::vector<double> half{0.5, -0.7, 7.0, 1.49};
    const std::vector<double> codes{1, 0, 2, 1};
    CHECK(classification_accuracy(half, codes, 3) == 1.0);

    const std::vector<double> wrong{0.1, 0.1, 0.1, 0.1};
    CHECK(classification_accuracy(wrong, target, 3) == 0.25);
}

TEST_CASE("mse and rmse hand values")
{
    const std::vector<double> pred{1, 2, 3};
    const std::vector<double> target{1, 2, 5};
    CHECK(mse(pred, target) == doctest::Approx(4.0 / 3.0));
    CHECK(rmse(pred, target) == doctest::Approx(std::sqrt(4.0 / 3.0)));
    CHECK(mse(target, target) == 0.0);
}

TEST_CASE("metrics reject bad input")
{
    const std::vector<double> a{1, 2};
    const std::vector<double> b{1};
    const std::vector<double> none;
    CHECK_THROWS_AS(mse(a, b), InvalidInput);
    CHECK_THROWS_AS(mse(none, none), InvalidInput);
    CHECK_THROWS_AS(classification_accuracy(a, b, 2), InvalidInput);
    const std::vector<double> nan{NAN, 1};
    CHECK_THROWS_AS(rmse(nan, a), InvalidInput);
}

TEST_CASE("evaluate_metric dispatches on the kind")
{
    const std::vector<double> pred{0.4, 1.2};
    const std::vector<double> target{0, 1};
    CHECK(evaluate_metric(MetricKind::CA, pred, target, 2) == 1.0);
    CHECK(evaluate_metric(MetricKind::MSE, pred, target, 0) == doctest::Approx(0.1));
    CHECK(evaluate_metric(MetricKind::RMSE, pred, target, 0) == doctest::Approx(std::sqrt(0.1)));
}

TEST_CASE("improvement_rate sign convention")
{
    CHECK(improvement_rate(0.9, 0.8, MetricKind::CA) == doctest::Approx(0.125));
    CHECK(improvement_rate(0.7, 0.8, MetricKind::CA) == doctest::Approx(-0.125));
    CHECK(improvement_rate(0.05, 0.1, MetricKind::RMSE) == doctest::Approx(0.5));
    CHECK(improvement_rate(0.2, 0.1, MetricKind::MSE) == doctest::Approx(-1.0));
    CHECK(improvement_rate(0.3, 0.3, MetricKind::MSE) == 0.0);
    CHECK_THROWS_AS(improvement_rate(0.1, 0.0, MetricKind::RMSE), UndefinedRate);
}

TEST_CASE("aggregate uses the sample standard deviation")
{
    std::vector<RunResult> runs;
    for (const double v : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) {
        runs.push_back({MetricKind::MSE, v, 0, "test"});
    }
    const EvalReport r = aggregate(runs);
    CHECK(r.mean == doctest::Approx(5.0));
    CHECK(r.std == doctest::Approx(std::sqrt(32.0 / 7.0)));
    CHECK(r.per_run.size() == 8);

    const EvalReport single = aggregate({{MetricKind::CA, 0.75, 1, "test"}});
    CHECK(single.mean == 0.75);
    CHECK(single.std == 0.0);
}

TEST_CASE("aggregate is order independent")
{
    std::vector<RunResult> runs;
    for (int i = 0; i < 10; ++i) {
        runs.push_back({MetricKind::RMSE, 0.1 * i + 1e-3 / (i + 1), std::uint64_t(i), "test"});
    }
    const EvalReport forward = aggregate(runs);
    std::reverse(runs.begin(), runs.end());
    const EvalReport backward = aggregate(runs);
    CHECK(forward.mean == backward.mean);
    CHECK(forward.std == backward.std);
}

TEST_CASE("aggregate rejects empty and mixed input")
{
    CHECK_THROWS_AS(aggregate({}), InvalidInput);
    CHECK_THROWS_AS(aggregate({{MetricKind::CA, 1, 0, "test"}, {MetricKind::MSE, 1, 0, "test"}}),
                    InvalidInput);
}

TEST_CASE("task and metric names round-trip")
{
    for (const MetricKind k : {MetricKind::CA, MetricKind::MSE, MetricKind::RMSE}) {
        CHECK(parse_metric_kind(to_string(k)) == k);
    }
    CHECK(parse_metric_kind("rmse") == MetricKind::RMSE);
    CHECK_FALSE(parse_metric_kind("mae").has_value());
    for (const TaskKind k : {TaskKind::classification, TaskKind::prediction, TaskKind::regression}) {
        CHECK(parse_task_kind(to_string(k)) == k);
    }
}
