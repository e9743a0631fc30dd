// Runs every acceptance criterion and prints one PASS/FAIL/SKIP line each.
// Exit status is nonzero if any criterion fails.

#include "betaelm/beta.hpp"
#include "betaelm/config.hpp"
#include "betaelm/dataset.hpp"
#include "betaelm/experiment.hpp"
#include "betaelm/linalg.hpp"
#include "betaelm/metrics.hpp"
#include "betaelm/training.hpp"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

using namespace betaelm;
using betaelm::testing::low_rank_matrix;
using betaelm::testing::max_abs;
using betaelm::testing::penrose_residual;
using betaelm::testing::random_matrix;
using betaelm::testing::random_sparse;

namespace fs = std::filesystem;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict pass(std::string d) { return {Outcome::pass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::fail, std::move(d)}; }
Verdict verdict(bool ok, std::string d) { return {ok ? Outcome::pass : Outcome::fail, std::move(d)}; }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double spectral_radius_oracle(const Matrix& a)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> s(a.cast<std::complex<double>>(), false);
    return s.eigenvalues().cwiseAbs().maxCoeff();
}

double span_rmse(const Matrix& pred, const Matrix& target)
{
    return std::sqrt((pred - target).squaredNorm() / static_cast<double>(pred.size()));
}

// ---------------------------------------------------------------------------

Verdict penrose_suite()
{
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    std::uniform_int_distribution<int> rows(1, 40);
    std::uniform_int_distribution<int> cols(1, 60);
    double worst = 0.0;
    int deficient = 0;
    for (int i = 0; i < 200; ++i) {
        const int m = rows(rng);
        const int n = cols(rng);
        Matrix a;
        if (i % 2 == 0) {
            a = random_matrix(m, n, rng);
        } else {
            const int r = std::uniform_int_distribution<int>(1, std::max(1, std::min(m, n) - 1))(rng);
            a = low_rank_matrix(m, n, r, rng);
            ++deficient;
        }
        const double scaled = penrose_residual(a, pseudo_inverse(a)) / (1.0 + max_abs(a));
        worst = std::max(worst, scaled);
    }
    const double secs = seconds_since(t0);
    return verdict(worst < 1e-8 && secs < 5.0,
                   fmt("worst scaled residual %.3g, %g rank-deficient, %.2f s", worst, deficient, secs));
}

Verdict beta_correctness()
{
    double worst_hand = 0.0;
    auto hand = [&](double got, double want) { worst_hand = std::max(worst_hand, std::abs(got - want)); };
    const BetaParams b22 = BetaParams::make(2, 2, 0, 1);
    hand(beta_1d(17.0, BetaParams::make(0, 0, -1, 1)), 1.0);
    hand(beta_1d(0.5, b22), 1.0);
    hand(beta_1d(0.25, b22), 0.5625);
    hand(beta_1d(-0.1, b22), 0.0);
    const std::vector<double> u{0.25, 0.25};
    const std::vector<BetaParams> two{b22, b22};
    hand(beta_nd(u, two), 0.31640625);
    const std::vector<BetaParams> ones{BetaParams::make(0, 0, 0, 1), BetaParams::make(0, 0, 0, 1)};
    hand(beta_nd(u, ones), 1.0);

    Rng rng(7);
    long out_of_bounds = 0;
    for (long i = 0; i < 1000000; ++i) {
        const int c = static_cast<int>(i % 4);
        const double p = (c == 0 || c == 1) ? uniform(rng, 0.001, 25.0) : 0.0;
        const double q = (c == 0 || c == 2) ? uniform(rng, 0.001, 25.0) : 0.0;
        const double u0 = uniform(rng, -10.0, 10.0);
        const double u1 = u0 + uniform(rng, 1e-4, 10.0);
        const double v = beta_1d(uniform(rng, -12.0, 22.0), BetaParams::make(p, q, u0, u1));
        if (!(v >= 0.0 && v <= 1.0)) {
            ++out_of_bounds;
        }
    }

    double worst_sym = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double p = uniform(rng, 0.1, 20.0);
        const double u0 = uniform(rng, -5.0, 0.0);
        const BetaParams b = BetaParams::make(p, p, u0, u0 + uniform(rng, 0.1, 10.0));
        const double half = b.u1() - b.uc();
        for (int g = 0; g <= 1000; ++g) {
            const double d = 1.2 * half * g / 1000.0;
            worst_sym = std::max(worst_sym, std::abs(beta_1d(b.uc() + d, b) - beta_1d(b.uc() - d, b)));
        }
    }
    double worst_lin = 0.0;
    const BetaParams lin = BetaParams::make(1, 0, 0, 1);
    for (int g = 1; g < 100000; ++g) {
        const double x = g / 100000.0;
        worst_lin = std::max(worst_lin, std::abs(beta_1d(x, lin) - x));
    }
    const bool ok = worst_hand <= 1e-12 && out_of_bounds == 0 && worst_sym <= 1e-12 && worst_lin <= 1e-12;
    return verdict(ok, fmt("hand %.2g, out-of-bounds %g of 1e6, symmetry %.2g, linearity %.2g",
                           worst_hand, static_cast<double>(out_of_bounds), worst_sym, worst_lin));
}

Verdict spectral_scaling()
{
    Rng rng(99);
    double worst = 0.0;
    bool pattern_ok = true;
    int made = 0;
    while (made < 50) {
        const Matrix a = random_sparse(std::uniform_int_distribution<int>(5, 60)(rng), 0.15, rng);
        if (has_acyclic_pattern(a)) {
            continue;  // radius 0 cannot be rescaled
        }
        ++made;
        for (const double target : {0.1, 0.5, 0.9, 0.99}) {
            const Matrix s = scale_to_spectral_radius(a, target);
            worst = std::max(worst, std::abs(spectral_radius_oracle(s) - target) / target);
            pattern_ok = pattern_ok && ((s.array() == 0.0) == (a.array() == 0.0)).all();
        }
    }
    return verdict(worst < 1e-6 && pattern_ok,
                   fmt("worst relative error %.3g, zero pattern ", worst) +
                       (pattern_ok ? "kept" : "changed"));
}

Verdict interpolation()
{
    double worst = 0.0;
    int full_rank = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 30;
        ModelConfig c;
        c.input_dim = 3;
        c.hidden_dim = n;
        c.seed = seed;
        Rng rng(seed + 500);
        const Matrix inputs = random_matrix(n, 3, rng);
        const Matrix targets = random_matrix(n, 1, rng);
        const Network net = init_model(c);
        const Matrix h = assemble_hidden_matrix(net, inputs).h;
        if (Eigen::FullPivLU<Matrix>(h).rank() != static_cast<Eigen::Index>(n)) {
            continue;
        }
        ++full_rank;
        const TrainResult r = train(c, inputs, targets, Task::regression());
        worst = std::max(worst, r.fit_value);
    }
    return verdict(full_rank == 20 && worst <= 1e-6,
                   fmt("%g of 20 seeds full rank, worst training RMSE %.3g", full_rank, worst));
}

Verdict plant_and_recover()
{
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const Matrix h = random_matrix(80, 25, rng);
        if (Eigen::FullPivLU<Matrix>(h).rank() != 25) {
            return fail("planted H is rank deficient");
        }
        const Matrix w = random_matrix(25, 2, rng, -3.0, 3.0);
        worst = std::max(worst, max_abs(solve_output_weights(h, h * w) - w));
    }
    return verdict(worst < 1e-8, fmt("worst max-norm error %.3g", worst));
}

// Two unit-covariance Gaussian classes centred at (0,0) and (2,2).
Dataset gaussian_classes(std::size_t m, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    Dataset ds;
    ds.inputs.resize(static_cast<Eigen::Index>(m), 2);
    ds.targets.resize(static_cast<Eigen::Index>(m), 1);
    for (Eigen::Index i = 0; i < ds.inputs.rows(); ++i) {
        const double c = coin(rng) ? 1.0 : 0.0;
        ds.inputs(i, 0) = 2.0 * c + g(rng);
        ds.inputs(i, 1) = 2.0 * c + g(rng);
        ds.targets(i, 0) = c;
    }
    ds.task = Task::classification(2);
    return ds;
}

ModelSettings classification_settings()
{
    ModelSettings s;
    s.hidden = 50;
    s.input_scale = 2.0;
    s.spectral_radius = 0.5;
    s.beta = BetaRanges{1, 2, 1, 2, -2, -0.1, 0.1, 2};
    return s;
}

// Mean test CA over `seeds` for one model at one noise level.
double gaussian_ca(ModelKind kind, std::size_t seeds, std::optional<double> snr_db)
{
    double sum = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
        Rng data_rng(s);
        const Dataset train_raw = gaussian_classes(400, data_rng);
        const Dataset test_raw = gaussian_classes(100, data_rng);
        const Normalized n = normalize(train_raw, NormRange::unit);
        Split split{n.data, n.stats.apply(test_raw)};
        if (snr_db) {
            Rng noise_rng(cell_seed(1, "noise", s, 0, noise_label(snr_db)));
            split = inject_noise(split, NoiseSpec{*snr_db, NoiseTarget::both}, noise_rng);
        }
        const ModelConfig mc = make_model_config(kind, classification_settings(), 2, 1,
                                                 cell_seed(1, to_string(kind), s, 0, "clean"));
        const TrainResult r = train(mc, split.train.inputs, split.train.targets, split.train.task);
        const Matrix out = forward(r.model, split.test.inputs, zero_state(r.model.network)).outputs;
        const Vector pred = out.col(0);
        const Vector target = split.test.targets.col(0);
        sum += classification_accuracy({pred.data(), static_cast<std::size_t>(pred.size())},
                                       {target.data(), static_cast<std::size_t>(target.size())}, 2);
    }
    return sum / static_cast<double>(seeds);
}

Verdict synthetic_classification()
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const ModelKind k : kAllModelKinds) {
        const double ca = gaussian_ca(k, 10, std::nullopt);
        ok = ok && ca >= 0.90;
        detail += std::string(to_string(k)) + fmt(" %.3f, ", ca);
    }
    const double secs = seconds_since(t0);
    return verdict(ok && secs < 10.0, detail + fmt("%.2f s", secs));
}

Verdict recurrence_memory()
{
    const ModelKind pairs[2][2] = {{ModelKind::tanh_elm, ModelKind::rec_tanh_elm},
                                   {ModelKind::elm_bbfnn, ModelKind::rec_elm_bbfnn}};
    ModelSettings st;
    st.hidden = 50;
    st.beta = BetaRanges{0, 1, 0, 1, -1, 0, 0, 1};
    int wins[2] = {0, 0};
    for (std::size_t s = 0; s < 10; ++s) {
        Rng rng(s);
        const Eigen::Index length = 1502;
        Vector u(length);
        for (Eigen::Index t = 0; t < length; ++t) {
            u(t) = uniform(rng, 0.0, 1.0);
        }
        // Input u(t), target u(t - 2).
        Dataset ds;
        ds.task = Task::prediction();
        ds.inputs = u.tail(length - 2);
        ds.targets = u.head(length - 2);
        const Split split = split_holdout(ds, 2.0 / 3.0, false, 0);
        for (int p = 0; p < 2; ++p) {
            double err[2];
            for (int r = 0; r < 2; ++r) {
                const ModelKind kind = pairs[p][r];
                const ModelConfig mc = make_model_config(kind, st, 1, 1,
                                                         cell_seed(1, to_string(kind), s, 0, "clean"));
                const TrainResult tr = train(mc, split.train.inputs, split.train.targets, ds.task);
                err[r] = span_rmse(forward(tr.model, split.test.inputs, zero_state(tr.model.network)).outputs,
                                   split.test.targets);
            }
            wins[p] += err[1] < err[0] ? 1 : 0;
        }
    }
    return verdict(wins[0] >= 8 && wins[1] >= 8,
                   fmt("rec-tanh-elm wins %g/10, rec-elm-bbfnn wins %g/10", wins[0], wins[1]));
}

Verdict noise_monotonicity()
{
    bool ok = true;
    std::string detail;
    for (const ModelKind k : kAllModelKinds) {
        const double high = gaussian_ca(k, 20, 50.0);
        const double low = gaussian_ca(k, 20, 1.0);
        ok = ok && high >= low - 0.02;
        detail += std::string(to_string(k)) + fmt(" %.3f/%.3f ", high, low);
    }
    return verdict(ok, detail + "(50 dB / 1 dB)");
}

Verdict determinism()
{
    const fs::path dir = fs::temp_directory_path() / "betaelm_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        Rng rng(3);
        const Dataset ds = gaussian_classes(120, rng);
        std::ofstream csv(dir / "data.csv");
        for (Eigen::Index i = 0; i < ds.inputs.rows(); ++i) {
            csv << ds.inputs(i, 0) << ',' << ds.inputs(i, 1) << ',' << ds.targets(i, 0) << '\n';
        }
        std::ofstream ini(dir / "toy.ini");
        ini << "[dataset]\npath = data.csv\ninputs = 0, 1\ntargets = 2\ntask = classification\n"
               "classes = 2\n[protocol]\nmodels = tanh-elm, rec-tanh-elm, elm-bbfnn, rec-elm-bbfnn\n"
               "folds = 5\nruns = 3\nseed = 42\nsnr = clean, 50, 10, 1\n[model]\nhidden = 15\n"
               "u0 = -2, -0.1\nu1 = 0.1, 2\n";
    }
    std::string raw[2];
    std::string summary[2];
    for (int i = 0; i < 2; ++i) {
        ExperimentConfig cfg = load_config(dir / "toy.ini");
        cfg.protocol.workers = i == 0 ? 1 : 4;
        const ExperimentOutput out = run_experiment(cfg);
        write_outputs(out, dir / ("out" + std::to_string(i)));
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        raw[i] = slurp(dir / ("out" + std::to_string(i)) / "raw.csv");
        summary[i] = slurp(dir / ("out" + std::to_string(i)) / "summary.csv");
    }
    fs::remove_all(dir);
    const bool ok = !raw[0].empty() && raw[0] == raw[1] && summary[0] == summary[1];
    return verdict(ok, fmt("raw.csv %g bytes, summary.csv %g bytes, byte-identical across 2 executions",
                           static_cast<double>(raw[0].size()), static_cast<double>(summary[0].size())));
}

Verdict metric_hand_checks()
{
    const std::vector<double> pred{0, 1, 1, 0};
    const std::vector<double> target{0, 1, 1, 1};
    const std::vector<double> a{1, 2};
    const std::vector<double> zero{0, 0};
    const EvalReport r = aggregate({{MetricKind::MSE, 1.0, 0, "test"}, {MetricKind::MSE, 3.0, 1, "test"}});
    double worst = 0.0;
    worst = std::max(worst, std::abs(classification_accuracy(pred, target, 2) - 0.75));
    worst = std::max(worst, std::abs(mse(a, zero) - 2.5));
    worst = std::max(worst, std::abs(improvement_rate(0.9, 0.8, MetricKind::CA) - 0.125));
    worst = std::max(worst, std::abs(r.mean - 2.0));
    worst = std::max(worst, std::abs(r.std - std::sqrt(2.0)));
    return verdict(worst <= 1e-12, fmt("worst deviation %.2g", worst));
}

Verdict breast_cancer()
{
    const fs::path source{BETAELM_SOURCE_DIR};
    const fs::path data = source / "data" / "breast_cancer.csv";
    if (!fs::exists(data)) {
        return {Outcome::skip, "data/breast_cancer.csv not present"};
    }
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = load_config(source / "configs" / "09_breast_cancer.ini");
    cfg.protocol.models = {ModelKind::rec_elm_bbfnn};
    cfg.protocol.snr = {std::nullopt};
    cfg.protocol.runs = 10;
    const ExperimentOutput out = run_experiment(cfg);
    const double ca = out.summary.front().mean;
    const double secs = seconds_since(t0);
    return verdict(ca >= 0.95 && secs < 60.0,
                   fmt("mean CA %.4f +- %.4f, %.1f s", ca, out.summary.front().std, secs));
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"1 penrose identities", penrose_suite},
        {"2 beta correctness", beta_correctness},
        {"3 spectral scaling", spectral_scaling},
        {"4 interpolation", interpolation},
        {"5 plant and recover", plant_and_recover},
        {"6 synthetic classification", synthetic_classification},
        {"7 recurrence memory", recurrence_memory},
        {"8 noise monotonicity", noise_monotonicity},
        {"9 determinism", determinism},
        {"10 metric hand checks", metric_hand_checks},
        {"11 breast cancer (optional)", breast_cancer},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = fail(std::string("exception: ") + e.what());
        }
        const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::skip ? "SKIP" : "FAIL";
        failures += v.outcome == Outcome::fail ? 1 : 0;
        std::printf("%s  criterion %s: %s\n", tag, name, v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
