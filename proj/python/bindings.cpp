#include "betaelm/beta.hpp"
#include "betaelm/config.hpp"
#include "betaelm/error.hpp"
#include "betaelm/experiment.hpp"
#include "betaelm/linalg.hpp"
#include "betaelm/metrics.hpp"
#include "betaelm/serialize.hpp"
#include "betaelm/training.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace betaelm;

namespace {

std::span<const double> as_span(const Vector& v)
{
    return {v.data(), static_cast<std::size_t>(v.size())};
}

ModelConfig make_config(const std::string& model, std::size_t input_dim, std::size_t hidden,
                        std::size_t output_dim, std::uint64_t seed, double connectivity,
                        double spectral_radius, double input_scale,
                        const std::optional<BetaRanges>& beta)
{
    const auto kind = parse_model_kind(model);
    if (!kind) {
        throw InvalidInput("unknown model '" + model + "'");
    }
    ModelSettings s;
    s.hidden = hidden;
    s.connectivity = connectivity;
    s.spectral_radius = spectral_radius;
    s.input_scale = input_scale;
    if (beta) {
        s.beta = *beta;
    }
    return make_model_config(*kind, s, input_dim, output_dim, seed);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "ELM-trained tanh and beta basis function networks";

    // Translators run most recent first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<DegenerateMatrix>(m, "DegenerateMatrix", PyExc_ArithmeticError);
    py::register_exception<UndefinedRate>(m, "UndefinedRate", PyExc_ArithmeticError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<BetaParams>(m, "BetaParams")
        .def(py::init(&BetaParams::make), py::arg("p"), py::arg("q"), py::arg("u0"), py::arg("u1"))
        .def_property_readonly("p", &BetaParams::p)
        .def_property_readonly("q", &BetaParams::q)
        .def_property_readonly("u0", &BetaParams::u0)
        .def_property_readonly("u1", &BetaParams::u1)
        .def_property_readonly("uc", &BetaParams::uc)
        .def("__call__", [](const BetaParams& b, double u) { return beta_1d(u, b); });

    py::class_<BetaRanges>(m, "BetaRanges")
        .def(py::init([](std::pair<double, double> p, std::pair<double, double> q,
                         std::pair<double, double> u0, std::pair<double, double> u1) {
                 BetaRanges r{p.first, p.second, q.first, q.second,
                              u0.first, u0.second, u1.first, u1.second};
                 r.validate();
                 return r;
             }),
             py::arg("p") = std::pair{1.0, 2.0}, py::arg("q") = std::pair{1.0, 2.0},
             py::arg("u0") = std::pair{-5.0, 5.0}, py::arg("u1") = std::pair{-5.0, 5.0});

    m.def("beta_1d", &beta_1d, py::arg("u"), py::arg("params"));
    m.def("beta_nd",
          [](const std::vector<double>& u, const std::vector<BetaParams>& params) {
              return beta_nd(u, params);
          },
          py::arg("u"), py::arg("params"));

    m.def("pseudo_inverse", &pseudo_inverse, py::arg("a"));
    m.def("spectral_radius", &spectral_radius, py::arg("a"));
    m.def("scale_to_spectral_radius", &scale_to_spectral_radius, py::arg("a"), py::arg("target"));
    m.def("solve_output_weights", &solve_output_weights, py::arg("h"), py::arg("targets"));

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_property_readonly("w_in", [](const TrainedModel& t) { return t.network.w_in; })
        .def_property_readonly("w_rec", [](const TrainedModel& t) { return t.network.w_rec; })
        .def_property_readonly("w_out", [](const TrainedModel& t) { return t.w_out; })
        .def_property_readonly("recurrent", [](const TrainedModel& t) { return t.network.recurrent(); })
        .def("predict",
             [](const TrainedModel& t, const Matrix& inputs) {
                 return forward(t, inputs, zero_state(t.network)).outputs;
             },
             py::arg("inputs"), "Outputs for a sequence starting from the zero state.")
        .def("hidden_matrix",
             [](const TrainedModel& t, const Matrix& inputs) {
                 return assemble_hidden_matrix(t.network, inputs).h;
             },
             py::arg("inputs"))
        .def("dumps", &model_to_string)
        .def_static("loads", &model_from_string, py::arg("text"))
        .def("__eq__", [](const TrainedModel& a, const TrainedModel& b) { return a == b; });

    m.def(
        "train",
        [](const std::string& model, const Matrix& inputs, const Matrix& targets, std::size_t hidden,
           std::uint64_t seed, int num_classes, double connectivity, double spectral_radius,
           double input_scale, const std::optional<BetaRanges>& beta) {
            const ModelConfig c = make_config(model, static_cast<std::size_t>(inputs.cols()), hidden,
                                              static_cast<std::size_t>(targets.cols()), seed,
                                              connectivity, spectral_radius, input_scale, beta);
            const Task task = num_classes > 0 ? Task::classification(num_classes) : Task::regression();
            TrainResult r = train(c, inputs, targets, task);
            return py::make_tuple(std::move(r.model), r.fit_value, r.warnings);
        },
        py::arg("model"), py::arg("inputs"), py::arg("targets"), py::arg("hidden") = 20,
        py::arg("seed") = 0, py::arg("num_classes") = 0, py::arg("connectivity") = 0.1,
        py::arg("spectral_radius") = 0.9, py::arg("input_scale") = 1.0, py::arg("beta") = py::none(),
        "Trains one network. Returns (model, training fit, warnings); the fit is CA when "
        "num_classes > 0, else RMSE.");

    m.def("classification_accuracy",
          [](const Vector& p, const Vector& t, int c) { return classification_accuracy(as_span(p), as_span(t), c); },
          py::arg("pred"), py::arg("target"), py::arg("num_classes"));
    m.def("mse", [](const Vector& p, const Vector& t) { return mse(as_span(p), as_span(t)); },
          py::arg("pred"), py::arg("target"));
    m.def("rmse", [](const Vector& p, const Vector& t) { return rmse(as_span(p), as_span(t)); },
          py::arg("pred"), py::arg("target"));
    m.def(
        "improvement_rate",
        [](double candidate, double baseline, const std::string& metric) {
            const auto kind = parse_metric_kind(metric);
            if (!kind) {
                throw InvalidInput("unknown metric '" + metric + "'");
            }
            return improvement_rate(candidate, baseline, *kind);
        },
        py::arg("candidate"), py::arg("baseline"), py::arg("metric"));

    m.def(
        "validate_config",
        [](const std::filesystem::path& path) {
            const ConfigParse p = validate_config(path);
            if (!p.ok()) {
                return py::make_tuple(false, format_diagnostics(p.diagnostics, path.string()));
            }
            return py::make_tuple(true, config_to_text(*p.config));
        },
        py::arg("path"), "Returns (ok, canonical text or diagnostics).");

    m.def(
        "run_experiment",
        [](const std::filesystem::path& path, const std::optional<std::filesystem::path>& output) {
            ExperimentOutput out;
            {
                py::gil_scoped_release release;
                out = run_experiment(load_config(path));
                if (output) {
                    write_outputs(out, *output);
                }
            }
            py::list rows;
            for (const SummaryRow& s : out.summary) {
                py::dict d;
                d["dataset"] = s.dataset;
                d["model"] = s.model;
                d["noise"] = s.noise;
                d["partition"] = s.partition;
                d["metric"] = std::string(to_string(s.metric));
                d["runs"] = s.runs;
                d["mean"] = s.mean;
                d["std"] = s.std;
                rows.append(d);
            }
            return rows;
        },
        py::arg("config"), py::arg("output") = py::none(),
        "Runs a config file and returns the summary rows; writes the CSVs when output is given.");
}
