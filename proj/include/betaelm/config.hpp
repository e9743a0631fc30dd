#pragma once

#include "betaelm/beta.hpp"
#include "betaelm/dataset.hpp"
#include "betaelm/error.hpp"
#include "betaelm/model.hpp"
#include "betaelm/task.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace betaelm {

/// The four benchmarked network variants.
enum class ModelKind { tanh_elm, rec_tanh_elm, elm_bbfnn, rec_elm_bbfnn };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view text);
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::tanh_elm, ModelKind::rec_tanh_elm,
                                               ModelKind::elm_bbfnn, ModelKind::rec_elm_bbfnn};

/// Architecture settings shared by a [model] section and per-model
/// override sections.
struct ModelSettings {
    std::size_t hidden = 20;
    double connectivity = 0.1;
    double spectral_radius = 0.9;
    double input_scale = 1.0;
    BetaRanges beta;

    bool operator==(const ModelSettings&) const = default;
};

/// Builds the ModelConfig for one variant on a K-input, L-output task.
ModelConfig make_model_config(ModelKind kind, const ModelSettings& settings,
                              std::size_t input_dim, std::size_t output_dim,
                              std::uint64_t seed);

struct DatasetSettings {
    std::string name;
    std::string path;                 // as written; relative to base_dir
    std::filesystem::path base_dir;   // directory of the config file
    bool header = false;
    std::vector<std::size_t> inputs;  // column indices (empty in lag mode)
    std::vector<std::size_t> targets;
    Task task;
    NormRange normalize = NormRange::unit;
    std::size_t lag = 0;              // shorthand: target lags 1..lag
    std::vector<LagTerm> lag_terms;   // explicit column@lag regressors

    std::filesystem::path resolved_path() const;
    bool windowed() const { return lag > 0 || !lag_terms.empty(); }
    /// Lag terms in effect (expands `lag` when lag_terms is empty).
    std::vector<LagTerm> effective_lag_terms() const;

    bool operator==(const DatasetSettings&) const = default;
};

/// One noise level; nullopt is the clean run.
using NoiseLevel = std::optional<double>;
std::string noise_label(const NoiseLevel& level);

struct ProtocolSettings {
    std::vector<ModelKind> models;
    std::size_t folds = 0;                  // k-fold when > 0
    double holdout = 0.0;                   // train fraction when > 0
    std::vector<std::size_t> test_segments; // sizes of leading test sub-ranges
    std::size_t runs = 10;
    std::uint64_t seed = 1;
    std::vector<NoiseLevel> snr = {std::nullopt, 50.0, 10.0, 1.0};
    NoiseTarget noise_apply_to = NoiseTarget::both;
    std::optional<MetricKind> metric;       // default depends on the task
    std::size_t workers = 1;
    std::string output;

    bool operator==(const ProtocolSettings&) const = default;
};

struct ExperimentConfig {
    DatasetSettings dataset;
    ProtocolSettings protocol;
    ModelSettings defaults;
    std::map<ModelKind, ModelSettings> overrides;

    ModelSettings settings_for(ModelKind kind) const;
    /// CA for classification, RMSE for prediction, MSE for regression
    /// unless the protocol names one.
    MetricKind metric() const;

    bool operator==(const ExperimentConfig&) const = default;
};

struct Diagnostic {
    std::size_t line = 0;  // 0 when not tied to a line
    std::string message;
};

/// Thrown by the throwing parse entry points; carries every diagnostic.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct ConfigParse {
    std::optional<ExperimentConfig> config;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return config.has_value() && diagnostics.empty(); }
};

/// Parses and fully validates config text. Never touches the dataset file.
ConfigParse parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                         std::string_view default_name = "experiment");

/// Reads and validates a config file.
ConfigParse validate_config(const std::filesystem::path& path);

/// Throwing variant of validate_config.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Semantic checks that do not depend on line positions (used again after
/// command-line overrides).
std::vector<Diagnostic> check_config(const ExperimentConfig& config);

/// Canonical text form; parse_config(config_to_text(c)) == c.
std::string config_to_text(const ExperimentConfig& config);

/// Renders diagnostics as "<source>:<line>: <message>" lines.
std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics,
                               std::string_view source);

}  // namespace betaelm
