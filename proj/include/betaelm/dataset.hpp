#pragma once

#include "betaelm/linalg.hpp"
#include "betaelm/random.hpp"
#include "betaelm/task.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace betaelm {

/// M samples of K inputs and L targets. Row order is significant.
struct Dataset {
    Matrix inputs;   // M x K
    Matrix targets;  // M x L
    Task task;
    std::string name;

    std::size_t size() const { return static_cast<std::size_t>(inputs.rows()); }

    /// Rows in the given order.
    Dataset subset(std::span<const std::size_t> rows) const;

    /// Checks shapes, finiteness and, for classification, that every target
    /// is an integer code in [0, C-1].
    void validate() const;
};

struct CsvSchema {
    std::vector<std::size_t> input_columns;
    std::vector<std::size_t> target_columns;
    bool header = false;
};

/// Reads a numeric comma-separated table. Blank lines are skipped.
/// Throws ParseError with the line and column of the first bad cell.
Matrix read_csv(const std::filesystem::path& path, bool header);

/// Loads a dataset, selecting input and target columns per the schema.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema, const Task& task,
                 std::string name = {});

/// One lagged regressor: value of `column` at time t - lag.
struct LagTerm {
    std::size_t column = 0;
    std::size_t lag = 1;

    bool operator==(const LagTerm&) const = default;
};

/// Turns a series table (T x C) into supervised pairs: for every t with
/// all lags available, inputs are the lag terms and the target is
/// series(t, target_column).
Dataset window_series(const Matrix& series, std::span<const LagTerm> terms,
                      std::size_t target_column, const Task& task, std::string name = {});

enum class NormRange { unit, symmetric, none };

std::string_view to_string(NormRange r);
std::optional<NormRange> parse_norm_range(std::string_view text);

/// Per-column affine min-max maps fitted on one partition.
struct NormStats {
    NormRange range = NormRange::none;
    Vector input_min;
    Vector input_max;
    std::optional<Vector> target_min;  // prediction tasks only
    std::optional<Vector> target_max;

    /// Applies the fitted maps. Values outside the fitted range map outside
    /// the target interval; nothing is clipped.
    Dataset apply(const Dataset& ds) const;
    /// Inverse maps. Constant columns come back as their fitted value.
    Dataset invert(const Dataset& ds) const;
};

struct Normalized {
    Dataset data;
    NormStats stats;
};

/// Fits min-max maps on `ds` and applies them. Inputs are always mapped;
/// targets only for prediction tasks (class codes and regression targets
/// stay raw). Constant columns map to the range midpoint.
Normalized normalize(const Dataset& ds, NormRange range);

struct Split {
    Dataset train;
    Dataset test;
};

/// round(M * fraction) rows train. Membership is shuffled by `seed` unless
/// shuffle is off or the task is prediction; both partitions keep dataset
/// order.
Split split_holdout(const Dataset& ds, double train_fraction, bool shuffle, std::uint64_t seed);

struct FoldIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// k near-equal disjoint test folds covering 0..m-1; the first m % k folds
/// hold one extra row. Indices within a fold are ascending.
std::vector<FoldIndices> kfold_indices(std::size_t m, std::size_t k, bool shuffle,
                                       std::uint64_t seed);

/// k-fold partitions; contiguous blocks for prediction tasks, shuffled
/// otherwise.
std::vector<Split> kfold(const Dataset& ds, std::size_t k, std::uint64_t seed);

enum class NoiseTarget { train, test, both };

std::string_view to_string(NoiseTarget t);
std::optional<NoiseTarget> parse_noise_target(std::string_view text);

struct NoiseSpec {
    double snr_db = 50.0;
    NoiseTarget apply_to = NoiseTarget::both;
};

/// Adds zero-mean Gaussian noise to every input column c with variance
/// P_c / 10^(snr_db / 10), P_c being the column's mean square. Targets are
/// untouched.
Dataset add_gaussian_noise(const Dataset& ds, double snr_db, Rng& rng);

/// Noises the partitions selected by spec.apply_to (train first, then test).
Split inject_noise(const Split& split, const NoiseSpec& spec, Rng& rng);

}  // namespace betaelm
