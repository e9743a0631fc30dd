#include "betaelm/dataset.hpp"

#include "betaelm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string_view>

namespace betaelm {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

Matrix select_columns(const Matrix& table, std::span<const std::size_t> columns)
{
    Matrix out(table.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.col(static_cast<Eigen::Index>(c)) = table.col(static_cast<Eigen::Index>(columns[c]));
    }
    return out;
}

std::pair<double, double> range_bounds(NormRange range)
{
    return range == NormRange::symmetric ? std::pair{-1.0, 1.0} : std::pair{0.0, 1.0};
}

Matrix map_columns(const Matrix& m, const Vector& mins, const Vector& maxs, NormRange range,
                   bool inverse)
{
    const auto [lo, hi] = range_bounds(range);
    const double mid = 0.5 * (lo + hi);
    Matrix out = m;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double span = maxs(c) - mins(c);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (span > 0.0) {
                out(r, c) = inverse ? (m(r, c) - lo) / (hi - lo) * span + mins(c)
                                    : (m(r, c) - mins(c)) / span * (hi - lo) + lo;
            } else {
                out(r, c) = inverse ? mins(c) : mid;
            }
        }
    }
    return out;
}

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> rows) const
{
    Dataset out;
    out.task = task;
    out.name = name;
    out.inputs.resize(static_cast<Eigen::Index>(rows.size()), inputs.cols());
    out.targets.resize(static_cast<Eigen::Index>(rows.size()), targets.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= size()) {
            throw InvalidInput("Dataset::subset: row index out of range");
        }
        out.inputs.row(static_cast<Eigen::Index>(i)) = inputs.row(static_cast<Eigen::Index>(rows[i]));
        out.targets.row(static_cast<Eigen::Index>(i)) =
            targets.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

void Dataset::validate() const
{
    require_finite(inputs, "dataset inputs");
    require_finite(targets, "dataset targets");
    if (inputs.rows() != targets.rows()) {
        throw InvalidInput("dataset: inputs and targets have different row counts");
    }
    if (task.kind == TaskKind::classification) {
        if (task.num_classes < 2) {
            throw InvalidInput("dataset: classification needs at least 2 classes");
        }
        for (Eigen::Index i = 0; i < targets.size(); ++i) {
            const double v = targets.data()[i];
            if (v != std::floor(v) || v < 0.0 || v >= task.num_classes) {
                throw InvalidInput("dataset: class code " + std::to_string(v) +
                                   " is not an integer in [0, " +
                                   std::to_string(task.num_classes - 1) + "]");
            }
        }
    }
}

Matrix read_csv(const std::filesystem::path& path, bool header)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool skip_header = header;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) {
            continue;
        }
        if (skip_header) {
            skip_header = false;
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = text.find(',', start);
            const std::string_view cell = trim(
                text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - start));
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
                !std::isfinite(value)) {
                throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                 ", column " + std::to_string(row.size() + 1) +
                                 ": not a finite number: '" + std::string(cell) + "'");
            }
            row.push_back(value);
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(path.string() + ": no data rows");
    }

    Matrix table(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            table(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return table;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema, const Task& task,
                 std::string name)
{
    if (schema.input_columns.empty() || schema.target_columns.empty()) {
        throw InvalidInput("load_csv: schema needs at least one input and one target column");
    }
    const Matrix table = read_csv(path, schema.header);
    const auto width = static_cast<std::size_t>(table.cols());
    for (const auto& cols : {schema.input_columns, schema.target_columns}) {
        for (const std::size_t c : cols) {
            if (c >= width) {
                throw ParseError(path.string() + ": schema names column " + std::to_string(c) +
                                 " but rows have " + std::to_string(width) + " fields");
            }
        }
    }
    Dataset ds;
    ds.inputs = select_columns(table, schema.input_columns);
    ds.targets = select_columns(table, schema.target_columns);
    ds.task = task;
    ds.name = std::move(name);
    ds.validate();
    return ds;
}

Dataset window_series(const Matrix& series, std::span<const LagTerm> terms,
                      std::size_t target_column, const Task& task, std::string name)
{
    if (terms.empty()) {
        throw InvalidInput("window_series: no lag terms");
    }
    std::size_t max_lag = 0;
    for (const LagTerm& t : terms) {
        if (t.lag < 1) {
            throw InvalidInput("window_series: lags must be >= 1");
        }
        if (t.column >= static_cast<std::size_t>(series.cols())) {
            throw InvalidInput("window_series: lag term names a missing column");
        }
        max_lag = std::max(max_lag, t.lag);
    }
    if (target_column >= static_cast<std::size_t>(series.cols())) {
        throw InvalidInput("window_series: target column out of range");
    }
    const auto length = static_cast<std::size_t>(series.rows());
    if (length <= max_lag) {
        throw InvalidInput("window_series: series shorter than the largest lag");
    }

    const auto m = static_cast<Eigen::Index>(length - max_lag);
    Dataset ds;
    ds.inputs.resize(m, static_cast<Eigen::Index>(terms.size()));
    ds.targets.resize(m, 1);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto t = static_cast<Eigen::Index>(max_lag) + r;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            ds.inputs(r, static_cast<Eigen::Index>(i)) =
                series(t - static_cast<Eigen::Index>(terms[i].lag),
                       static_cast<Eigen::Index>(terms[i].column));
        }
        ds.targets(r, 0) = series(t, static_cast<Eigen::Index>(target_column));
    }
    ds.task = task;
    ds.name = std::move(name);
    return ds;
}

std::string_view to_string(NormRange r)
{
    switch (r) {
    case NormRange::unit: return "unit";
    case NormRange::symmetric: return "symmetric";
    case NormRange::none: return "none";
    }
    return "?";
}

std::optional<NormRange> parse_norm_range(std::string_view text)
{
    if (text == "unit") return NormRange::unit;
    if (text == "symmetric") return NormRange::symmetric;
    if (text == "none") return NormRange::none;
    return std::nullopt;
}

Dataset NormStats::apply(const Dataset& ds) const
{
    if (range == NormRange::none) {
        return ds;
    }
    if (ds.inputs.cols() != input_min.size()) {
        throw InvalidInput("NormStats::apply: input width differs from fitted width");
    }
    Dataset out = ds;
    out.inputs = map_columns(ds.inputs, input_min, input_max, range, false);
    if (target_min) {
        out.targets = map_columns(ds.targets, *target_min, *target_max, range, false);
    }
    return out;
}

Dataset NormStats::invert(const Dataset& ds) const
{
    if (range == NormRange::none) {
        return ds;
    }
    Dataset out = ds;
    out.inputs = map_columns(ds.inputs, input_min, input_max, range, true);
    if (target_min) {
        out.targets = map_columns(ds.targets, *target_min, *target_max, range, true);
    }
    return out;
}

Normalized normalize(const Dataset& ds, NormRange range)
{
    NormStats stats;
    stats.range = range;
    if (range != NormRange::none) {
        stats.input_min = ds.inputs.colwise().minCoeff().transpose();
        stats.input_max = ds.inputs.colwise().maxCoeff().transpose();
        if (ds.task.kind == TaskKind::prediction) {
            stats.target_min = ds.targets.colwise().minCoeff().transpose();
            stats.target_max = ds.targets.colwise().maxCoeff().transpose();
        }
    }
    return {stats.apply(ds), stats};
}

Split split_holdout(const Dataset& ds, double train_fraction, bool shuffle, std::uint64_t seed)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidInput("split_holdout: train fraction must lie in (0, 1)");
    }
    const std::size_t m = ds.size();
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(m)));
    if (n_train == 0 || n_train >= m) {
        throw InvalidInput("split_holdout: fraction " + std::to_string(train_fraction) +
                           " of " + std::to_string(m) + " rows leaves an empty partition");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (shuffle && ds.task.kind != TaskKind::prediction) {
        Rng rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    // Shuffling picks membership; each partition keeps dataset order.
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {ds.subset(train), ds.subset(test)};
}

std::vector<FoldIndices> kfold_indices(std::size_t m, std::size_t k, bool shuffle,
                                       std::uint64_t seed)
{
    if (k < 2) {
        throw InvalidInput("kfold: k must be >= 2");
    }
    if (k > m) {
        throw InvalidInput("kfold: k = " + std::to_string(k) + " exceeds the " +
                           std::to_string(m) + " available rows");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (shuffle) {
        Rng rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    std::vector<FoldIndices> folds(k);
    std::size_t begin = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = m / k + (f < m % k ? 1 : 0);
        std::vector<char> in_test(m, 0);
        for (std::size_t i = begin; i < begin + len; ++i) {
            folds[f].test.push_back(order[i]);
            in_test[order[i]] = 1;
        }
        std::sort(folds[f].test.begin(), folds[f].test.end());
        for (std::size_t r = 0; r < m; ++r) {
            if (!in_test[r]) {
                folds[f].train.push_back(r);
            }
        }
        begin += len;
    }
    return folds;
}

std::vector<Split> kfold(const Dataset& ds, std::size_t k, std::uint64_t seed)
{
    const bool shuffle = ds.task.kind != TaskKind::prediction;
    std::vector<Split> splits;
    for (const FoldIndices& f : kfold_indices(ds.size(), k, shuffle, seed)) {
        splits.push_back({ds.subset(f.train), ds.subset(f.test)});
    }
    return splits;
}

std::string_view to_string(NoiseTarget t)
{
    switch (t) {
    case NoiseTarget::train: return "train";
    case NoiseTarget::test: return "test";
    case NoiseTarget::both: return "both";
    }
    return "?";
}

std::optional<NoiseTarget> parse_noise_target(std::string_view text)
{
    if (text == "train") return NoiseTarget::train;
    if (text == "test") return NoiseTarget::test;
    if (text == "both") return NoiseTarget::both;
    return std::nullopt;
}

Dataset add_gaussian_noise(const Dataset& ds, double snr_db, Rng& rng)
{
    if (!std::isfinite(snr_db)) {
        throw InvalidInput("add_gaussian_noise: SNR must be finite");
    }
    Dataset out = ds;
    const double ratio = std::pow(10.0, snr_db / 10.0);
    for (Eigen::Index c = 0; c < ds.inputs.cols(); ++c) {
        const double power = ds.inputs.col(c).squaredNorm() / static_cast<double>(ds.inputs.rows());
        const double sigma = std::sqrt(power / ratio);
        if (sigma == 0.0) {
            continue;
        }
        std::normal_distribution<double> noise(0.0, sigma);
        for (Eigen::Index r = 0; r < ds.inputs.rows(); ++r) {
            out.inputs(r, c) += noise(rng);
        }
    }
    return out;
}

Split inject_noise(const Split& split, const NoiseSpec& spec, Rng& rng)
{
    Split out = split;
    if (spec.apply_to != NoiseTarget::test) {
        out.train = add_gaussian_noise(split.train, spec.snr_db, rng);
    }
    if (spec.apply_to != NoiseTarget::train) {
        out.test = add_gaussian_noise(split.test, spec.snr_db, rng);
    }
    return out;
}

}  // namespace betaelm
