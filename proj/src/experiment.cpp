#include "betaelm/experiment.hpp"

#include "betaelm/error.hpp"
#include "betaelm/metrics.hpp"
#include "betaelm/model.hpp"
#include "betaelm/random.hpp"
#include "betaelm/training.hpp"
#include "text.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace betaelm {

std::uint64_t cell_seed(std::uint64_t base_seed, std::string_view tag, std::size_t run,
                        std::size_t fold, std::string_view noise)
{
    std::string key(tag);
    key += '|' + std::to_string(run) + '|' + std::to_string(fold) + '|';
    key += noise;
    return base_seed ^ stable_hash(key);
}

Dataset load_dataset(const ExperimentConfig& config)
{
    const DatasetSettings& d = config.dataset;
    if (!d.windowed()) {
        return load_csv(d.resolved_path(), CsvSchema{d.inputs, d.targets, d.header}, d.task,
                        d.name);
    }
    const Matrix series = read_csv(d.resolved_path(), d.header);
    const auto terms = d.effective_lag_terms();
    for (const LagTerm& t : terms) {
        if (t.column >= static_cast<std::size_t>(series.cols())) {
            throw ParseError(d.resolved_path().string() + ": lag term names column " +
                             std::to_string(t.column) + " but rows have " +
                             std::to_string(series.cols()) + " fields");
        }
    }
    if (d.targets.front() >= static_cast<std::size_t>(series.cols())) {
        throw ParseError(d.resolved_path().string() + ": target column out of range");
    }
    Dataset ds = window_series(series, terms, d.targets.front(), d.task, d.name);
    ds.validate();
    return ds;
}

namespace {

struct Segment {
    std::string partition;
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<Segment> test_segments(const ProtocolSettings& p, std::size_t test_size)
{
    std::vector<Segment> segs{{"test", 0, test_size}};
    if (p.test_segments.empty()) {
        return segs;
    }
    std::size_t begin = 0;
    for (const std::size_t len : p.test_segments) {
        segs.push_back({"test" + std::to_string(segs.size()), begin, begin + len});
        begin += len;
    }
    if (begin > test_size) {
        throw InvalidInput("test_segments cover " + std::to_string(begin) +
                           " rows but the test partition has " + std::to_string(test_size));
    }
    if (begin < test_size) {
        segs.push_back({"test" + std::to_string(segs.size()), begin, test_size});
    }
    return segs;
}

struct Cell {
    ModelKind model;
    std::size_t noise_index;
    std::size_t run;
    std::size_t fold;
};

struct CellOutput {
    std::vector<RawRow> raw;
    std::vector<PredictionRow> predictions;
    std::vector<std::string> warnings;
};

std::span<const double> column_span(const Matrix& m, Eigen::Index col, std::size_t begin,
                                    std::size_t end)
{
    return {m.col(col).data() + begin, end - begin};
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config, const Dataset& data)
{
    if (auto diags = check_config(config); !diags.empty()) {
        throw ConfigError(std::move(diags));
    }
    data.validate();
    const ProtocolSettings& p = config.protocol;
    const MetricKind metric = config.metric();
    const Task task = data.task;

    // Partitions per run, normalized with train-fitted statistics. Shared by
    // every model so all variants see the same data.
    std::vector<std::vector<Split>> partitions(p.runs);
    for (std::size_t r = 0; r < p.runs; ++r) {
        const std::uint64_t split_seed = cell_seed(p.seed, "split", r, 0, "");
        std::vector<Split> raw = p.folds > 0
                                     ? kfold(data, p.folds, split_seed)
                                     : std::vector<Split>{split_holdout(data, p.holdout, true,
                                                                        split_seed)};
        for (Split& s : raw) {
            const NormStats stats = normalize(s.train, config.dataset.normalize).stats;
            partitions[r].push_back({stats.apply(s.train), stats.apply(s.test)});
        }
    }
    // Segment layout errors surface before any training.
    for (const auto& run : partitions) {
        for (const Split& s : run) {
            test_segments(p, s.test.size());
        }
    }

    std::vector<Cell> cells;
    for (const ModelKind m : p.models) {
        for (std::size_t n = 0; n < p.snr.size(); ++n) {
            for (std::size_t r = 0; r < p.runs; ++r) {
                for (std::size_t f = 0; f < partitions[r].size(); ++f) {
                    cells.push_back({m, n, r, f});
                }
            }
        }
    }

    auto run_cell = [&](const Cell& cell) {
        CellOutput out;
        const std::string model_name(to_string(cell.model));
        const NoiseLevel& level = p.snr[cell.noise_index];
        const std::string label = noise_label(level);

        Split split = partitions[cell.run][cell.fold];
        if (level) {
            Rng rng(cell_seed(p.seed, "noise", cell.run, cell.fold, label));
            split = inject_noise(split, NoiseSpec{*level, p.noise_apply_to}, rng);
        }

        const std::uint64_t seed = cell_seed(p.seed, model_name, cell.run, cell.fold, label);
        const ModelConfig mc = make_model_config(
            cell.model, config.settings_for(cell.model),
            static_cast<std::size_t>(split.train.inputs.cols()),
            static_cast<std::size_t>(split.train.targets.cols()), seed);
        const TrainResult trained =
            train(mc, split.train.inputs, split.train.targets, task);
        for (const std::string& w : trained.warnings) {
            out.warnings.push_back(model_name + " noise=" + label + " run=" +
                                   std::to_string(cell.run) + " fold=" +
                                   std::to_string(cell.fold) + ": " + w);
        }

        RawRow base{data.name, model_name, label, cell.run, cell.fold, seed, "", metric, 0.0};
        RawRow fit = base;
        fit.partition = "train";
        fit.metric = trained.fit_metric;
        fit.value = trained.fit_value;
        out.raw.push_back(fit);

        const ForwardResult fwd =
            forward(trained.model, split.test.inputs, zero_state(trained.model.network));
        for (const Segment& seg : test_segments(p, split.test.size())) {
            RawRow row = base;
            row.partition = seg.partition;
            // Multi-output targets are scored column by column and averaged.
            double sum = 0.0;
            for (Eigen::Index c = 0; c < fwd.outputs.cols(); ++c) {
                sum += evaluate_metric(metric, column_span(fwd.outputs, c, seg.begin, seg.end),
                                       column_span(split.test.targets, c, seg.begin, seg.end),
                                       task.num_classes);
            }
            row.value = sum / static_cast<double>(fwd.outputs.cols());
            out.raw.push_back(row);
        }

        if (task.kind == TaskKind::prediction && cell.run == 0) {
            for (std::size_t i = 0; i < split.test.size(); ++i) {
                const auto t = static_cast<Eigen::Index>(i);
                out.predictions.push_back({data.name, model_name, label, cell.run, cell.fold, i,
                                           split.test.targets(t, 0), fwd.outputs(t, 0)});
            }
        }
        return out;
    };

    std::vector<CellOutput> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            try {
                results[i] = run_cell(cells[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = cells.size();
            }
        }
    };
    const std::size_t n_workers = std::min(p.workers, std::max<std::size_t>(cells.size(), 1));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    ExperimentOutput out;
    for (CellOutput& r : results) {
        out.raw.insert(out.raw.end(), r.raw.begin(), r.raw.end());
        out.predictions.insert(out.predictions.end(), r.predictions.begin(), r.predictions.end());
        out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    out.summary = summarize(out.raw);
    out.improvement = improvement_rates(out.summary);
    return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config)
{
    if (auto diags = check_config(config); !diags.empty()) {
        throw ConfigError(std::move(diags));
    }
    return run_experiment(config, load_dataset(config));
}

std::vector<SummaryRow> summarize(const std::vector<RawRow>& raw)
{
    struct Group {
        SummaryRow row;
        std::map<std::size_t, std::vector<double>> per_run;  // run -> fold values
    };
    std::vector<Group> groups;
    std::map<std::string, std::size_t> index;
    for (const RawRow& r : raw) {
        if (r.partition.rfind("test", 0) != 0) {
            continue;
        }
        const std::string key = r.dataset + '\n' + r.model + '\n' + r.noise + '\n' +
                                r.partition + '\n' + std::string(to_string(r.metric));
        auto [it, inserted] = index.try_emplace(key, groups.size());
        if (inserted) {
            groups.push_back({SummaryRow{r.dataset, r.model, r.noise, r.partition, r.metric,
                                         0, 0.0, 0.0},
                              {}});
        }
        groups[it->second].per_run[r.run].push_back(r.value);
    }

    std::vector<SummaryRow> out;
    for (Group& g : groups) {
        std::vector<RunResult> runs;
        for (auto& [run, folds] : g.per_run) {
            std::sort(folds.begin(), folds.end());
            double sum = 0.0;
            for (const double v : folds) {
                sum += v;
            }
            runs.push_back({g.row.metric, sum / static_cast<double>(folds.size()), run, "test"});
        }
        const EvalReport report = aggregate(std::move(runs));
        g.row.runs = report.per_run.size();
        g.row.mean = report.mean;
        g.row.std = report.std;
        out.push_back(g.row);
    }
    return out;
}

std::vector<ImprovementRow> improvement_rates(const std::vector<SummaryRow>& summary)
{
    const std::string candidate(to_string(ModelKind::rec_elm_bbfnn));
    const std::string baselines[] = {std::string(to_string(ModelKind::tanh_elm)),
                                     std::string(to_string(ModelKind::rec_tanh_elm)),
                                     std::string(to_string(ModelKind::elm_bbfnn))};
    auto find = [&](const SummaryRow& like, const std::string& model) -> const SummaryRow* {
        for (const SummaryRow& s : summary) {
            if (s.model == model && s.dataset == like.dataset && s.noise == like.noise &&
                s.partition == like.partition && s.metric == like.metric) {
                return &s;
            }
        }
        return nullptr;
    };

    std::vector<ImprovementRow> out;
    for (const SummaryRow& s : summary) {
        if (s.model != candidate) {
            continue;
        }
        ImprovementRow row{s.dataset, s.noise, s.partition, s.metric, {}, {}, {}};
        std::optional<double>* slots[] = {&row.ir1, &row.ir2, &row.ir3};
        for (int i = 0; i < 3; ++i) {
            const SummaryRow* b = find(s, baselines[i]);
            if (b && b->mean != 0.0) {
                *slots[i] = 100.0 * improvement_rate(s.mean, b->mean, s.metric);
            }
        }
        out.push_back(row);
    }
    return out;
}

namespace {

std::string opt(const std::optional<double>& v)
{
    return v ? text::format_real(*v) : std::string();
}

}  // namespace

std::string raw_csv(const std::vector<RawRow>& rows)
{
    std::string out = "dataset,model,noise,run,fold,seed,partition,metric,value\n";
    for (const RawRow& r : rows) {
        out += r.dataset + ',' + r.model + ',' + r.noise + ',' + std::to_string(r.run) + ',' +
               std::to_string(r.fold) + ',' + std::to_string(r.seed) + ',' + r.partition + ',' +
               std::string(to_string(r.metric)) + ',' + text::format_real(r.value) + '\n';
    }
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows)
{
    std::string out = "dataset,model,noise,partition,metric,runs,mean,std\n";
    for (const SummaryRow& r : rows) {
        out += r.dataset + ',' + r.model + ',' + r.noise + ',' + r.partition + ',' +
               std::string(to_string(r.metric)) + ',' + std::to_string(r.runs) + ',' +
               text::format_real(r.mean) + ',' + text::format_real(r.std) + '\n';
    }
    return out;
}

std::string improvement_csv(const std::vector<ImprovementRow>& rows)
{
    std::string out = "dataset,noise,partition,metric,ir1_pct,ir2_pct,ir3_pct\n";
    for (const ImprovementRow& r : rows) {
        out += r.dataset + ',' + r.noise + ',' + r.partition + ',' +
               std::string(to_string(r.metric)) + ',' + opt(r.ir1) + ',' + opt(r.ir2) + ',' +
               opt(r.ir3) + '\n';
    }
    return out;
}

std::string predictions_csv(const std::vector<PredictionRow>& rows)
{
    std::string out = "dataset,model,noise,run,fold,index,target,prediction\n";
    for (const PredictionRow& r : rows) {
        out += r.dataset + ',' + r.model + ',' + r.noise + ',' + std::to_string(r.run) + ',' +
               std::to_string(r.fold) + ',' + std::to_string(r.index) + ',' +
               text::format_real(r.target) + ',' + text::format_real(r.prediction) + '\n';
    }
    return out;
}

std::vector<RawRow> parse_raw_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) ||
        text::trim(line) != "dataset,model,noise,run,fold,seed,partition,metric,value") {
        throw ParseError(path.string() + ": line 1: not a raw results header");
    }
    std::vector<RawRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        const auto f = text::split(line, ',');
        auto bad = [&](const std::string& what) {
            return ParseError(path.string() + ": line " + std::to_string(line_no) + ": " + what);
        };
        if (f.size() != 9) {
            throw bad("expected 9 fields, found " + std::to_string(f.size()));
        }
        const auto run = text::parse_uint(f[3]);
        const auto fold = text::parse_uint(f[4]);
        const auto seed = text::parse_uint(f[5]);
        const auto metric = parse_metric_kind(f[7]);
        const auto value = text::parse_real(f[8]);
        if (!run || !fold || !seed || !metric || !value) {
            throw bad("malformed field");
        }
        rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), *run, *fold,
                        *seed, std::string(f[6]), *metric, *value});
    }
    return rows;
}

void write_outputs(const ExperimentOutput& out, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto write = [&](const char* name, const std::string& body) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) {
            throw Error("cannot write " + (dir / name).string());
        }
        f << body;
    };
    write("raw.csv", raw_csv(out.raw));
    write("summary.csv", summary_csv(out.summary));
    write("improvement.csv", improvement_csv(out.improvement));
    if (!out.predictions.empty()) {
        write("predictions.csv", predictions_csv(out.predictions));
    }
}

}  // namespace betaelm
