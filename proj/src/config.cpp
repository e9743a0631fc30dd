#include "betaelm/config.hpp"

#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace betaelm {

std::string_view to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::tanh_elm: return "tanh-elm";
    case ModelKind::rec_tanh_elm: return "rec-tanh-elm";
    case ModelKind::elm_bbfnn: return "elm-bbfnn";
    case ModelKind::rec_elm_bbfnn: return "rec-elm-bbfnn";
    }
    return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view text)
{
    for (const ModelKind k : kAllModelKinds) {
        if (to_string(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

ModelConfig make_model_config(ModelKind kind, const ModelSettings& s, std::size_t input_dim,
                              std::size_t output_dim, std::uint64_t seed)
{
    ModelConfig c;
    c.input_dim = input_dim;
    c.hidden_dim = s.hidden;
    c.output_dim = output_dim;
    c.recurrent = kind == ModelKind::rec_tanh_elm || kind == ModelKind::rec_elm_bbfnn;
    c.activation = (kind == ModelKind::elm_bbfnn || kind == ModelKind::rec_elm_bbfnn)
                       ? Activation::beta
                       : Activation::tanh;
    if (c.activation == Activation::beta) {
        c.beta_ranges = s.beta;
    }
    c.rec_connectivity = s.connectivity;
    c.rec_spectral_radius = s.spectral_radius;
    c.input_weight_scale = s.input_scale;
    c.seed = seed;
    return c;
}

std::filesystem::path DatasetSettings::resolved_path() const
{
    const std::filesystem::path p(path);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

std::vector<LagTerm> DatasetSettings::effective_lag_terms() const
{
    if (!lag_terms.empty()) {
        return lag_terms;
    }
    std::vector<LagTerm> terms;
    const std::size_t column = targets.empty() ? 0 : targets.front();
    for (std::size_t l = 1; l <= lag; ++l) {
        terms.push_back({column, l});
    }
    return terms;
}

std::string noise_label(const NoiseLevel& level)
{
    return level ? text::format_real(*level) : std::string("clean");
}

ModelSettings ExperimentConfig::settings_for(ModelKind kind) const
{
    const auto it = overrides.find(kind);
    return it == overrides.end() ? defaults : it->second;
}

MetricKind ExperimentConfig::metric() const
{
    if (protocol.metric) {
        return *protocol.metric;
    }
    switch (dataset.task.kind) {
    case TaskKind::classification: return MetricKind::CA;
    case TaskKind::prediction: return MetricKind::RMSE;
    case TaskKind::regression: return MetricKind::MSE;
    }
    return MetricKind::RMSE;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags)
{
    return format_diagnostics(diags, "config");
}

using LineMap = std::map<std::string, std::size_t>;

struct Checker {
    const LineMap* lines;
    std::vector<Diagnostic> out;

    void fail(const std::string& key, const std::string& message)
    {
        std::size_t line = 0;
        if (lines) {
            const auto it = lines->find(key);
            if (it != lines->end()) {
                line = it->second;
            }
        }
        out.push_back({line, key + ": " + message});
    }
};

void check_model_settings(Checker& c, const std::string& section, const ModelSettings& s)
{
    if (s.hidden < 1) {
        c.fail(section + ".hidden", "hidden size must be >= 1");
    }
    if (!(s.connectivity > 0.0 && s.connectivity <= 1.0)) {
        c.fail(section + ".connectivity", "connectivity " + text::format_real(s.connectivity) +
                                              " must lie in (0, 1]");
    }
    if (!(s.spectral_radius > 0.0 && s.spectral_radius < 1.0)) {
        c.fail(section + ".spectral_radius",
               "spectral radius " + text::format_real(s.spectral_radius) +
                   " must satisfy 0 < rho < 1 (recurrent weights must be contractive)");
    }
    if (!(s.input_scale > 0.0) || !std::isfinite(s.input_scale)) {
        c.fail(section + ".input_scale", "input weight scale must be positive");
    }
    const BetaRanges& b = s.beta;
    if (b.p_lo > b.p_hi || b.p_lo < 0.0) {
        c.fail(section + ".p", "range must satisfy 0 <= lo <= hi");
    }
    if (b.q_lo > b.q_hi || b.q_lo < 0.0) {
        c.fail(section + ".q", "range must satisfy 0 <= lo <= hi");
    }
    if (b.u0_lo > b.u0_hi) {
        c.fail(section + ".u0", "range must satisfy lo <= hi");
    }
    if (b.u1_lo > b.u1_hi) {
        c.fail(section + ".u1", "range must satisfy lo <= hi");
    }
    if (b.u1_hi <= b.u0_lo) {
        c.fail(section + ".u1", "u1 range lies entirely at or below the u0 range, "
                                "so u0 < u1 can never hold");
    }
}

std::vector<Diagnostic> run_checks(const ExperimentConfig& cfg, const LineMap* lines)
{
    Checker c{lines, {}};
    const DatasetSettings& d = cfg.dataset;
    const ProtocolSettings& p = cfg.protocol;

    if (d.path.empty()) {
        c.fail("dataset.path", "required");
    }
    if (d.targets.empty()) {
        c.fail("dataset.targets", "required");
    }
    if (d.windowed()) {
        if (!d.inputs.empty()) {
            c.fail("dataset.inputs", "must be omitted when lag or lag_terms builds the inputs");
        }
        if (d.targets.size() != 1) {
            c.fail("dataset.targets", "lag windowing needs exactly one target column");
        }
        if (d.lag > 0 && !d.lag_terms.empty()) {
            c.fail("dataset.lag", "give either lag or lag_terms, not both");
        }
    } else if (d.inputs.empty()) {
        c.fail("dataset.inputs", "required (or set lag / lag_terms)");
    }
    if (d.task.kind == TaskKind::classification && d.task.num_classes < 2) {
        c.fail("dataset.classes", "classification needs classes >= 2");
    }

    if (p.models.empty()) {
        c.fail("protocol.models", "at least one model is required");
    }
    if ((p.folds > 0) == (p.holdout > 0.0)) {
        c.fail("protocol.folds", "set exactly one of folds and holdout");
    }
    if (p.folds == 1) {
        c.fail("protocol.folds", "folds must be >= 2");
    }
    if (p.holdout != 0.0 && !(p.holdout > 0.0 && p.holdout < 1.0)) {
        c.fail("protocol.holdout", "train fraction must lie in (0, 1)");
    }
    if (!p.test_segments.empty() && p.folds > 0) {
        c.fail("protocol.test_segments", "test segments apply to holdout protocols only");
    }
    for (const std::size_t s : p.test_segments) {
        if (s == 0) {
            c.fail("protocol.test_segments", "segment sizes must be >= 1");
        }
    }
    if (p.runs < 1) {
        c.fail("protocol.runs", "at least one run is required");
    }
    if (p.workers < 1) {
        c.fail("protocol.workers", "workers must be >= 1");
    }
    if (p.snr.empty()) {
        c.fail("protocol.snr", "at least one noise entry (e.g. clean) is required");
    }
    if (p.metric && *p.metric == MetricKind::CA && d.task.kind != TaskKind::classification) {
        c.fail("protocol.metric", "CA applies to classification tasks only");
    }
    if (p.metric && *p.metric != MetricKind::CA && d.task.kind == TaskKind::classification) {
        c.fail("protocol.metric", "classification tasks are scored by CA");
    }

    check_model_settings(c, "model", cfg.defaults);
    for (const auto& [kind, settings] : cfg.overrides) {
        check_model_settings(c, std::string(to_string(kind)), settings);
    }
    return c.out;
}

// Value parsers return an error message on failure.
using Setter = std::function<std::optional<std::string>(std::string_view)>;

std::optional<std::string> parse_columns(std::string_view v, std::vector<std::size_t>& out)
{
    out.clear();
    for (const std::string_view piece : text::split(v, ',')) {
        const auto dash = piece.find('-');
        if (dash == std::string_view::npos) {
            const auto col = text::parse_uint(piece);
            if (!col) {
                return "bad column index '" + std::string(piece) + "'";
            }
            out.push_back(*col);
            continue;
        }
        const auto lo = text::parse_uint(piece.substr(0, dash));
        const auto hi = text::parse_uint(piece.substr(dash + 1));
        if (!lo || !hi || *lo > *hi) {
            return "bad column range '" + std::string(piece) + "'";
        }
        for (auto c = *lo; c <= *hi; ++c) {
            out.push_back(c);
        }
    }
    if (out.empty()) {
        return std::string("empty column list");
    }
    return std::nullopt;
}

std::optional<std::string> parse_range(std::string_view v, double& lo, double& hi)
{
    const auto parts = text::split(v, ',');
    if (parts.size() != 2) {
        return std::string("expected 'lo, hi'");
    }
    const auto a = text::parse_real(parts[0]);
    const auto b = text::parse_real(parts[1]);
    if (!a || !b || !std::isfinite(*a) || !std::isfinite(*b)) {
        return std::string("expected two finite numbers");
    }
    lo = *a;
    hi = *b;
    return std::nullopt;
}

Setter real_setter(double& field)
{
    return [&field](std::string_view v) -> std::optional<std::string> {
        const auto x = text::parse_real(v);
        if (!x || !std::isfinite(*x)) {
            return "expected a finite number, got '" + std::string(v) + "'";
        }
        field = *x;
        return std::nullopt;
    };
}

template <typename Int>
Setter uint_setter(Int& field)
{
    return [&field](std::string_view v) -> std::optional<std::string> {
        const auto x = text::parse_uint(v);
        if (!x) {
            return "expected a non-negative integer, got '" + std::string(v) + "'";
        }
        field = static_cast<Int>(*x);
        return std::nullopt;
    };
}

Setter bool_setter(bool& field)
{
    return [&field](std::string_view v) -> std::optional<std::string> {
        if (v == "true" || v == "yes" || v == "1") {
            field = true;
        } else if (v == "false" || v == "no" || v == "0") {
            field = false;
        } else {
            return "expected true or false, got '" + std::string(v) + "'";
        }
        return std::nullopt;
    };
}

std::map<std::string, Setter> model_setters(ModelSettings& s)
{
    return {
        {"hidden", uint_setter(s.hidden)},
        {"connectivity", real_setter(s.connectivity)},
        {"spectral_radius", real_setter(s.spectral_radius)},
        {"input_scale", real_setter(s.input_scale)},
        {"p", [&s](std::string_view v) { return parse_range(v, s.beta.p_lo, s.beta.p_hi); }},
        {"q", [&s](std::string_view v) { return parse_range(v, s.beta.q_lo, s.beta.q_hi); }},
        {"u0", [&s](std::string_view v) { return parse_range(v, s.beta.u0_lo, s.beta.u0_hi); }},
        {"u1", [&s](std::string_view v) { return parse_range(v, s.beta.u1_lo, s.beta.u1_hi); }},
    };
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
};

std::string format_list(const std::vector<std::size_t>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + std::to_string(v[i]);
    }
    return out;
}

void write_model_section(std::ostringstream& out, const ModelSettings& s,
                         const ModelSettings* base)
{
    auto diff = [base](auto member) { return !base || member(*base); };
    if (diff([&](const ModelSettings& b) { return b.hidden != s.hidden; }))
        out << "hidden = " << s.hidden << '\n';
    if (diff([&](const ModelSettings& b) { return b.connectivity != s.connectivity; }))
        out << "connectivity = " << text::format_real(s.connectivity) << '\n';
    if (diff([&](const ModelSettings& b) { return b.spectral_radius != s.spectral_radius; }))
        out << "spectral_radius = " << text::format_real(s.spectral_radius) << '\n';
    if (diff([&](const ModelSettings& b) { return b.input_scale != s.input_scale; }))
        out << "input_scale = " << text::format_real(s.input_scale) << '\n';
    auto range = [&](const char* key, double lo, double hi, double blo, double bhi) {
        if (!base || lo != blo || hi != bhi) {
            out << key << " = " << text::format_real(lo) << ", " << text::format_real(hi) << '\n';
        }
    };
    const BetaRanges& r = s.beta;
    const BetaRanges& br = base ? base->beta : r;
    range("p", r.p_lo, r.p_hi, br.p_lo, br.p_hi);
    range("q", r.q_lo, r.q_hi, br.q_lo, br.q_hi);
    range("u0", r.u0_lo, r.u0_hi, br.u0_lo, br.u0_hi);
    range("u1", r.u1_lo, r.u1_hi, br.u1_lo, br.u1_hi);
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics))
{}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics,
                               std::string_view source)
{
    std::string out;
    for (const Diagnostic& d : diagnostics) {
        out += std::string(source);
        if (d.line > 0) {
            out += ":" + std::to_string(d.line);
        }
        out += ": " + d.message + "\n";
    }
    return out;
}

std::vector<Diagnostic> check_config(const ExperimentConfig& config)
{
    return run_checks(config, nullptr);
}

ConfigParse parse_config(std::string_view source, const std::filesystem::path& base_dir,
                         std::string_view default_name)
{
    ConfigParse result;
    std::vector<Diagnostic>& diags = result.diagnostics;

    // Pass 1: split into (section, key, value, line) entries.
    std::vector<Entry> entries;
    std::set<std::string> sections_seen;
    std::set<std::string> keys_seen;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(source)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = text::trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                diags.push_back({line_no, "malformed section header"});
                continue;
            }
            section = std::string(text::trim(line.substr(1, line.size() - 2)));
            const bool known = section == "dataset" || section == "protocol" ||
                               section == "model" || parse_model_kind(section).has_value();
            if (!known) {
                diags.push_back({line_no, "unknown section [" + section + "]"});
            } else if (!sections_seen.insert(section).second) {
                diags.push_back({line_no, "duplicate section [" + section + "]"});
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            diags.push_back({line_no, "expected 'key = value'"});
            continue;
        }
        if (section.empty()) {
            diags.push_back({line_no, "key outside of any section"});
            continue;
        }
        Entry e{section, std::string(text::trim(line.substr(0, eq))),
                std::string(text::trim(line.substr(eq + 1))), line_no};
        if (!keys_seen.insert(e.section + "." + e.key).second) {
            diags.push_back({line_no, "duplicate key '" + e.key + "' in [" + e.section + "]"});
            continue;
        }
        entries.push_back(std::move(e));
    }

    // Pass 2: apply entries. Model defaults first so per-model sections
    // start from them regardless of file order.
    ExperimentConfig cfg;
    cfg.dataset.base_dir = base_dir;
    cfg.dataset.name = std::string(default_name);
    LineMap lines;

    bool has_task = false;
    std::string classes_value;

    std::map<std::string, Setter> dataset_setters = {
        {"name", [&](std::string_view v) -> std::optional<std::string> {
             cfg.dataset.name = std::string(v);
             return std::nullopt;
         }},
        {"path", [&](std::string_view v) -> std::optional<std::string> {
             cfg.dataset.path = std::string(v);
             return std::nullopt;
         }},
        {"header", bool_setter(cfg.dataset.header)},
        {"inputs", [&](std::string_view v) { return parse_columns(v, cfg.dataset.inputs); }},
        {"targets", [&](std::string_view v) { return parse_columns(v, cfg.dataset.targets); }},
        {"task", [&](std::string_view v) -> std::optional<std::string> {
             const auto kind = parse_task_kind(v);
             if (!kind) {
                 return "unknown task '" + std::string(v) +
                        "' (classification, prediction, regression)";
             }
             cfg.dataset.task.kind = *kind;
             has_task = true;
             return std::nullopt;
         }},
        {"classes", [&](std::string_view v) -> std::optional<std::string> {
             classes_value = std::string(v);
             const auto n = text::parse_uint(v);
             if (!n) {
                 return "expected an integer, got '" + std::string(v) + "'";
             }
             cfg.dataset.task.num_classes = static_cast<int>(*n);
             return std::nullopt;
         }},
        {"normalize", [&](std::string_view v) -> std::optional<std::string> {
             const auto r = parse_norm_range(v);
             if (!r) {
                 return "unknown range '" + std::string(v) + "' (unit, symmetric, none)";
             }
             cfg.dataset.normalize = *r;
             return std::nullopt;
         }},
        {"lag", uint_setter(cfg.dataset.lag)},
        {"lag_terms", [&](std::string_view v) -> std::optional<std::string> {
             cfg.dataset.lag_terms.clear();
             for (const std::string_view piece : text::split(v, ',')) {
                 const auto at = piece.find('@');
                 const auto col = text::parse_uint(piece.substr(0, at));
                 const auto lag = at == std::string_view::npos
                                      ? std::nullopt
                                      : text::parse_uint(piece.substr(at + 1));
                 if (!col || !lag || *lag < 1) {
                     return "bad lag term '" + std::string(piece) + "' (expected column@lag)";
                 }
                 cfg.dataset.lag_terms.push_back({*col, *lag});
             }
             if (cfg.dataset.lag_terms.empty()) {
                 return std::string("empty lag term list");
             }
             return std::nullopt;
         }},
    };

    std::map<std::string, Setter> protocol_setters = {
        {"models", [&](std::string_view v) -> std::optional<std::string> {
             cfg.protocol.models.clear();
             for (const std::string_view piece : text::split(v, ',')) {
                 const auto kind = parse_model_kind(piece);
                 if (!kind) {
                     return "unknown model '" + std::string(piece) +
                            "' (tanh-elm, rec-tanh-elm, elm-bbfnn, rec-elm-bbfnn)";
                 }
                 if (std::find(cfg.protocol.models.begin(), cfg.protocol.models.end(), *kind) !=
                     cfg.protocol.models.end()) {
                     return "model '" + std::string(piece) + "' listed twice";
                 }
                 cfg.protocol.models.push_back(*kind);
             }
             return std::nullopt;
         }},
        {"folds", uint_setter(cfg.protocol.folds)},
        {"holdout", real_setter(cfg.protocol.holdout)},
        {"test_segments", [&](std::string_view v) {
             return parse_columns(v, cfg.protocol.test_segments);
         }},
        {"runs", uint_setter(cfg.protocol.runs)},
        {"seed", uint_setter(cfg.protocol.seed)},
        {"snr", [&](std::string_view v) -> std::optional<std::string> {
             cfg.protocol.snr.clear();
             for (const std::string_view piece : text::split(v, ',')) {
                 if (piece == "clean") {
                     cfg.protocol.snr.push_back(std::nullopt);
                     continue;
                 }
                 const auto db = text::parse_real(piece);
                 if (!db || !std::isfinite(*db)) {
                     return "bad SNR entry '" + std::string(piece) + "' (dB value or clean)";
                 }
                 cfg.protocol.snr.push_back(*db);
             }
             return std::nullopt;
         }},
        {"noise_apply_to", [&](std::string_view v) -> std::optional<std::string> {
             const auto t = parse_noise_target(v);
             if (!t) {
                 return "unknown partition '" + std::string(v) + "' (train, test, both)";
             }
             cfg.protocol.noise_apply_to = *t;
             return std::nullopt;
         }},
        {"metric", [&](std::string_view v) -> std::optional<std::string> {
             const auto m = parse_metric_kind(v);
             if (!m) {
                 return "unknown metric '" + std::string(v) + "' (ca, mse, rmse)";
             }
             cfg.protocol.metric = *m;
             return std::nullopt;
         }},
        {"workers", uint_setter(cfg.protocol.workers)},
        {"output", [&](std::string_view v) -> std::optional<std::string> {
             cfg.protocol.output = std::string(v);
             return std::nullopt;
         }},
    };

    auto apply = [&](std::map<std::string, Setter>& setters, const Entry& e) {
        const auto it = setters.find(e.key);
        if (it == setters.end()) {
            diags.push_back({e.line, "unknown key '" + e.key + "' in [" + e.section + "]"});
            return;
        }
        lines[e.section + "." + e.key] = e.line;
        if (auto err = it->second(e.value)) {
            diags.push_back({e.line, e.section + "." + e.key + ": " + *err});
        }
    };

    auto defaults = model_setters(cfg.defaults);
    for (const Entry& e : entries) {
        if (e.section == "model") {
            apply(defaults, e);
        }
    }
    for (const Entry& e : entries) {
        if (e.section == "dataset") {
            apply(dataset_setters, e);
        } else if (e.section == "protocol") {
            apply(protocol_setters, e);
        } else if (const auto kind = parse_model_kind(e.section)) {
            auto [it, inserted] = cfg.overrides.try_emplace(*kind, cfg.defaults);
            auto setters = model_setters(it->second);
            apply(setters, e);
        }
    }

    if (!has_task) {
        diags.push_back({0, "dataset.task: required"});
    }
    if (cfg.dataset.task.kind != TaskKind::classification && !classes_value.empty()) {
        diags.push_back({lines["dataset.classes"], "dataset.classes: only valid for classification"});
    }
    if (cfg.protocol.output.empty()) {
        cfg.protocol.output = "results/" + cfg.dataset.name;
    }
    // A section that only repeats the defaults is not an override.
    std::erase_if(cfg.overrides, [&](const auto& kv) { return kv.second == cfg.defaults; });

    if (diags.empty()) {
        auto semantic = run_checks(cfg, &lines);
        diags.insert(diags.end(), semantic.begin(), semantic.end());
    }
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return a.line < b.line;
    });
    if (diags.empty()) {
        result.config = std::move(cfg);
    }
    return result;
}

ConfigParse validate_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        ConfigParse result;
        result.diagnostics.push_back({0, "cannot open config file " + path.string()});
        return result;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path(), path.stem().string());
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    ConfigParse parsed = validate_config(path);
    if (!parsed.ok()) {
        throw ConfigError(std::move(parsed.diagnostics));
    }
    return std::move(*parsed.config);
}

std::string config_to_text(const ExperimentConfig& cfg)
{
    std::ostringstream out;
    const DatasetSettings& d = cfg.dataset;
    out << "[dataset]\n";
    out << "name = " << d.name << '\n';
    out << "path = " << d.path << '\n';
    out << "header = " << (d.header ? "true" : "false") << '\n';
    if (!d.inputs.empty()) {
        out << "inputs = " << format_list(d.inputs) << '\n';
    }
    out << "targets = " << format_list(d.targets) << '\n';
    out << "task = " << to_string(d.task.kind) << '\n';
    if (d.task.kind == TaskKind::classification) {
        out << "classes = " << d.task.num_classes << '\n';
    }
    out << "normalize = " << to_string(d.normalize) << '\n';
    if (d.lag > 0) {
        out << "lag = " << d.lag << '\n';
    }
    if (!d.lag_terms.empty()) {
        out << "lag_terms = ";
        for (std::size_t i = 0; i < d.lag_terms.size(); ++i) {
            out << (i ? ", " : "") << d.lag_terms[i].column << '@' << d.lag_terms[i].lag;
        }
        out << '\n';
    }

    const ProtocolSettings& p = cfg.protocol;
    out << "\n[protocol]\n";
    out << "models = ";
    for (std::size_t i = 0; i < p.models.size(); ++i) {
        out << (i ? ", " : "") << to_string(p.models[i]);
    }
    out << '\n';
    if (p.folds > 0) {
        out << "folds = " << p.folds << '\n';
    }
    if (p.holdout > 0.0) {
        out << "holdout = " << text::format_real(p.holdout) << '\n';
    }
    if (!p.test_segments.empty()) {
        out << "test_segments = " << format_list(p.test_segments) << '\n';
    }
    out << "runs = " << p.runs << '\n';
    out << "seed = " << p.seed << '\n';
    out << "snr = ";
    for (std::size_t i = 0; i < p.snr.size(); ++i) {
        out << (i ? ", " : "") << noise_label(p.snr[i]);
    }
    out << '\n';
    out << "noise_apply_to = " << to_string(p.noise_apply_to) << '\n';
    if (p.metric) {
        out << "metric = " << to_string(*p.metric) << '\n';
    }
    out << "workers = " << p.workers << '\n';
    out << "output = " << p.output << '\n';

    out << "\n[model]\n";
    write_model_section(out, cfg.defaults, nullptr);
    for (const auto& [kind, settings] : cfg.overrides) {
        out << "\n[" << to_string(kind) << "]\n";
        write_model_section(out, settings, &cfg.defaults);
    }
    return out.str();
}

}  // namespace betaelm
