#include "betaelm/serialize.hpp"

#include "betaelm/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace betaelm {

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kMagic = "betaelm-model";

std::string hex(double v)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
    return std::string(buf, end);
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string word()
    {
        std::string w;
        if (!(in_ >> w)) {
            throw ParseError("model file: unexpected end of input");
        }
        return w;
    }

    void expect(const std::string& want)
    {
        const std::string got = word();
        if (got != want) {
            throw ParseError("model file: expected '" + want + "', found '" + got + "'");
        }
    }

    double real() { return parse_real(word()); }

    static double parse_real(const std::string& w)
    {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v,
                                               std::chars_format::hex);
        if (ec != std::errc() || ptr != w.data() + w.size()) {
            throw ParseError("model file: bad real '" + w + "'");
        }
        return v;
    }

    std::uint64_t integer()
    {
        const std::string w = word();
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || ptr != w.data() + w.size()) {
            throw ParseError("model file: bad integer '" + w + "'");
        }
        return v;
    }

private:
    std::istream& in_;
};

void write_matrix(std::ostream& out, const char* name, const Matrix& m)
{
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out << (c ? " " : "") << hex(m(r, c));
        }
        out << '\n';
    }
}

std::optional<Matrix> read_matrix(Reader& in, const std::string& name)
{
    const std::string tag = in.word();
    if (tag == "none") {
        in.expect(name);
        return std::nullopt;
    }
    if (tag != "matrix") {
        throw ParseError("model file: expected 'matrix', found '" + tag + "'");
    }
    in.expect(name);
    const auto rows = static_cast<Eigen::Index>(in.integer());
    const auto cols = static_cast<Eigen::Index>(in.integer());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = in.real();
        }
    }
    return m;
}

void write_bank(std::ostream& out, const char* name, const std::optional<BetaBank>& bank)
{
    if (!bank) {
        out << "none " << name << '\n';
        return;
    }
    out << "bank " << name << ' ' << bank->rows() << ' ' << bank->cols() << '\n';
    for (const BetaParams& b : bank->cells()) {
        out << hex(b.p()) << ' ' << hex(b.q()) << ' ' << hex(b.u0()) << ' ' << hex(b.u1())
            << '\n';
    }
}

std::optional<BetaBank> read_bank(Reader& in, const std::string& name)
{
    const std::string tag = in.word();
    in.expect(name);
    if (tag == "none") {
        return std::nullopt;
    }
    if (tag != "bank") {
        throw ParseError("model file: expected 'bank', found '" + tag + "'");
    }
    const auto rows = static_cast<std::size_t>(in.integer());
    const auto cols = static_cast<std::size_t>(in.integer());
    std::vector<BetaParams> cells;
    cells.reserve(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        const double p = in.real();
        const double q = in.real();
        const double u0 = in.real();
        const double u1 = in.real();
        cells.push_back(BetaParams::make(p, q, u0, u1));
    }
    return BetaBank(rows, cols, std::move(cells));
}

}  // namespace

void save_model(const TrainedModel& model, std::ostream& out)
{
    const ModelConfig& c = model.network.config;
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "config " << c.input_dim << ' ' << c.hidden_dim << ' ' << c.output_dim << ' '
        << to_string(c.activation) << ' ' << (c.recurrent ? 1 : 0) << ' '
        << hex(c.rec_connectivity) << ' ' << hex(c.rec_spectral_radius) << ' '
        << hex(c.input_weight_scale) << ' ' << c.seed << '\n';
    if (c.beta_ranges) {
        const BetaRanges& r = *c.beta_ranges;
        out << "ranges";
        for (const double v : {r.p_lo, r.p_hi, r.q_lo, r.q_hi, r.u0_lo, r.u0_hi, r.u1_lo, r.u1_hi}) {
            out << ' ' << hex(v);
        }
        out << '\n';
    } else {
        out << "ranges none\n";
    }
    write_matrix(out, "w_in", model.network.w_in);
    if (model.network.w_rec) {
        write_matrix(out, "w_rec", *model.network.w_rec);
    } else {
        out << "none w_rec\n";
    }
    write_bank(out, "input_beta", model.network.input_beta);
    write_bank(out, "rec_beta", model.network.rec_beta);
    write_matrix(out, "w_out", model.w_out);
    out << "end\n";
}

TrainedModel load_model(std::istream& stream)
{
    Reader in(stream);
    in.expect(kMagic);
    const auto version = in.integer();
    if (version != kFormatVersion) {
        throw ParseError("model file: unsupported format version " + std::to_string(version));
    }

    TrainedModel model;
    ModelConfig& c = model.network.config;
    in.expect("config");
    c.input_dim = in.integer();
    c.hidden_dim = in.integer();
    c.output_dim = in.integer();
    const std::string act = in.word();
    if (act != "tanh" && act != "beta") {
        throw ParseError("model file: unknown activation '" + act + "'");
    }
    c.activation = act == "tanh" ? Activation::tanh : Activation::beta;
    c.recurrent = in.integer() != 0;
    c.rec_connectivity = in.real();
    c.rec_spectral_radius = in.real();
    c.input_weight_scale = in.real();
    c.seed = in.integer();

    in.expect("ranges");
    {
        const std::string first = in.word();
        if (first != "none") {
            BetaRanges r;
            double* fields[] = {&r.p_lo, &r.p_hi, &r.q_lo, &r.q_hi,
                                &r.u0_lo, &r.u0_hi, &r.u1_lo, &r.u1_hi};
            *fields[0] = Reader::parse_real(first);
            for (int i = 1; i < 8; ++i) {
                *fields[i] = in.real();
            }
            c.beta_ranges = r;
        }
    }

    auto w_in = read_matrix(in, "w_in");
    if (!w_in) {
        throw ParseError("model file: w_in is required");
    }
    model.network.w_in = std::move(*w_in);
    model.network.w_rec = read_matrix(in, "w_rec");
    model.network.input_beta = read_bank(in, "input_beta");
    model.network.rec_beta = read_bank(in, "rec_beta");
    auto w_out = read_matrix(in, "w_out");
    if (!w_out) {
        throw ParseError("model file: w_out is required");
    }
    model.w_out = std::move(*w_out);
    in.expect("end");

    const Network& net = model.network;
    const auto n = static_cast<Eigen::Index>(c.hidden_dim);
    if (net.w_in.rows() != n || net.w_in.cols() != static_cast<Eigen::Index>(c.input_dim) ||
        model.w_out.rows() != n || model.w_out.cols() != static_cast<Eigen::Index>(c.output_dim) ||
        net.w_rec.has_value() != c.recurrent ||
        net.input_beta.has_value() != (c.activation == Activation::beta)) {
        throw ParseError("model file: matrix shapes disagree with the config");
    }
    return model;
}

std::string model_to_string(const TrainedModel& model)
{
    std::ostringstream out;
    save_model(model, out);
    return out.str();
}

TrainedModel model_from_string(const std::string& text)
{
    std::istringstream in(text);
    return load_model(in);
}

void save_model(const TrainedModel& model, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write model file " + path.string());
    }
    save_model(model, out);
}

TrainedModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open model file " + path.string());
    }
    return load_model(in);
}

}  // namespace betaelm
