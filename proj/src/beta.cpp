#include "betaelm/beta.hpp"

#include "betaelm/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace betaelm {

BetaParams BetaParams::make(double p, double q, double u0, double u1)
{
    if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(u0) || !std::isfinite(u1)) {
        throw InvalidInput("BetaParams: parameters must be finite");
    }
    if (p < 0.0 || q < 0.0) {
        throw InvalidInput("BetaParams: p and q must be non-negative");
    }
    if (!(u0 < u1)) {
        throw InvalidInput("BetaParams: u0 must be strictly below u1");
    }
    const double uc = (p + q > 0.0) ? (p * u1 + q * u0) / (p + q) : 0.5 * (u0 + u1);
    return BetaParams(p, q, u0, u1, uc);
}

void BetaRanges::validate() const
{
    const double bounds[] = {p_lo, p_hi, q_lo, q_hi, u0_lo, u0_hi, u1_lo, u1_hi};
    for (const double b : bounds) {
        if (!std::isfinite(b)) {
            throw InvalidInput("BetaRanges: bounds must be finite");
        }
    }
    if (p_lo > p_hi || q_lo > q_hi || u0_lo > u0_hi || u1_lo > u1_hi) {
        throw InvalidInput("BetaRanges: every lower bound must be <= its upper bound");
    }
    if (p_lo < 0.0 || q_lo < 0.0) {
        throw InvalidInput("BetaRanges: p and q bounds must be non-negative");
    }
}

double beta_1d(double u, const BetaParams& b)
{
    const bool p_pos = b.p() > 0.0;
    const bool q_pos = b.q() > 0.0;

    if (!p_pos && !q_pos) {
        return 1.0;
    }
    if (u <= b.u0()) {
        // Only the decreasing (p = 0) shape saturates at 1 on the left.
        return p_pos ? 0.0 : 1.0;
    }
    if (u >= b.u1()) {
        return q_pos ? 0.0 : 1.0;
    }

    double value = 1.0;
    if (p_pos) {
        const double left = (u - b.u0()) / (b.uc() - b.u0());
        assert(left > 0.0);
        value *= std::pow(left, b.p());
    }
    if (q_pos) {
        const double right = (u - b.u1()) / (b.uc() - b.u1());
        assert(right > 0.0);
        value *= std::pow(right, b.q());
    }
    // The center is the maximiser with value 1; clamp rounding overshoot.
    return std::min(value, 1.0);
}

double beta_nd(std::span<const double> u, std::span<const BetaParams> params)
{
    if (u.empty() || u.size() != params.size()) {
        throw InvalidInput("beta_nd: expected equal non-zero lengths, got " +
                           std::to_string(u.size()) + " and " +
                           std::to_string(params.size()));
    }
    double product = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        product *= beta_1d(u[i], params[i]);
        if (product == 0.0) {
            break;
        }
    }
    return product;
}

BetaParams sample_beta_params(const BetaRanges& ranges, Rng& rng)
{
    ranges.validate();
    const double p = uniform(rng, ranges.p_lo, ranges.p_hi);
    const double q = uniform(rng, ranges.q_lo, ranges.q_hi);
    constexpr int kMaxDraws = 10000;
    constexpr double kMinWidth = 1e-6;
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        const double u0 = uniform(rng, ranges.u0_lo, ranges.u0_hi);
        const double u1 = uniform(rng, ranges.u1_lo, ranges.u1_hi);
        if (u1 - u0 > kMinWidth) {
            return BetaParams::make(p, q, u0, u1);
        }
    }
    throw UnsatisfiableRanges("sample_beta_params: no u0 < u1 after 10000 draws; "
                              "check the u0/u1 ranges");
}

BetaBank::BetaBank(std::size_t rows, std::size_t cols, std::vector<BetaParams> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells))
{
    if (cells_.size() != rows_ * cols_) {
        throw InvalidInput("BetaBank: cell count does not match rows*cols");
    }
}

BetaBank BetaBank::sample(std::size_t rows, std::size_t cols, const BetaRanges& ranges,
                          Rng& rng)
{
    std::vector<BetaParams> cells;
    cells.reserve(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        cells.push_back(sample_beta_params(ranges, rng));
    }
    return BetaBank(rows, cols, std::move(cells));
}

}  // namespace betaelm
