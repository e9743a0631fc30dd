#pragma once

#include "betaelm/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace betaelm {

/// One scalar beta kernel. Construct through BetaParams::make, which
/// checks u0 < u1 and p, q >= 0 and derives the center.
class BetaParams {
public:
    static BetaParams make(double p, double q, double u0, double u1);

    double p() const { return p_; }
    double q() const { return q_; }
    double u0() const { return u0_; }
    double u1() const { return u1_; }
    /// (p*u1 + q*u0) / (p + q); the support midpoint when p = q = 0.
    double uc() const { return uc_; }

    bool operator==(const BetaParams&) const = default;

private:
    BetaParams(double p, double q, double u0, double u1, double uc)
        : p_(p), q_(q), u0_(u0), u1_(u1), uc_(uc)
    {}

    double p_;
    double q_;
    double u0_;
    double u1_;
    double uc_;
};

/// Closed intervals for uniform sampling of each beta parameter.
struct BetaRanges {
    double p_lo = 1.0;
    double p_hi = 2.0;
    double q_lo = 1.0;
    double q_hi = 2.0;
    double u0_lo = -5.0;
    double u0_hi = 5.0;
    double u1_lo = -5.0;
    double u1_hi = 5.0;

    /// Throws InvalidInput if some lo > hi, p_lo < 0, q_lo < 0 or a bound is
    /// not finite.
    void validate() const;

    bool operator==(const BetaRanges&) const = default;
};

/// Scalar beta function. The four (p, q) cases are dispatched on exact
/// zero comparisons; at u == u0 or u == u1 the outside value is returned.
double beta_1d(double u, const BetaParams& params);

/// Product of beta_1d over the dimensions. Throws InvalidInput on length
/// mismatch or empty input.
double beta_nd(std::span<const double> u, std::span<const BetaParams> params);

/// Draws p, q, u0, u1 uniformly from `ranges`, redrawing (u0, u1) until
/// u1 - u0 > 1e-6. Throws UnsatisfiableRanges after 10000 failed redraws.
BetaParams sample_beta_params(const BetaRanges& ranges, Rng& rng);

/// Row-major rows x cols grid of kernels, one per weighted connection.
class BetaBank {
public:
    BetaBank() = default;
    BetaBank(std::size_t rows, std::size_t cols, std::vector<BetaParams> cells);

    static BetaBank sample(std::size_t rows, std::size_t cols,
                           const BetaRanges& ranges, Rng& rng);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const BetaParams& at(std::size_t row, std::size_t col) const
    {
        return cells_[row * cols_ + col];
    }
    std::span<const BetaParams> row(std::size_t r) const
    {
        return {cells_.data() + r * cols_, cols_};
    }
    const std::vector<BetaParams>& cells() const { return cells_; }

    bool operator==(const BetaBank&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BetaParams> cells_;
};

}  // namespace betaelm
