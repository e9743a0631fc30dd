#include "betaelm/linalg.hpp"

#include "betaelm/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace betaelm {

namespace {
thread_local std::uint64_t g_pinv_calls = 0;
}

void require_finite(const Matrix& a, std::string_view what)
{
    if (a.rows() < 1 || a.cols() < 1) {
        throw InvalidInput(std::string(what) + ": matrix must be at least 1x1");
    }
    if (!a.allFinite()) {
        throw InvalidInput(std::string(what) + ": matrix contains NaN or Inf");
    }
}

Matrix pseudo_inverse(const Matrix& a)
{
    require_finite(a, "pseudo_inverse");
    ++g_pinv_calls;

    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double rtol = static_cast<double>(std::max(a.rows(), a.cols())) *
                        std::numeric_limits<double>::epsilon() * sigma_max;

    Vector inv = Vector::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > rtol && sigma(i) > 0.0) {
            inv(i) = 1.0 / sigma(i);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

bool has_acyclic_pattern(const Matrix& a)
{
    const auto n = a.rows();
    // Kahn's algorithm on edges k -> j for every a(j, k) != 0.
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (a(j, k) != 0.0) {
                ++indegree[static_cast<std::size_t>(j)];
            }
        }
    }
    std::vector<Eigen::Index> ready;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (indegree[static_cast<std::size_t>(j)] == 0) {
            ready.push_back(j);
        }
    }
    Eigen::Index removed = 0;
    while (!ready.empty()) {
        const Eigen::Index k = ready.back();
        ready.pop_back();
        ++removed;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (a(j, k) != 0.0 && --indegree[static_cast<std::size_t>(j)] == 0) {
                ready.push_back(j);
            }
        }
    }
    return removed == n;
}

double spectral_radius(const Matrix& a)
{
    require_finite(a, "spectral_radius");
    if (a.rows() != a.cols()) {
        throw InvalidInput("spectral_radius: matrix must be square, got " +
                           std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (has_acyclic_pattern(a)) {
        return 0.0;
    }
    Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw InvalidInput("spectral_radius: eigenvalue iteration did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix scale_to_spectral_radius(const Matrix& a, double target)
{
    if (!(target > 0.0 && target < 1.0)) {
        throw InvalidInput("scale_to_spectral_radius: target must lie in (0, 1)");
    }
    const double rho = spectral_radius(a);
    if (rho == 0.0) {
        throw DegenerateMatrix(
            "scale_to_spectral_radius: spectral radius is zero, cannot rescale");
    }
    return a * (target / rho);
}

std::uint64_t pseudo_inverse_calls()
{
    return g_pinv_calls;
}

}  // namespace betaelm
