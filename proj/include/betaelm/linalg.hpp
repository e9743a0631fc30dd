#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>

namespace betaelm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws InvalidInput if the matrix is empty or holds NaN/Inf.
void require_finite(const Matrix& a, std::string_view what);

/// Moore-Penrose pseudo-inverse via thin SVD. Singular values below
/// max(m, n) * eps * sigma_max are treated as zero.
Matrix pseudo_inverse(const Matrix& a);

/// Largest eigenvalue modulus. Matrices whose nonzero pattern is acyclic
/// (strictly triangular up to a permutation) are nilpotent and return 0
/// exactly.
double spectral_radius(const Matrix& a);

/// Rescales `a` so that its spectral radius equals `target` in (0, 1).
/// Throws DegenerateMatrix when the spectral radius of `a` is zero.
Matrix scale_to_spectral_radius(const Matrix& a, double target);

/// True when the directed graph of nonzero entries has no cycle.
bool has_acyclic_pattern(const Matrix& a);

/// Number of pseudo_inverse calls made on the current thread.
std::uint64_t pseudo_inverse_calls();

}  // namespace betaelm
