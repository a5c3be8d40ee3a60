#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace tlj {

using Matrix = Eigen::MatrixXcd;

/// Largest singular value; the operator norm used in all reports.
double operator_norm(const Matrix& m);

/// Singular values, descending (Eigen's order).
std::vector<double> singular_values(const Matrix& m);

/// Squared singular values of m, sorted ascending. Equal to the spectrum of
/// the positive operator m^T conj(m); computing through the SVD is the
/// numerically stable route.
std::vector<double> squared_singular_values_ascending(const Matrix& m);

double unitarity_defect(const Matrix& u);

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
/// phase fix on R's diagonal.
Matrix random_unitary(int n, std::mt19937_64& rng);

/// Column-major Kronecker product I_pre (x) k (x) I_post with the leftmost
/// tensor factor most significant.
Matrix kron_identity(int pre, const Matrix& k, int post);

} // namespace tlj
