#include "tlj/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>

namespace tlj {

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

std::vector<double> singular_values(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

std::vector<double> squared_singular_values_ascending(const Matrix& m) {
    std::vector<double> out = singular_values(m);
    for (double& x : out) x = x * x;
    std::sort(out.begin(), out.end());
    return out;
}

double unitarity_defect(const Matrix& u) {
    if (u.rows() != u.cols()) return 1.0;
    Matrix d = u.adjoint() * u - Matrix::Identity(u.cols(), u.cols());
    return operator_norm(d);
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        std::complex<double> d = r(j, j);
        double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : std::complex<double>(1.0, 0.0);
    }
    return q;
}

Matrix kron_identity(int pre, const Matrix& k, int post) {
    const Eigen::Index kr = k.rows(), kc = k.cols();
    Matrix out = Matrix::Zero(pre * kr * post, pre * kc * post);
    for (int p = 0; p < pre; ++p)
        for (Eigen::Index i = 0; i < kr; ++i)
            for (Eigen::Index j = 0; j < kc; ++j) {
                if (k(i, j) == std::complex<double>(0.0, 0.0)) continue;
                for (int q = 0; q < post; ++q)
                    out((p * kr + i) * post + q, (p * kc + j) * post + q) = k(i, j);
            }
    return out;
}

} // namespace tlj
