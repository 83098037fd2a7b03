// SPDX-License-Identifier: MIT
#include "trom/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace trom {

Svd thin_svd(const Matrix& a, bool want_v) {
    require(a.rows() > 0 && a.cols() > 0, "svd of an empty matrix");
    const unsigned opts = want_v ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : static_cast<unsigned>(Eigen::ComputeThinU);
    Eigen::BDCSVD<Matrix> svd(a, opts);
    if (svd.info() != Eigen::Success) throw NumericalError("svd did not converge");
    Svd out{svd.matrixU(), svd.singularValues(), want_v ? Matrix(svd.matrixV()) : Matrix()};
    if (!out.s.allFinite()) throw NumericalError("svd produced non-finite singular values");
    return out;
}

Svd left_svd(const Matrix& a) {
    require(a.rows() > 0 && a.cols() > 0, "svd of an empty matrix");
    return thin_svd(a, false);
}

Index truncation_rank(const Vector& s, double budget) {
    require(s.size() > 0, "no singular values to truncate");
    require(budget >= 0, "truncation budget must be non-negative");
    const double limit = budget * budget;
    double tail = 0.0;
    Index r = s.size();
    while (r > 1) {
        const double next = tail + s(r - 1) * s(r - 1);
        if (next > limit && s(r - 1) > 0.0) break;
        tail = next;
        --r;
    }
    return r;
}

Matrix pinv(const Matrix& a, double rcond) {
    if (a.size() == 0) return Matrix(a.cols(), a.rows());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double cut = s.size() > 0 ? s(0) * rcond : 0.0;
    Vector inv = Vector::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > cut && s(i) > 0.0) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

ThinQr thin_qr(const Matrix& a) {
    require(a.rows() >= a.cols(), "thin qr needs rows >= cols");
    Eigen::HouseholderQR<Matrix> qr(a);
    const Index k = a.cols();
    ThinQr out{qr.householderQ() * Matrix::Identity(a.rows(), k), qr.matrixQR().topRows(k).triangularView<Eigen::Upper>()};
    for (Index i = 0; i < k; ++i) {
        if (out.r(i, i) < 0) {
            out.r.row(i) *= -1.0;
            out.q.col(i) *= -1.0;
        }
    }
    return out;
}

double subspace_angle(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "subspace angle needs equal row counts");
    // sin of the largest angle = norm of the component of b outside span(a).
    const Matrix resid = b - a * (a.transpose() * b);
    const double s = std::min(1.0, spectral_norm(resid));
    return std::asin(s);
}

}  // namespace trom
