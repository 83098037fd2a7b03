// SPDX-License-Identifier: MIT
#include "trom/hyperreduction.hpp"

#include "trom/linalg.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace trom {

namespace {

Index argmax_abs(const Vector& r) {
    Index best = 0;
    double m = std::abs(r(0));
    for (Index i = 1; i < r.size(); ++i) {
        const double a = std::abs(r(i));
        if (a > m) {
            m = a;
            best = i;
        }
    }
    return best;
}

}  // namespace

SelectionIndices deim_select(const Matrix& y) {
    require(y.cols() >= 1, "deim_select needs at least one column");
    require(y.cols() <= y.rows(), "deim_select needs cols <= rows");
    require(y.allFinite(), "deim_select input contains non-finite entries");
    SelectionIndices sel;
    sel.reserve(static_cast<std::size_t>(y.cols()));
    for (Index l = 0; l < y.cols(); ++l) {
        Vector r = y.col(l);
        const double scale = r.cwiseAbs().maxCoeff();
        if (l > 0) {
            const Matrix py = select_rows(Matrix(y.leftCols(l)), sel);
            const Vector c = py.partialPivLu().solve(select_rows(Vector(y.col(l)), sel));
            r.noalias() -= y.leftCols(l) * c;
        }
        const Index i = argmax_abs(r);
        if (!(std::abs(r(i)) > 1e-12 * scale) || !std::isfinite(r(i)))
            throw NumericalError("deim_select: column " + std::to_string(l) + " is linearly dependent on the previous columns");
        sel.push_back(i);
    }
    return sel;
}

Matrix select_rows(const Matrix& m, const SelectionIndices& s) {
    Matrix out(static_cast<Index>(s.size()), m.cols());
    for (std::size_t i = 0; i < s.size(); ++i) {
        require(s[i] >= 0 && s[i] < m.rows(), "selection index out of range");
        out.row(static_cast<Index>(i)) = m.row(s[i]);
    }
    return out;
}

Vector select_rows(const Vector& v, const SelectionIndices& s) {
    Vector out(static_cast<Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        require(s[i] >= 0 && s[i] < v.size(), "selection index out of range");
        out(static_cast<Index>(i)) = v(s[i]);
    }
    return out;
}

Vector deim_apply(const Matrix& y, const SelectionIndices& s, const Vector& f) {
    require(f.size() == y.rows(), "deim_apply: f length does not match y");
    require(static_cast<Index>(s.size()) == y.cols(), "deim_apply: selection size does not match y");
    const Matrix pty = select_rows(y, s);
    Eigen::FullPivLU<Matrix> lu(pty);
    if (!lu.isInvertible()) throw NumericalError("deim_apply: P^T Y is singular");
    return y * lu.solve(select_rows(f, s));
}

Vector ls_fit(const Matrix& a, const Vector& rhs) {
    require(a.rows() >= a.cols(), "ls_fit needs rows >= cols");
    require(rhs.size() == a.rows(), "ls_fit: rhs length does not match");
    return pinv(a) * rhs;
}

double interpolation_constant(const Matrix& pty) { return spectral_norm(pinv(pty)); }

}  // namespace trom
