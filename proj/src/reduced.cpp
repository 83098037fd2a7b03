// SPDX-License-Identifier: MIT
#include "trom/reduced.hpp"

#include <Eigen/LU>

namespace trom {

Matrix integrate_reduced(const ReducedOperator& op, const SampledNonlinearity& f, const Bdf& bdf, Index steps) {
    const Index n = op.a.rows();
    const auto rows = static_cast<Index>(f.rows().size());
    const auto stencil = static_cast<Index>(f.stencil().size());
    require(op.a.cols() == n && op.beta0.size() == n, "reduced operator shape mismatch");
    require(op.q.rows() == n && op.q.cols() == rows, "reduced nonlinear map has wrong shape");
    require(op.lift.rows() == stencil && op.lift.cols() == n, "reduced lift has wrong shape");

    const Matrix eye = Matrix::Identity(n, n);
    Eigen::PartialPivLU<Matrix> first;
    Eigen::PartialPivLU<Matrix> rest;
    if (f.is_explicit()) {
        first.compute(bdf.lhs(0) * eye - op.a);
        rest.compute(bdf.lhs(1) * eye - op.a);
    }

    Matrix out(n, steps);
    Vector prev = op.beta0;
    Vector prev2 = op.beta0;
    Vector rhs(n), w(n), b;
    Matrix jac;
    for (Index k = 0; k < steps; ++k) {
        bdf.history(k, prev, prev2, rhs, w);
        f.evaluate(op.lift * w, b, jac);
        rhs += op.q * b;
        Vector x;
        if (f.is_explicit()) {
            x = (k == 0 ? first : rest).solve(rhs);
        } else {
            const Matrix sys = bdf.lhs(k) * eye - op.a - op.q * (jac * op.lift);
            Eigen::PartialPivLU<Matrix> lu(sys);
            x = lu.solve(rhs);
        }
        if (!x.allFinite()) throw NumericalError("reduced solve produced non-finite values at step " + std::to_string(k + 1));
        out.col(k) = x;
        prev2 = prev;
        prev = std::move(x);
    }
    return out;
}

double relative_l2l2(const Matrix& approx, const Matrix& reference) {
    require(approx.rows() == reference.rows() && approx.cols() == reference.cols(), "trajectory shapes differ");
    const double den = reference.squaredNorm();
    require(den > 0, "reference trajectory is zero");
    return std::sqrt((approx - reference).squaredNorm() / den);
}

}  // namespace trom
