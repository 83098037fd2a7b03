// SPDX-License-Identifier: MIT
#pragma once

#include "trom/model.hpp"

namespace trom {

/// Reduced dynamics beta' = a beta + q f_rows(lift beta): the sampled rows
/// of the nonlinear term are read from the stencil entries lift * beta and
/// mapped back by q.
struct ReducedOperator {
    Matrix a;     // n x n
    Matrix q;     // n x rows
    Matrix lift;  // stencil x n
    Vector beta0;
};

/// Integrates with the model's time scheme; column k of the result is the
/// coefficient vector after step k+1.
[[nodiscard]] Matrix integrate_reduced(const ReducedOperator& op, const SampledNonlinearity& f, const Bdf& bdf, Index steps);

/// Relative discrete L2(0,T;L2) error sqrt(sum ||u - v||^2 / sum ||u||^2)
/// over the columns of the reference u.
[[nodiscard]] double relative_l2l2(const Matrix& approx, const Matrix& reference);

}  // namespace trom
