// SPDX-License-Identifier: MIT
#pragma once

#include "trom/core.hpp"

#include <vector>

namespace trom {

/// Distinct zero-based row indices chosen by DEIM, in selection order.
using SelectionIndices = std::vector<Index>;

/// Greedy DEIM selection on the columns of y. Ties in the argmax go to the
/// smallest row index. Throws NumericalError naming the column whose
/// interpolation residual vanishes (dependent columns).
[[nodiscard]] SelectionIndices deim_select(const Matrix& y);

/// Rows s of m, i.e. P^T m.
[[nodiscard]] Matrix select_rows(const Matrix& m, const SelectionIndices& s);
[[nodiscard]] Vector select_rows(const Vector& v, const SelectionIndices& s);

/// Oblique projection y (P^T y)^{-1} P^T f.
[[nodiscard]] Vector deim_apply(const Matrix& y, const SelectionIndices& s, const Vector& f);

/// Minimum-norm least-squares solution pinv(a) * rhs with cutoff s_1 * 1e-12.
[[nodiscard]] Vector ls_fit(const Matrix& a, const Vector& rhs);

/// Spectral norm of (P^T y)^{-1}, or of the pseudo-inverse when P^T y is
/// not square.
[[nodiscard]] double interpolation_constant(const Matrix& pty);

}  // namespace trom
