// SPDX-License-Identifier: MIT
#pragma once

#include "trom/core.hpp"

namespace trom {

/// Thin SVD a = u * diag(s) * v^T with s non-increasing.
struct Svd {
    Matrix u;
    Vector s;
    Matrix v;
};

/// Dense thin SVD. With want_v == false, v is left empty.
[[nodiscard]] Svd thin_svd(const Matrix& a, bool want_v = true);

/// Left singular vectors and all singular values of a, without forming the
/// right factor. A direct SVD keeps small singular values accurate, which
/// rank decisions rely on.
[[nodiscard]] Svd left_svd(const Matrix& a);

/// Smallest r >= 1 whose discarded tail sum_{i>r} s_i^2 is <= budget^2.
/// Trailing zero singular values are always dropped.
[[nodiscard]] Index truncation_rank(const Vector& s, double budget);

/// Moore-Penrose pseudo-inverse; singular values below rcond * s_1 are
/// treated as zero.
[[nodiscard]] Matrix pinv(const Matrix& a, double rcond = 1e-12);

/// Largest singular value.
[[nodiscard]] double spectral_norm(const Matrix& a);

/// Q factor of a thin QR decomposition plus R, with sign fixed so that
/// diag(R) >= 0.
struct ThinQr {
    Matrix q;
    Matrix r;
};
[[nodiscard]] ThinQr thin_qr(const Matrix& a);

/// Largest principal angle (radians) between the column spans of two
/// matrices with orthonormal columns.
[[nodiscard]] double subspace_angle(const Matrix& a, const Matrix& b);

}  // namespace trom
