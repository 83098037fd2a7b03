// SPDX-License-Identifier: MIT
#pragma once

#include "trom/container.hpp"
#include "trom/tensor.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace trom {

/// Tensor train t(i0,...,i_{d-1}) = sum U(i0,:) S_1(:,i1,:) ... S_{d-2}(:,i_{d-2},:) V(i_{d-1},:)^T.
/// U has orthonormal columns, each core is left-orthogonal, and V has
/// mutually orthogonal columns whose norms are the last singular values.
struct TTDecomposition {
    std::vector<Index> dims;
    Matrix u;
    std::vector<DenseTensor> cores;  // ranks[i] x dims[i+1] x ranks[i+1]
    Matrix v;
    double eps = 0.0;
    /// sqrt of the discarded energy over ||t||; equals the true relative error.
    double error_estimate = 0.0;

    /// [R_1, ..., R_{d-1}]
    [[nodiscard]] std::vector<Index> ranks() const;
    /// Number of stored entries.
    [[nodiscard]] Index storage() const;
};

/// Tucker format t = core x_0 F_0 x_1 F_1 ... with orthonormal factors.
struct TuckerDecomposition {
    std::vector<Index> dims;
    DenseTensor core;
    std::vector<Matrix> factors;  // dims[k] x ranks[k]
    double eps = 0.0;
    /// sqrt of the summed per-mode discarded energy over ||t|| (an upper bound).
    double error_bound = 0.0;

    [[nodiscard]] std::vector<Index> ranks() const;
    [[nodiscard]] Index storage() const;
};

/// Canonical polyadic format t = sum_r a_0^r o ... o a_{d-1}^r. Term weights
/// live in the last factor; the other factors have unit-norm columns.
struct CPDecomposition {
    std::vector<Index> dims;
    std::vector<Matrix> factors;  // dims[k] x rank
    Index rank = 0;
    double relative_error = 0.0;
    Index iterations = 0;
    bool converged = false;
    std::vector<double> error_history;

    [[nodiscard]] Index storage() const;
};

using Decomposition = std::variant<TTDecomposition, TuckerDecomposition, CPDecomposition>;

/// TT-SVD: left-to-right sweep of truncated SVDs, each with budget
/// eps*||t||/sqrt(d-1). Requires order >= 2 and 0 <= eps < 1.
[[nodiscard]] TTDecomposition tt_svd(const DenseTensor& t, double eps);

/// Truncated higher-order SVD with per-mode budget eps*||t||/sqrt(d).
[[nodiscard]] TuckerDecomposition hosvd(const DenseTensor& t, double eps);

enum class CpInit { Random, Hosvd };

struct CpOptions {
    Index max_iters = 200;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    CpInit init = CpInit::Random;
};

/// Alternating least squares for a fixed CP rank. Stops when the relative
/// error improves by less than tol between sweeps or after max_iters sweeps;
/// the outcome is reported in the result rather than thrown.
[[nodiscard]] CPDecomposition cp_als(const DenseTensor& t, Index rank, const CpOptions& opts = {});

[[nodiscard]] DenseTensor reconstruct(const TTDecomposition& d);
[[nodiscard]] DenseTensor reconstruct(const TuckerDecomposition& d);
[[nodiscard]] DenseTensor reconstruct(const CPDecomposition& d);
[[nodiscard]] DenseTensor reconstruct(const Decomposition& d);

/// ||t - reconstruct(d)||_F / ||t||_F. Throws InvalidArgument for zero t.
[[nodiscard]] double relative_error(const Decomposition& d, const DenseTensor& t);
[[nodiscard]] double relative_error(const DenseTensor& approx, const DenseTensor& t);

/// Khatri-Rao product of the given factors, first factor varying fastest
/// in the row index.
[[nodiscard]] Matrix khatri_rao(const std::vector<const Matrix*>& factors);

[[nodiscard]] Container to_container(const Decomposition& d);
[[nodiscard]] Decomposition decomposition_from_container(const Container& c);

}  // namespace trom
