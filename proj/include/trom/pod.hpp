// SPDX-License-Identifier: MIT
#pragma once

#include "trom/hyperreduction.hpp"
#include "trom/model.hpp"
#include "trom/reduced.hpp"
#include "trom/tensor.hpp"

namespace trom {

/// POD-DEIM reduced model built from the mode-1 unfoldings of the snapshot
/// tensors.
struct PodRom {
    Matrix u;        // M x n_phi
    Matrix y;        // M x n_psi
    SelectionIndices selection;
    Vector sigma_phi;  // all singular values of the u-snapshot matrix
    Vector sigma_psi;
    Matrix nonlinear_map;  // U^T Y (P^T Y)^{-1}
    std::vector<Matrix> affine;  // U^T A_q U
};

/// Leading left singular vectors of the unfoldings. Throws InvalidArgument
/// when a requested dimension exceeds the numerical rank.
[[nodiscard]] PodRom pod_offline(const DenseTensor& phi, const DenseTensor& psi, Index n_phi, Index n_psi,
                                 const std::vector<SparseMatrix>& affine_terms = {});

struct ReducedSolution {
    Matrix beta;  // n x N
    Matrix u;     // lifted M x N
};

[[nodiscard]] ReducedOperator pod_operator(const PodRom& rom, const Model& model, const Params& alpha, const Vector& u0);

/// Runs the POD-DEIM model with the model's time scheme from u0.
[[nodiscard]] ReducedSolution pod_solve(const PodRom& rom, const Model& model, const Params& alpha, const Vector& u0);

/// Rows `idx` of m.
[[nodiscard]] Matrix gather_rows(const Matrix& m, const std::vector<Index>& idx);

}  // namespace trom
