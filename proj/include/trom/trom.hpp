// SPDX-License-Identifier: MIT
#pragma once

#include "trom/grid.hpp"
#include "trom/hyperreduction.hpp"
#include "trom/lrtd.hpp"
#include "trom/model.hpp"
#include "trom/pod.hpp"

#include <optional>

namespace trom {

enum class TromFormat { TT, Hosvd, CP };
enum class HyperMode { LocalLS, LocalDeim };

[[nodiscard]] std::string format_name(TromFormat f);
[[nodiscard]] TromFormat parse_format(const std::string& s);
[[nodiscard]] std::string mode_name(HyperMode m);
[[nodiscard]] HyperMode parse_mode(const std::string& s);

/// Compressed snapshot tensor theta plus what the online stage derives from
/// it: the universal basis and, per format, the pieces of the core matrix.
/// theta(alpha) is represented as basis * C(alpha) * right^T.
struct CompressedTheta {
    Decomposition decomposition;
    Matrix basis;     // M x R, orthonormal columns
    Vector scaling;   // TT: column norms W of the last factor
    Matrix cp_left;   // CP: R_U
    Matrix cp_right;  // CP: R_V

    [[nodiscard]] static CompressedTheta from(Decomposition d);
    /// Universal dimension R (columns of basis).
    [[nodiscard]] Index universal_dim() const { return basis.cols(); }
    /// Entries passed to the online stage.
    [[nodiscard]] Index online_entries() const;
};

struct OfflineOptions {
    TromFormat format = TromFormat::TT;
    double eps = 1e-3;
    Index cp_rank = 10;
    CpOptions cp;
    Index p = 2;
};

/// Everything the online stage needs.
struct OfflineArtifact {
    OfflineOptions options;
    ParameterGrid grid;
    Json model_config;
    CompressedTheta phi;
    CompressedTheta psi;
    SelectionIndices selection;  // DEIM rows for Y
    Matrix uty;                  // U^T Y
    Matrix pty;                  // P^T Y
    std::vector<Matrix> affine;  // U^T A_q U
    std::vector<Index> dims;     // snapshot tensor dims
};

[[nodiscard]] OfflineArtifact trom_offline(const DenseTensor& phi, const DenseTensor& psi, const ParameterGrid& grid,
                                           const OfflineOptions& opts, const std::vector<SparseMatrix>& affine_terms = {});

/// Parameter-specific core matrix C(alpha) (before TT rescaling).
[[nodiscard]] Matrix core_matrix(const CompressedTheta& theta, const std::vector<Vector>& weights);
/// Matrix whose SVD gives the local basis: C(alpha) W for TT, C(alpha) otherwise.
[[nodiscard]] Matrix scaled_core_matrix(const CompressedTheta& theta, const std::vector<Vector>& weights);
/// Densely assembled theta(alpha) = theta x_2 e^1 ... x_{D+1} e^D (M x N).
[[nodiscard]] Matrix assemble_local(const CompressedTheta& theta, const std::vector<Vector>& weights);

/// Largest admissible local dimension for theta.
[[nodiscard]] Index max_local_dim(const CompressedTheta& theta);

struct LocalRom {
    Params alpha;
    Matrix un;  // R^phi x n_phi
    Matrix yn;  // R^psi x n_psi
    Vector sigma_phi;
    Vector sigma_psi;
    HyperMode mode = HyperMode::LocalLS;
    std::vector<Index> rows;  // sampled rows of f (global indices)
    Matrix a;                 // n_phi x n_phi
    Matrix q;                 // n_phi x rows
};

/// Local reduced bases from the SVDs of the core matrices.
[[nodiscard]] LocalRom local_bases(const OfflineArtifact& art, const Params& alpha, Index n_phi, Index n_psi);

/// Adds the projected operator and the hyper-reduced nonlinear map.
void build_reduced_system(const OfflineArtifact& art, LocalRom& local, HyperMode mode, const std::vector<double>& affine_coefficients);

/// Integrates the local model from u0 and lifts it back.
[[nodiscard]] ReducedSolution trom_solve(const OfflineArtifact& art, const LocalRom& local, const Model& model, const Vector& u0);

/// Convenience: local_bases + build_reduced_system + trom_solve from the
/// model's initial state.
[[nodiscard]] ReducedSolution trom_query(const OfflineArtifact& art, const Model& model, const Params& alpha, Index n_phi,
                                         Index n_psi, HyperMode mode);

[[nodiscard]] Container to_container(const OfflineArtifact& art);
[[nodiscard]] OfflineArtifact artifact_from_container(const Container& c);

}  // namespace trom
