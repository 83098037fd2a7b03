// SPDX-License-Identifier: MIT
#pragma once

#include "trom/fom.hpp"
#include "trom/trom.hpp"

#include <optional>

namespace trom {

/// Time integral over [t_from, T] of |approx - reference|_{H^1}^2 and of
/// |reference|_{H^1}^2, trapezoidal over the stored steps t_k = (k+1) dt.
struct H1Integrals {
    double error = 0.0;
    double reference = 0.0;
};
[[nodiscard]] H1Integrals h1_integrals(const Model& model, const Matrix& approx, const Matrix& reference, double t_from);

/// Snapshot entries over entries passed to the online stage.
[[nodiscard]] double compression_factor(const CompressedTheta& theta, const std::vector<Index>& dims);
/// Combined factor for a pair of tensors (both tensors over both payloads).
[[nodiscard]] double combined_compression_factor(const OfflineArtifact& art);

/// Effective rank and relative error of a format, for comparison with the
/// truncated SVD of the mode-1 unfolding.
[[nodiscard]] Index effective_rank(const Decomposition& d);
/// sqrt(sum_{i>r} s_i^2) / ||s||.
[[nodiscard]] double svd_tail_error(const Vector& s, Index r);

/// Out-of-sample error study over a sequence of training grids.
struct RefinementRow {
    std::vector<Index> shape;
    double mean_ratio = 0.0;  // sum of error integrals over sum of reference integrals
    double max_ratio = 0.0;   // max error integral over max reference integral
    double mean_l2 = 0.0;     // average relative L2(L2) error
    std::vector<Index> phi_ranks;
    std::vector<Index> psi_ranks;
    double offline_seconds = 0.0;
    double online_seconds = 0.0;  // average per query
};

struct QuerySettings {
    Index n_phi = 10;
    Index n_psi = 20;
    HyperMode mode = HyperMode::LocalLS;
    double t_from = 0.5;
};

/// References are computed once per alpha and shared by all grids.
[[nodiscard]] std::vector<RefinementRow> refinement_study(const Model& model, const std::vector<ParameterGrid>& grids,
                                                          const OfflineOptions& opts, const QuerySettings& q,
                                                          const std::vector<Params>& alphas);

/// Per-alpha pieces of the representation and interpolation estimates for
/// the local least-squares hyper-reduction.
struct EstimateRow {
    Params alpha;
    Index n = 0;
    double lhs = 0.0;          // sum_k ||f_k - fhat_k||^2
    double c_star = 0.0;       // ||(P^T Y)^+||
    double weight_norm = 0.0;  // prod_i ||e^i||
    double eps_term = 0.0;     // weight_norm * eps * ||Psi||_F
    double compression_term = 0.0;  // weight_norm * ||Psi - Psi~||_F
    double tail = 0.0;         // sqrt(sum_{i>n} sigma~_i^2)
    double remainder = 0.0;    // ||F - Psi_I(alpha)||_F, measured
    std::optional<double> remainder_fit;
    double bound = 0.0;        // c_star^2 (remainder' + eps_term + tail)^2
    double ratio = 0.0;        // lhs / bound
    bool violated = false;
    double phi_lhs = 0.0;      // representation residual of the u-trajectory
    double phi_bound = 0.0;
};

/// ||F - Psi x_2 e^1 ... x_{D+1} e^D||_F for the f-trajectory F at alpha
/// (Theta selects u or f snapshots).
[[nodiscard]] double interpolation_remainder(const DenseTensor& theta, const ParameterGrid& grid, Index p,
                                             const Params& alpha, const Matrix& trajectory);

/// Checks lhs <= bound for every (alpha, n). When fitted remainders are
/// given (one per alpha) they replace the measured ones in the bound.
[[nodiscard]] std::vector<EstimateRow> verify_estimates(const OfflineArtifact& art, const SnapshotSet& snaps,
                                                        const Model& model, const std::vector<Params>& alphas,
                                                        const std::vector<Index>& ns,
                                                        const std::vector<double>& fitted_remainders = {});

/// Least-squares fit log rho = log c + rate * log delta.
struct PowerFit {
    double log_c = 0.0;
    double rate = 0.0;
    [[nodiscard]] double at(double delta) const;
};
[[nodiscard]] PowerFit fit_power_law(const std::vector<double>& delta, const std::vector<double>& rho);

/// Largest node spacing over the axes, measured in each axis' scale.
[[nodiscard]] double grid_spacing(const ParameterGrid& grid);

}  // namespace trom
