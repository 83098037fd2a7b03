// SPDX-License-Identifier: MIT
#pragma once

#include "trom/grid.hpp"
#include "trom/model.hpp"
#include "trom/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <map>

namespace trom {

/// 1D viscous Burgers u_t = a1 u_xx - u u_x on (0,1), u = 0 at both ends,
/// initial step 1 on (0, a2). M interior nodes x_i = (i+1) h, h = 1/(M+1).
struct BurgersConfig {
    Index m = 100;
    Index n = 100;
    double t_final = 1.0;
};

struct BurgersOperators {
    SparseMatrix laplacian;  // second difference / h^2, Dirichlet
    SparseMatrix gradient;   // backward difference / h, Dirichlet
};

[[nodiscard]] BurgersOperators burgers_operators(Index m);

class BurgersModel final : public Model {
public:
    explicit BurgersModel(BurgersConfig cfg);

    [[nodiscard]] std::string problem() const override { return "burgers"; }
    [[nodiscard]] Index size() const override { return cfg_.m; }
    [[nodiscard]] Index steps() const override { return cfg_.n; }
    [[nodiscard]] Bdf scheme() const override { return {cfg_.t_final / static_cast<double>(cfg_.n), 0.0}; }
    [[nodiscard]] Index parameter_count() const override { return 2; }
    [[nodiscard]] const std::vector<SparseMatrix>& affine_terms() const override { return terms_; }
    [[nodiscard]] std::vector<double> affine_coefficients(const Params& alpha) const override;
    [[nodiscard]] Vector initial_state(const Params& alpha) const override;
    [[nodiscard]] Trajectory solve(const Params& alpha) const override;
    /// Same scheme from an arbitrary initial state.
    [[nodiscard]] Trajectory solve_from(const Params& alpha, const Vector& u0) const;
    [[nodiscard]] std::unique_ptr<SampledNonlinearity> sample(const std::vector<Index>& rows, const Params& alpha) const override;
    [[nodiscard]] double h1_seminorm_sq(const Vector& u) const override;
    [[nodiscard]] Json config() const override;

    [[nodiscard]] double h() const { return 1.0 / static_cast<double>(cfg_.m + 1); }

private:
    BurgersConfig cfg_;
    std::vector<SparseMatrix> terms_;
};

/// 2D Allen-Cahn u_t = a1^2 Lap u - F'(u) on (0,1)^2 with zero Neumann
/// conditions, F(u) = u^2 (1-u)^2 + (a2/10)(u^4 - u/2). Cell-centred m x m
/// grid, h = 1/m. The third parameter is the Bernoulli probability p_b of
/// the initial field, which is relaxed for presim_time at presim_alpha.
struct AllenCahnConfig {
    Index m = 50;
    Index n = 100;
    double t_final = 20.0;
    double stabilization = -1.0;  // negative selects 1/(2 dt)
    std::uint64_t seed = 20240601;
    double presim_time = 1.0;
    std::vector<double> presim_alpha{0.01, 0.0};
};

/// F'(u) entrywise.
[[nodiscard]] double allen_cahn_potential_derivative(double u, double a2);

/// Five-point Neumann Laplacian / h^2 on the cell-centred m x m grid,
/// node (ix, iy) at index ix + m * iy.
[[nodiscard]] SparseMatrix neumann_laplacian(Index m);

class AllenCahnModel final : public Model {
public:
    explicit AllenCahnModel(AllenCahnConfig cfg);

    [[nodiscard]] std::string problem() const override { return "allen_cahn"; }
    [[nodiscard]] Index size() const override { return cfg_.m * cfg_.m; }
    [[nodiscard]] Index steps() const override { return cfg_.n; }
    [[nodiscard]] Bdf scheme() const override;
    [[nodiscard]] Index parameter_count() const override { return 3; }
    [[nodiscard]] const std::vector<SparseMatrix>& affine_terms() const override { return terms_; }
    [[nodiscard]] std::vector<double> affine_coefficients(const Params& alpha) const override;
    [[nodiscard]] Vector initial_state(const Params& alpha) const override;
    [[nodiscard]] Trajectory solve(const Params& alpha) const override;
    /// Runs `steps` steps of the scheme from u0 at (a1, a2).
    [[nodiscard]] Trajectory solve_from(double a1, double a2, const Vector& u0, Index steps) const;
    [[nodiscard]] std::unique_ptr<SampledNonlinearity> sample(const std::vector<Index>& rows, const Params& alpha) const override;
    [[nodiscard]] double h1_seminorm_sq(const Vector& u) const override;
    [[nodiscard]] Json config() const override;

    /// Bernoulli field before relaxation: node i is 1 iff its seeded uniform
    /// draw is below p_b, so fields for different p_b are nested.
    [[nodiscard]] Vector bernoulli_field(double pb) const;

private:
    AllenCahnConfig cfg_;
    std::vector<SparseMatrix> terms_;
};

/// Relaxed initial states for each p_b value.
[[nodiscard]] std::map<double, Vector> ac_initial_states(const AllenCahnModel& model, const std::vector<double>& pbs);

/// Snapshot tensors of order D+2 with modes (space, alpha_1..alpha_D, time).
struct SnapshotSet {
    Json model_config;
    ParameterGrid grid;
    DenseTensor phi{std::vector<Index>{1}};
    DenseTensor psi{std::vector<Index>{1}};
    Matrix initial;  // M x K, column = linear grid point
    double dt = 0.0;

    [[nodiscard]] Index space_dim() const { return phi.dim(0); }
    [[nodiscard]] Index time_dim() const { return phi.dim(phi.order() - 1); }
    /// M x N slab of the u (theta = phi) or f snapshots at a grid point.
    [[nodiscard]] Matrix slab(const DenseTensor& theta, Index grid_point) const;
};

/// Runs the model at every grid point. Errors name the failing parameter.
[[nodiscard]] SnapshotSet sample_snapshots(const Model& model, const ParameterGrid& grid);

[[nodiscard]] Container to_container(const SnapshotSet& s);
[[nodiscard]] SnapshotSet snapshots_from_container(const Container& c);

[[nodiscard]] std::string format_params(const Params& alpha);

}  // namespace trom
