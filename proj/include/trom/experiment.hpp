// SPDX-License-Identifier: MIT
#pragma once

#include "trom/bench.hpp"

#include <filesystem>
#include <string>

namespace trom {

/// Everything a CLI run needs; loaded from JSON with per-field defaults.
struct ExperimentConfig {
    Json problem;  // model config, see make_model
    Json grid;     // ParameterGrid::from_json
    std::string format = "TT";
    std::vector<double> eps{1e-3};
    std::vector<Index> cp_rank{20};
    std::vector<Index> n_phi{10};
    std::vector<Index> n_psi{20};
    std::string mode = "local-ls";
    Index p = 2;
    std::vector<Params> alphas;  // explicit queries
    Index query_count = 10;      // random queries when alphas is empty
    std::uint64_t seed = 7;
    std::vector<std::vector<Index>> refinement;  // grid shapes for the refinement table
    Index refinement_queries = 100;
    Index singular_value_queries = 10;
    Index singular_value_count = 50;
    double t_from = 0.5;
    double study_eps = 1e-3;     // refinement table and estimate check
    double spectrum_eps = 1e-4;  // singular-value series
    std::vector<Index> verify_n{5, 10, 15, 20, 25};
    std::string out = "out";

    [[nodiscard]] static ExperimentConfig from_json(const Json& j);
    [[nodiscard]] Json to_json() const;

    [[nodiscard]] ParameterGrid parameter_grid() const;
    /// Same box and scales as the main grid with the given node counts.
    [[nodiscard]] ParameterGrid grid_with_shape(const std::vector<Index>& shape) const;
    /// Explicit alphas, or query_count seeded random draws in the box.
    [[nodiscard]] std::vector<Params> queries() const;
    [[nodiscard]] OfflineOptions offline_options(double eps_value, Index cp_rank_value) const;
};

/// Named configurations: burgers-desk, burgers-full, allen-cahn-desk,
/// allen-cahn-full, tiny.
[[nodiscard]] ExperimentConfig preset(const std::string& name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Grid json for the Burgers box with K1 log nodes in a1 and K2 uniform
/// nodes in a2.
[[nodiscard]] Json burgers_grid(Index k1, Index k2);
/// Allen-Cahn grid json: k1 log nodes in a1, the given a2 and p_b nodes.
[[nodiscard]] Json allen_cahn_grid(Index k1, const std::vector<double>& a2, const std::vector<double>& pb);

}  // namespace trom
