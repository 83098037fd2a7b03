// SPDX-License-Identifier: MIT
#include "trom/experiment.hpp"

#include <algorithm>

namespace trom {

namespace {

template <class T>
void read_optional(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

// Scalars are accepted where lists are expected.
template <class T>
void read_list(const Json& j, const char* key, std::vector<T>& out) {
    if (!j.contains(key)) return;
    const Json& v = j.at(key);
    out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
}

}  // namespace

Json burgers_grid(Index k1, Index k2) {
    return {{"axes",
             {{{"name", "a1"}, {"lo", 0.01}, {"hi", 0.5}, {"scale", "log"}, {"count", k1}},
              {{"name", "a2"}, {"lo", 0.2}, {"hi", 0.8}, {"scale", "uniform"}, {"count", k2}}}}};
}

Json allen_cahn_grid(Index k1, const std::vector<double>& a2, const std::vector<double>& pb) {
    return {{"axes",
             {{{"name", "a1"}, {"lo", 0.01}, {"hi", 0.025}, {"scale", "log"}, {"count", k1}},
              {{"name", "a2"}, {"lo", a2.front()}, {"hi", a2.back()}, {"scale", "uniform"}, {"nodes", a2}},
              {{"name", "pb"}, {"lo", pb.front()}, {"hi", pb.back()}, {"scale", "uniform"}, {"nodes", pb}}}}};
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    ExperimentConfig c;
    if (j.contains("preset")) c = preset(j.at("preset").get<std::string>());
    read_optional(j, "problem", c.problem);
    read_optional(j, "grid", c.grid);
    read_optional(j, "format", c.format);
    read_list(j, "eps", c.eps);
    read_list(j, "cp_rank", c.cp_rank);
    read_list(j, "n_phi", c.n_phi);
    read_list(j, "n_psi", c.n_psi);
    read_optional(j, "mode", c.mode);
    read_optional(j, "p", c.p);
    read_optional(j, "alphas", c.alphas);
    read_optional(j, "query_count", c.query_count);
    read_optional(j, "seed", c.seed);
    read_optional(j, "refinement", c.refinement);
    read_optional(j, "refinement_queries", c.refinement_queries);
    read_optional(j, "singular_value_queries", c.singular_value_queries);
    read_optional(j, "singular_value_count", c.singular_value_count);
    read_optional(j, "t_from", c.t_from);
    read_optional(j, "study_eps", c.study_eps);
    read_optional(j, "spectrum_eps", c.spectrum_eps);
    read_list(j, "verify_n", c.verify_n);
    read_optional(j, "out", c.out);
    require(c.problem.is_object() && c.problem.contains("problem"), "config needs a problem description");
    require(c.grid.is_object(), "config needs a grid");
    require(!c.eps.empty() && !c.cp_rank.empty() && !c.n_phi.empty() && !c.n_psi.empty(), "config lists must be non-empty");
    (void)parse_format(c.format);
    (void)parse_mode(c.mode);
    const ParameterGrid g = c.parameter_grid();
    for (const auto& a : c.alphas) g.require_inside(a);
    return c;
}

Json ExperimentConfig::to_json() const {
    return {{"problem", problem},
            {"grid", grid},
            {"format", format},
            {"eps", eps},
            {"cp_rank", cp_rank},
            {"n_phi", n_phi},
            {"n_psi", n_psi},
            {"mode", mode},
            {"p", p},
            {"alphas", alphas},
            {"query_count", query_count},
            {"seed", seed},
            {"refinement", refinement},
            {"refinement_queries", refinement_queries},
            {"singular_value_queries", singular_value_queries},
            {"singular_value_count", singular_value_count},
            {"t_from", t_from},
            {"study_eps", study_eps},
            {"spectrum_eps", spectrum_eps},
            {"verify_n", verify_n},
            {"out", out}};
}

ParameterGrid ExperimentConfig::parameter_grid() const { return ParameterGrid::from_json(grid); }

ParameterGrid ExperimentConfig::grid_with_shape(const std::vector<Index>& shape) const {
    const ParameterGrid base = parameter_grid();
    require(static_cast<Index>(shape.size()) == base.dims(), "refinement shape has the wrong number of axes");
    std::vector<ParameterAxis> axes;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const auto& ax = base.axes()[i];
        if (shape[i] == static_cast<Index>(ax.nodes.size()))
            axes.push_back(ax);
        else
            axes.push_back(ParameterAxis::make(ax.name, ax.lo, ax.hi, shape[i], ax.scale));
    }
    return ParameterGrid(std::move(axes));
}

std::vector<Params> ExperimentConfig::queries() const {
    if (!alphas.empty()) return alphas;
    return random_parameters(parameter_grid(), query_count, seed);
}

OfflineOptions ExperimentConfig::offline_options(double eps_value, Index cp_rank_value) const {
    OfflineOptions o;
    o.format = parse_format(format);
    o.eps = eps_value;
    o.cp_rank = cp_rank_value;
    o.cp.seed = seed;
    o.p = p;
    return o;
}

std::vector<std::string> preset_names() { return {"tiny", "burgers-desk", "burgers-full", "allen-cahn-desk", "allen-cahn-full"}; }

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    if (name == "tiny") {
        c.problem = {{"problem", "burgers"}, {"M", 20}, {"N", 20}, {"T", 1.0}};
        c.grid = burgers_grid(1, 1);
        c.eps = {1e-3};
        c.n_phi = {2};
        c.n_psi = {2};
        c.query_count = 1;
        c.refinement = {{1, 1}};
        c.refinement_queries = 1;
        c.singular_value_queries = 1;
        c.singular_value_count = 5;
        c.verify_n = {1, 2};
    } else if (name == "burgers-desk") {
        c.problem = {{"problem", "burgers"}, {"M", 100}, {"N", 100}, {"T", 1.0}};
        c.grid = burgers_grid(8, 16);
        c.eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
        c.n_phi = {10};
        c.n_psi = {20};
        c.alphas = {{0.013, 0.633}};
        c.refinement = {{2, 4}, {4, 8}, {8, 16}, {16, 32}};
    } else if (name == "burgers-full") {
        c.problem = {{"problem", "burgers"}, {"M", 400}, {"N", 200}, {"T", 1.0}};
        c.grid = burgers_grid(16, 32);
        c.eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
        c.cp_rank = {200};
        c.n_phi = {10};
        c.n_psi = {20};
        c.alphas = {{0.013, 0.633}};
        c.refinement = {{2, 4}, {4, 8}, {8, 16}, {16, 32}, {32, 64}};
    } else if (name == "allen-cahn-desk") {
        c.problem = {{"problem", "allen_cahn"}, {"m", 50}, {"N", 100}, {"T", 20.0}};
        c.grid = allen_cahn_grid(4, {0.0, 0.15, 0.3}, {0.5, 0.51, 0.52});
        c.eps = {1e-4};
        c.n_phi = {15};
        c.n_psi = {15};
        c.alphas = {{0.012, 0.1, 0.51}, {0.02, 0.2, 0.51}};
        c.t_from = 0.0;
    } else if (name == "allen-cahn-full") {
        c.problem = {{"problem", "allen_cahn"}, {"m", 150}, {"N", 200}, {"T", 20.0}};
        c.grid = allen_cahn_grid(8, {0.0, 0.15, 0.3}, {0.5, 0.51, 0.52});
        c.eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
        c.n_phi = {20};
        c.n_psi = {20};
        c.alphas = {{0.012, 0.1, 0.51}, {0.02, 0.2, 0.51}};
        c.t_from = 0.0;
    } else {
        std::string names;
        for (const auto& n : preset_names()) names += " " + n;
        throw InvalidArgument("unknown preset " + name + "; available:" + names);
    }
    c.out = "out/" + name;
    return c;
}

}  // namespace trom
