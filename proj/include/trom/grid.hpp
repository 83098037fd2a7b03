// SPDX-License-Identifier: MIT
#pragma once

#include "trom/container.hpp"
#include "trom/core.hpp"

#include <string>
#include <vector>

namespace trom {

enum class AxisScale { Uniform, Log };

/// One parameter axis: box bounds, sampling nodes and the scale used to
/// measure distances along it.
struct ParameterAxis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    AxisScale scale = AxisScale::Uniform;
    std::vector<double> nodes;

    /// K nodes spread over [lo, hi], evenly in the axis scale. K == 1 puts
    /// the single node at the (scale) midpoint.
    [[nodiscard]] static ParameterAxis make(std::string name, double lo, double hi, Index k, AxisScale scale);

    /// Position of a value in the axis scale (log for log axes).
    [[nodiscard]] double scaled(double a) const;
    /// Largest distance between neighbouring nodes, in parameter units.
    [[nodiscard]] double spacing() const;
};

/// Cartesian training grid. Linear grid-point index runs with axis 0
/// fastest, matching the parameter modes of a snapshot tensor.
class ParameterGrid {
public:
    ParameterGrid() = default;
    explicit ParameterGrid(std::vector<ParameterAxis> axes);

    [[nodiscard]] const std::vector<ParameterAxis>& axes() const { return axes_; }
    [[nodiscard]] Index dims() const { return static_cast<Index>(axes_.size()); }
    [[nodiscard]] std::vector<Index> shape() const;
    [[nodiscard]] Index size() const;

    /// Parameter vector of grid point `linear`.
    [[nodiscard]] std::vector<double> point(Index linear) const;
    [[nodiscard]] std::vector<Index> multi_index(Index linear) const;

    [[nodiscard]] bool contains(const std::vector<double>& alpha) const;
    void require_inside(const std::vector<double>& alpha) const;

    /// sum_i delta_i^p over the axes with at least two nodes.
    [[nodiscard]] double mesh_parameter(int p) const;

    [[nodiscard]] Json to_json() const;
    [[nodiscard]] static ParameterGrid from_json(const Json& j);

private:
    std::vector<ParameterAxis> axes_;
};

/// Lagrange weights of one axis for value a using the p closest nodes.
/// For p == 2 these are the two nodes bracketing a.
[[nodiscard]] Vector axis_weights(const ParameterAxis& axis, double a, Index p);

/// Per-axis interpolation weight vectors e^i(alpha). Throws for alpha
/// outside the box or p outside [1, K_i].
[[nodiscard]] std::vector<Vector> interp_weights(const ParameterGrid& grid, const std::vector<double>& alpha, Index p);

/// Random parameter vectors inside the box, uniform per axis in the axis scale.
[[nodiscard]] std::vector<std::vector<double>> random_parameters(const ParameterGrid& grid, Index count, std::uint64_t seed);

}  // namespace trom
