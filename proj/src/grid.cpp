// SPDX-License-Identifier: MIT
#include "trom/grid.hpp"

#include "trom/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trom {

namespace {

double unscale(AxisScale s, double x) { return s == AxisScale::Log ? std::exp(x) : x; }

std::string scale_name(AxisScale s) { return s == AxisScale::Log ? "log" : "uniform"; }

AxisScale parse_scale(const std::string& s) {
    if (s == "log") return AxisScale::Log;
    if (s == "uniform") return AxisScale::Uniform;
    throw InvalidArgument("unknown axis scale " + s);
}

}  // namespace

double ParameterAxis::scaled(double a) const { return scale == AxisScale::Log ? std::log(a) : a; }

ParameterAxis ParameterAxis::make(std::string name, double lo, double hi, Index k, AxisScale scale) {
    require(k >= 1, "axis needs at least one node");
    require(lo <= hi, "axis bounds out of order");
    require(scale != AxisScale::Log || lo > 0, "log axis needs positive bounds");
    ParameterAxis ax{std::move(name), lo, hi, scale, {}};
    const double a = ax.scaled(lo);
    const double b = ax.scaled(hi);
    if (k == 1) {
        ax.nodes.push_back(unscale(scale, 0.5 * (a + b)));
    } else {
        for (Index j = 0; j < k; ++j) {
            double x = unscale(scale, a + (b - a) * static_cast<double>(j) / static_cast<double>(k - 1));
            if (j == 0) x = lo;
            if (j == k - 1) x = hi;
            ax.nodes.push_back(x);
        }
    }
    return ax;
}

double ParameterAxis::spacing() const {
    double d = 0.0;
    for (std::size_t j = 1; j < nodes.size(); ++j) d = std::max(d, nodes[j] - nodes[j - 1]);
    return d;
}

ParameterGrid::ParameterGrid(std::vector<ParameterAxis> axes) : axes_(std::move(axes)) {
    require(!axes_.empty(), "parameter grid needs at least one axis");
    for (const auto& ax : axes_) {
        require(!ax.nodes.empty(), "axis " + ax.name + " has no nodes");
        require(ax.lo <= ax.hi, "axis " + ax.name + " bounds out of order");
        for (std::size_t j = 0; j < ax.nodes.size(); ++j) {
            require(ax.nodes[j] >= ax.lo && ax.nodes[j] <= ax.hi, "axis " + ax.name + " node outside its box");
            require(j == 0 || ax.nodes[j] > ax.nodes[j - 1], "axis " + ax.name + " nodes must be strictly increasing");
        }
        require(ax.scale != AxisScale::Log || ax.lo > 0, "log axis " + ax.name + " needs positive bounds");
    }
}

std::vector<Index> ParameterGrid::shape() const {
    std::vector<Index> s;
    for (const auto& ax : axes_) s.push_back(static_cast<Index>(ax.nodes.size()));
    return s;
}

Index ParameterGrid::size() const {
    Index n = 1;
    for (const auto& ax : axes_) n *= static_cast<Index>(ax.nodes.size());
    return n;
}

std::vector<Index> ParameterGrid::multi_index(Index linear) const {
    require(linear >= 0 && linear < size(), "grid point index out of range");
    std::vector<Index> idx;
    for (const auto& ax : axes_) {
        const Index k = static_cast<Index>(ax.nodes.size());
        idx.push_back(linear % k);
        linear /= k;
    }
    return idx;
}

std::vector<double> ParameterGrid::point(Index linear) const {
    const auto idx = multi_index(linear);
    std::vector<double> a;
    for (std::size_t i = 0; i < axes_.size(); ++i) a.push_back(axes_[i].nodes[static_cast<std::size_t>(idx[i])]);
    return a;
}

bool ParameterGrid::contains(const std::vector<double>& alpha) const {
    if (alpha.size() != axes_.size()) return false;
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (!(alpha[i] >= axes_[i].lo && alpha[i] <= axes_[i].hi)) return false;
    return true;
}

void ParameterGrid::require_inside(const std::vector<double>& alpha) const {
    require(alpha.size() == axes_.size(), "parameter vector has " + std::to_string(alpha.size()) + " entries, expected " + std::to_string(axes_.size()));
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (!(alpha[i] >= axes_[i].lo && alpha[i] <= axes_[i].hi)) {
            std::ostringstream os;
            os << "parameter " << axes_[i].name << " = " << alpha[i] << " outside [" << axes_[i].lo << ", " << axes_[i].hi << "]";
            throw InvalidArgument(os.str());
        }
    }
}

double ParameterGrid::mesh_parameter(int p) const {
    double s = 0.0;
    for (const auto& ax : axes_)
        if (ax.nodes.size() > 1) s += std::pow(ax.spacing(), p);
    return s;
}

Json ParameterGrid::to_json() const {
    Json axes = Json::array();
    for (const auto& ax : axes_)
        axes.push_back({{"name", ax.name}, {"lo", ax.lo}, {"hi", ax.hi}, {"scale", scale_name(ax.scale)}, {"nodes", ax.nodes}});
    return {{"axes", axes}};
}

ParameterGrid ParameterGrid::from_json(const Json& j) {
    std::vector<ParameterAxis> axes;
    for (const auto& a : j.at("axes")) {
        ParameterAxis ax;
        ax.name = a.value("name", std::string("a") + std::to_string(axes.size() + 1));
        ax.lo = a.at("lo").get<double>();
        ax.hi = a.at("hi").get<double>();
        ax.scale = parse_scale(a.value("scale", std::string("uniform")));
        if (a.contains("nodes")) {
            ax.nodes = a.at("nodes").get<std::vector<double>>();
        } else {
            ax = ParameterAxis::make(ax.name, ax.lo, ax.hi, a.at("count").get<Index>(), ax.scale);
        }
        axes.push_back(std::move(ax));
    }
    return ParameterGrid(std::move(axes));
}

Vector axis_weights(const ParameterAxis& axis, double a, Index p) {
    const Index k = static_cast<Index>(axis.nodes.size());
    require(p >= 1 && p <= k, "interpolation order p must lie in [1, K] on axis " + axis.name);
    require(a >= axis.lo && a <= axis.hi, "value outside axis " + axis.name);
    const auto& x = axis.nodes;
    const double s = axis.scaled(a);
    auto dist = [&](Index j) { return std::abs(axis.scaled(x[static_cast<std::size_t>(j)]) - s); };

    // Window [first, last] of p nodes, grown greedily around a.
    Index first = 0;
    Index last = 0;
    if (p == 1) {
        for (Index j = 1; j < k; ++j)
            if (dist(j) < dist(first)) first = j;
        last = first;
    } else {
        const auto it = std::upper_bound(x.begin(), x.end(), a);
        Index right = std::clamp<Index>(static_cast<Index>(it - x.begin()), 1, k - 1);
        first = right - 1;
        last = right;
        while (last - first + 1 < p) {
            if (first == 0) {
                ++last;
            } else if (last == k - 1) {
                --first;
            } else if (dist(last + 1) < dist(first - 1)) {
                ++last;
            } else {
                --first;
            }
        }
    }

    Vector e = Vector::Zero(k);
    for (Index j = first; j <= last; ++j) {
        double w = 1.0;
        for (Index m = first; m <= last; ++m)
            if (m != j) w *= (x[static_cast<std::size_t>(m)] - a) / (x[static_cast<std::size_t>(m)] - x[static_cast<std::size_t>(j)]);
        e(j) = w;
    }
    return e;
}

std::vector<Vector> interp_weights(const ParameterGrid& grid, const std::vector<double>& alpha, Index p) {
    grid.require_inside(alpha);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < grid.axes().size(); ++i) {
        const auto& ax = grid.axes()[i];
        out.push_back(axis_weights(ax, alpha[i], std::min<Index>(p, static_cast<Index>(ax.nodes.size()))));
    }
    return out;
}

std::vector<std::vector<double>> random_parameters(const ParameterGrid& grid, Index count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::vector<double>> out;
    for (Index n = 0; n < count; ++n) {
        std::vector<double> a;
        for (const auto& ax : grid.axes()) {
            const double x = unscale(ax.scale, rng.uniform(ax.scaled(ax.lo), ax.scaled(ax.hi)));
            a.push_back(std::clamp(x, ax.lo, ax.hi));
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace trom
