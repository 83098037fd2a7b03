// SPDX-License-Identifier: MIT
#pragma once

#include "trom/container.hpp"
#include "trom/core.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <string>
#include <vector>

namespace trom {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Params = std::vector<double>;

/// Semi-implicit BDF2 with optional stabilization beta_s, first step BDF1.
/// Step k (0-based) solves lhs(k) * x - A x = rhs + f(w) where rhs and the
/// extrapolated state w come from history().
struct Bdf {
    double dt = 0.0;
    double stabilization = 0.0;

    [[nodiscard]] double lhs(Index step) const {
        return (step == 0 ? 1.0 / dt : 1.5 / dt) + stabilization;
    }

    /// prev is x_{k-1}; prev2 is x_{k-2} and ignored on the first step.
    template <class V>
    void history(Index step, const V& prev, const V& prev2, V& rhs, V& w) const {
        if (step == 0) {
            rhs = (1.0 / dt + stabilization) * prev;
            w = prev;
        } else {
            rhs = (4.0 * prev - prev2) / (2.0 * dt) + stabilization * (2.0 * prev - prev2);
            w = 2.0 * prev - prev2;
        }
    }
};

/// One full-order run: u0 plus per-step states and the nonlinear term used
/// in each step (column k belongs to step k+1).
struct Trajectory {
    Vector u0;
    Matrix u;
    Matrix f;
};

/// A few rows of the nonlinear term evaluated from a few state entries.
/// For rows r, f_r = b + jac * x(stencil) where x is the new state and b,
/// jac depend on the extrapolated state w(stencil).
class SampledNonlinearity {
public:
    virtual ~SampledNonlinearity() = default;

    [[nodiscard]] const std::vector<Index>& rows() const { return rows_; }
    [[nodiscard]] const std::vector<Index>& stencil() const { return stencil_; }
    /// True when jac is always zero (fully explicit treatment).
    [[nodiscard]] virtual bool is_explicit() const = 0;
    virtual void evaluate(const Vector& w, Vector& b, Matrix& jac) const = 0;

protected:
    std::vector<Index> rows_;
    std::vector<Index> stencil_;
};

/// Parametric semi-discrete system u' = A(alpha) u + f_alpha(u) with
/// A(alpha) = sum_q g_q(alpha) A_q.
class Model {
public:
    virtual ~Model() = default;

    [[nodiscard]] virtual std::string problem() const = 0;
    [[nodiscard]] virtual Index size() const = 0;
    [[nodiscard]] virtual Index steps() const = 0;
    [[nodiscard]] virtual Bdf scheme() const = 0;
    [[nodiscard]] virtual Index parameter_count() const = 0;

    [[nodiscard]] virtual const std::vector<SparseMatrix>& affine_terms() const = 0;
    [[nodiscard]] virtual std::vector<double> affine_coefficients(const Params& alpha) const = 0;
    [[nodiscard]] SparseMatrix operator_at(const Params& alpha) const;

    [[nodiscard]] virtual Vector initial_state(const Params& alpha) const = 0;
    [[nodiscard]] virtual Trajectory solve(const Params& alpha) const = 0;
    [[nodiscard]] virtual std::unique_ptr<SampledNonlinearity> sample(const std::vector<Index>& rows, const Params& alpha) const = 0;

    /// Discrete |u|_{H^1}^2: squared finite-difference gradient integrated
    /// over the domain, with the model's boundary conditions.
    [[nodiscard]] virtual double h1_seminorm_sq(const Vector& u) const = 0;

    [[nodiscard]] virtual Json config() const = 0;
    [[nodiscard]] double dt() const { return scheme().dt; }
};

/// Model described by a config document with a "problem" key.
[[nodiscard]] std::unique_ptr<Model> make_model(const Json& config);

}  // namespace trom
