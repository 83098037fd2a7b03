// SPDX-License-Identifier: MIT
#include "trom/fom.hpp"

#include "trom/rng.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trom {

namespace {

void check_finite(const Vector& x, const std::string& problem, Index step) {
    if (!x.allFinite())
        throw NumericalError(problem + ": non-finite state at step " + std::to_string(step + 1));
}

void require_params(const Params& alpha, Index count, const std::string& problem) {
    require(static_cast<Index>(alpha.size()) == count,
            problem + " expects " + std::to_string(count) + " parameters, got " + std::to_string(alpha.size()));
}

class BurgersSample final : public SampledNonlinearity {
public:
    BurgersSample(const std::vector<Index>& rows, Index m, double h) : inv_h_(1.0 / h) {
        rows_ = rows;
        for (Index r : rows) {
            require(r >= 0 && r < m, "sampled row out of range");
            stencil_.push_back(r);
            if (r > 0) stencil_.push_back(r - 1);
        }
        std::sort(stencil_.begin(), stencil_.end());
        stencil_.erase(std::unique(stencil_.begin(), stencil_.end()), stencil_.end());
        for (Index r : rows) {
            self_.push_back(position(r));
            left_.push_back(r > 0 ? position(r - 1) : -1);
        }
    }

    [[nodiscard]] bool is_explicit() const override { return false; }

    void evaluate(const Vector& w, Vector& b, Matrix& jac) const override {
        const Index s = static_cast<Index>(rows_.size());
        b = Vector::Zero(s);
        jac = Matrix::Zero(s, static_cast<Index>(stencil_.size()));
        for (Index k = 0; k < s; ++k) {
            const double wi = w(self_[static_cast<std::size_t>(k)]);
            jac(k, self_[static_cast<std::size_t>(k)]) = -wi * inv_h_;
            if (left_[static_cast<std::size_t>(k)] >= 0) jac(k, left_[static_cast<std::size_t>(k)]) = wi * inv_h_;
        }
    }

private:
    Index position(Index r) const {
        return static_cast<Index>(std::lower_bound(stencil_.begin(), stencil_.end(), r) - stencil_.begin());
    }

    double inv_h_;
    std::vector<Index> self_;
    std::vector<Index> left_;
};

class AllenCahnSample final : public SampledNonlinearity {
public:
    AllenCahnSample(const std::vector<Index>& rows, Index m, double a2) : a2_(a2) {
        for (Index r : rows) require(r >= 0 && r < m, "sampled row out of range");
        rows_ = rows;
        stencil_ = rows;
    }

    [[nodiscard]] bool is_explicit() const override { return true; }

    void evaluate(const Vector& w, Vector& b, Matrix& jac) const override {
        b.resize(w.size());
        for (Index i = 0; i < w.size(); ++i) b(i) = -allen_cahn_potential_derivative(w(i), a2_);
        jac = Matrix::Zero(w.size(), w.size());
    }

private:
    double a2_;
};

}  // namespace

SparseMatrix Model::operator_at(const Params& alpha) const {
    const auto& terms = affine_terms();
    const auto g = affine_coefficients(alpha);
    SparseMatrix a(size(), size());
    for (std::size_t q = 0; q < terms.size(); ++q) a += g[q] * terms[q];
    return a;
}

// ---------------------------------------------------------------- Burgers

BurgersOperators burgers_operators(Index m) {
    require(m >= 3, "Burgers needs at least 3 interior nodes");
    const double h = 1.0 / static_cast<double>(m + 1);
    std::vector<Eigen::Triplet<double>> lap;
    std::vector<Eigen::Triplet<double>> grad;
    for (Index i = 0; i < m; ++i) {
        lap.emplace_back(i, i, -2.0 / (h * h));
        if (i > 0) lap.emplace_back(i, i - 1, 1.0 / (h * h));
        if (i + 1 < m) lap.emplace_back(i, i + 1, 1.0 / (h * h));
        grad.emplace_back(i, i, 1.0 / h);
        if (i > 0) grad.emplace_back(i, i - 1, -1.0 / h);
    }
    BurgersOperators ops{SparseMatrix(m, m), SparseMatrix(m, m)};
    ops.laplacian.setFromTriplets(lap.begin(), lap.end());
    ops.gradient.setFromTriplets(grad.begin(), grad.end());
    return ops;
}

BurgersModel::BurgersModel(BurgersConfig cfg) : cfg_(cfg) {
    require(cfg_.n >= 2, "Burgers needs N >= 2");
    require(cfg_.t_final > 0, "Burgers needs T > 0");
    terms_.push_back(burgers_operators(cfg_.m).laplacian);
}

std::vector<double> BurgersModel::affine_coefficients(const Params& alpha) const {
    require_params(alpha, 2, "burgers");
    return {alpha[0]};
}

Vector BurgersModel::initial_state(const Params& alpha) const {
    require_params(alpha, 2, "burgers");
    Vector u0(cfg_.m);
    for (Index i = 0; i < cfg_.m; ++i) u0(i) = static_cast<double>(i + 1) * h() < alpha[1] ? 1.0 : 0.0;
    return u0;
}

Trajectory BurgersModel::solve(const Params& alpha) const { return solve_from(alpha, initial_state(alpha)); }

Trajectory BurgersModel::solve_from(const Params& alpha, const Vector& u0) const {
    require_params(alpha, 2, "burgers");
    require(u0.size() == cfg_.m, "initial state has wrong length");
    const Index m = cfg_.m;
    const double diff = alpha[0] / (h() * h());
    const double inv_h = 1.0 / h();
    const Bdf bdf = scheme();

    Trajectory tr{u0, Matrix(m, cfg_.n), Matrix(m, cfg_.n)};
    Vector prev = u0;
    Vector prev2 = u0;
    Vector rhs(m), w(m), x(m), cp(m), dp(m);
    for (Index k = 0; k < cfg_.n; ++k) {
        bdf.history(k, prev, prev2, rhs, w);
        const double c = bdf.lhs(k);
        // Tridiagonal (c I - a1 L + diag(w) G) x = rhs by the Thomas algorithm.
        for (Index i = 0; i < m; ++i) {
            const double diag = c + 2.0 * diff + w(i) * inv_h;
            const double lower = i > 0 ? -diff - w(i) * inv_h : 0.0;
            const double upper = i + 1 < m ? -diff : 0.0;
            const double denom = i > 0 ? diag - lower * cp(i - 1) : diag;
            if (denom == 0.0) throw NumericalError("burgers: singular step matrix at step " + std::to_string(k + 1));
            cp(i) = upper / denom;
            dp(i) = (rhs(i) - (i > 0 ? lower * dp(i - 1) : 0.0)) / denom;
        }
        x(m - 1) = dp(m - 1);
        for (Index i = m - 2; i >= 0; --i) x(i) = dp(i) - cp(i) * x(i + 1);
        check_finite(x, "burgers", k);

        for (Index i = 0; i < m; ++i) tr.f(i, k) = -w(i) * (x(i) - (i > 0 ? x(i - 1) : 0.0)) * inv_h;
        tr.u.col(k) = x;
        prev2 = prev;
        prev = x;
    }
    return tr;
}

std::unique_ptr<SampledNonlinearity> BurgersModel::sample(const std::vector<Index>& rows, const Params& alpha) const {
    require_params(alpha, 2, "burgers");
    return std::make_unique<BurgersSample>(rows, cfg_.m, h());
}

double BurgersModel::h1_seminorm_sq(const Vector& u) const {
    require(u.size() == cfg_.m, "state has wrong length");
    double s = 0.0;
    for (Index i = 0; i <= cfg_.m; ++i) {
        const double right = i < cfg_.m ? u(i) : 0.0;
        const double left = i > 0 ? u(i - 1) : 0.0;
        s += (right - left) * (right - left);
    }
    return s / h();
}

Json BurgersModel::config() const {
    return {{"problem", "burgers"}, {"M", cfg_.m}, {"N", cfg_.n}, {"T", cfg_.t_final}};
}

// ------------------------------------------------------------ Allen-Cahn

double allen_cahn_potential_derivative(double u, double a2) {
    return 2.0 * u * (1.0 - u) * (1.0 - 2.0 * u) + a2 / 10.0 * (4.0 * u * u * u - 0.5);
}

SparseMatrix neumann_laplacian(Index m) {
    require(m >= 2, "Allen-Cahn grid needs m >= 2");
    const double s = static_cast<double>(m) * static_cast<double>(m);
    std::vector<Eigen::Triplet<double>> trips;
    for (Index iy = 0; iy < m; ++iy) {
        for (Index ix = 0; ix < m; ++ix) {
            const Index i = ix + m * iy;
            double diag = 0.0;
            auto link = [&](Index j) {
                trips.emplace_back(i, j, s);
                diag -= s;
            };
            if (ix > 0) link(i - 1);
            if (ix + 1 < m) link(i + 1);
            if (iy > 0) link(i - m);
            if (iy + 1 < m) link(i + m);
            trips.emplace_back(i, i, diag);
        }
    }
    SparseMatrix l(m * m, m * m);
    l.setFromTriplets(trips.begin(), trips.end());
    return l;
}

AllenCahnModel::AllenCahnModel(AllenCahnConfig cfg) : cfg_(std::move(cfg)) {
    require(cfg_.n >= 2, "Allen-Cahn needs N >= 2");
    require(cfg_.t_final > 0, "Allen-Cahn needs T > 0");
    require(cfg_.presim_alpha.size() == 2, "presim_alpha needs (a1, a2)");
    if (cfg_.stabilization < 0) cfg_.stabilization = 0.5 / (cfg_.t_final / static_cast<double>(cfg_.n));
    terms_.push_back(neumann_laplacian(cfg_.m));
}

Bdf AllenCahnModel::scheme() const { return {cfg_.t_final / static_cast<double>(cfg_.n), cfg_.stabilization}; }

std::vector<double> AllenCahnModel::affine_coefficients(const Params& alpha) const {
    require_params(alpha, 3, "allen_cahn");
    return {alpha[0] * alpha[0]};
}

Vector AllenCahnModel::bernoulli_field(double pb) const {
    require(pb >= 0.0 && pb <= 1.0, "Bernoulli probability outside [0, 1]");
    Vector u(size());
    for (Index i = 0; i < size(); ++i) u(i) = counter_uniform(cfg_.seed, 0, static_cast<std::uint64_t>(i)) < pb ? 1.0 : 0.0;
    return u;
}

Vector AllenCahnModel::initial_state(const Params& alpha) const {
    require_params(alpha, 3, "allen_cahn");
    const Vector field = bernoulli_field(alpha[2]);
    const auto steps = static_cast<Index>(std::llround(cfg_.presim_time / scheme().dt));
    if (steps == 0) return field;
    const Trajectory tr = solve_from(cfg_.presim_alpha[0], cfg_.presim_alpha[1], field, steps);
    return tr.u.col(steps - 1);
}

Trajectory AllenCahnModel::solve(const Params& alpha) const {
    require_params(alpha, 3, "allen_cahn");
    return solve_from(alpha[0], alpha[1], initial_state(alpha), cfg_.n);
}

Trajectory AllenCahnModel::solve_from(double a1, double a2, const Vector& u0, Index steps) const {
    require(u0.size() == size(), "initial state has wrong length");
    require(steps >= 1, "need at least one step");
    const Bdf bdf = scheme();
    const Index m = size();
    const SparseMatrix a = (a1 * a1) * terms_[0];
    SparseMatrix eye(m, m);
    eye.setIdentity();

    Eigen::SimplicialLDLT<SparseMatrix> first(bdf.lhs(0) * eye - a);
    Eigen::SimplicialLDLT<SparseMatrix> rest(bdf.lhs(1) * eye - a);
    if (first.info() != Eigen::Success || rest.info() != Eigen::Success)
        throw NumericalError("allen_cahn: step matrix factorization failed");

    Trajectory tr{u0, Matrix(m, steps), Matrix(m, steps)};
    Vector prev = u0;
    Vector prev2 = u0;
    Vector rhs(m), w(m), f(m);
    for (Index k = 0; k < steps; ++k) {
        bdf.history(k, prev, prev2, rhs, w);
        for (Index i = 0; i < m; ++i) f(i) = -allen_cahn_potential_derivative(w(i), a2);
        Vector x = (k == 0 ? first : rest).solve(rhs + f);
        check_finite(x, "allen_cahn", k);
        tr.f.col(k) = f;
        tr.u.col(k) = x;
        prev2 = prev;
        prev = std::move(x);
    }
    return tr;
}

std::unique_ptr<SampledNonlinearity> AllenCahnModel::sample(const std::vector<Index>& rows, const Params& alpha) const {
    require_params(alpha, 3, "allen_cahn");
    return std::make_unique<AllenCahnSample>(rows, size(), alpha[1]);
}

double AllenCahnModel::h1_seminorm_sq(const Vector& u) const {
    require(u.size() == size(), "state has wrong length");
    const Index m = cfg_.m;
    double s = 0.0;
    for (Index iy = 0; iy < m; ++iy)
        for (Index ix = 0; ix < m; ++ix) {
            const Index i = ix + m * iy;
            if (ix + 1 < m) s += (u(i + 1) - u(i)) * (u(i + 1) - u(i));
            if (iy + 1 < m) s += (u(i + m) - u(i)) * (u(i + m) - u(i));
        }
    // (difference / h)^2 * h^2 per link.
    return s;
}

Json AllenCahnModel::config() const {
    return {{"problem", "allen_cahn"}, {"m", cfg_.m}, {"N", cfg_.n}, {"T", cfg_.t_final},
            {"stabilization", cfg_.stabilization}, {"seed", cfg_.seed}, {"presim_time", cfg_.presim_time},
            {"presim_alpha", cfg_.presim_alpha}};
}

std::map<double, Vector> ac_initial_states(const AllenCahnModel& model, const std::vector<double>& pbs) {
    std::map<double, Vector> out;
    for (double pb : pbs) out.emplace(pb, model.initial_state({0.01, 0.0, pb}));
    return out;
}

// ------------------------------------------------------------- factory

std::unique_ptr<Model> make_model(const Json& config) {
    const std::string problem = config.at("problem").get<std::string>();
    if (problem == "burgers") {
        BurgersConfig c;
        c.m = config.value("M", c.m);
        c.n = config.value("N", c.n);
        c.t_final = config.value("T", c.t_final);
        return std::make_unique<BurgersModel>(c);
    }
    if (problem == "allen_cahn") {
        AllenCahnConfig c;
        c.m = config.value("m", c.m);
        c.n = config.value("N", c.n);
        c.t_final = config.value("T", c.t_final);
        c.stabilization = config.value("stabilization", c.stabilization);
        c.seed = config.value("seed", c.seed);
        c.presim_time = config.value("presim_time", c.presim_time);
        c.presim_alpha = config.value("presim_alpha", c.presim_alpha);
        return std::make_unique<AllenCahnModel>(c);
    }
    throw InvalidArgument("unknown problem " + problem);
}

// ------------------------------------------------------------ snapshots

std::string format_params(const Params& alpha) {
    std::ostringstream os;
    os.precision(10);
    os << "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? ", " : "") << alpha[i];
    os << ")";
    return os.str();
}

Matrix SnapshotSet::slab(const DenseTensor& theta, Index grid_point) const {
    const Index m = theta.dim(0);
    const Index n = theta.dim(theta.order() - 1);
    const Index k = theta.size() / (m * n);
    require(grid_point >= 0 && grid_point < k, "grid point out of range");
    Matrix out(m, n);
    for (Index t = 0; t < n; ++t)
        out.col(t) = Eigen::Map<const Vector>(theta.data().data() + m * (grid_point + k * t), m);
    return out;
}

SnapshotSet sample_snapshots(const Model& model, const ParameterGrid& grid) {
    require(grid.dims() == model.parameter_count(), "grid has " + std::to_string(grid.dims()) + " axes, model expects " +
                                                        std::to_string(model.parameter_count()));
    const Index m = model.size();
    const Index n = model.steps();
    const Index k = grid.size();
    std::vector<Index> dims{m};
    for (Index s : grid.shape()) dims.push_back(s);
    dims.push_back(n);

    SnapshotSet set;
    set.model_config = model.config();
    set.grid = grid;
    set.phi = DenseTensor(dims);
    set.psi = DenseTensor(dims);
    set.initial = Matrix(m, k);
    set.dt = model.dt();
    auto phi = set.phi.data();
    auto psi = set.psi.data();
    for (Index g = 0; g < k; ++g) {
        const Params alpha = grid.point(g);
        Trajectory tr;
        try {
            tr = model.solve(alpha);
        } catch (const Error& e) {
            throw NumericalError("full-order run at alpha = " + format_params(alpha) + " failed: " + e.what());
        }
        set.initial.col(g) = tr.u0;
        for (Index t = 0; t < n; ++t) {
            std::copy_n(tr.u.col(t).data(), m, phi.data() + m * (g + k * t));
            std::copy_n(tr.f.col(t).data(), m, psi.data() + m * (g + k * t));
        }
    }
    return set;
}

Container to_container(const SnapshotSet& s) {
    Container c;
    c.meta = {{"kind", "snapshots"}, {"model", s.model_config}, {"grid", s.grid.to_json()}, {"dt", s.dt},
              {"dims", s.phi.dims()}};
    c.add("phi", s.phi);
    c.add("psi", s.psi);
    c.add("initial", s.initial);
    return c;
}

SnapshotSet snapshots_from_container(const Container& c) {
    if (c.meta.value("kind", std::string()) != "snapshots") throw FormatError("container does not hold snapshots");
    SnapshotSet s;
    s.model_config = c.meta.at("model");
    s.grid = ParameterGrid::from_json(c.meta.at("grid"));
    s.dt = c.meta.at("dt").get<double>();
    s.phi = c.tensor("phi");
    s.psi = c.tensor("psi");
    s.initial = c.matrix("initial");
    if (s.phi.dims() != s.psi.dims()) throw FormatError("snapshot tensors disagree in shape");
    return s;
}

}  // namespace trom
