// SPDX-License-Identifier: MIT
#include "trom/trom.hpp"

#include "trom/linalg.hpp"

#include <Eigen/LU>

#include <numeric>

namespace trom {

std::string format_name(TromFormat f) {
    switch (f) {
        case TromFormat::TT: return "TT";
        case TromFormat::Hosvd: return "HOSVD";
        case TromFormat::CP: return "CP";
    }
    return "?";
}

TromFormat parse_format(const std::string& s) {
    if (s == "TT" || s == "tt") return TromFormat::TT;
    if (s == "HOSVD" || s == "hosvd" || s == "TUCKER" || s == "tucker") return TromFormat::Hosvd;
    if (s == "CP" || s == "cp") return TromFormat::CP;
    throw InvalidArgument("unknown format " + s + " (expected TT, HOSVD or CP)");
}

std::string mode_name(HyperMode m) { return m == HyperMode::LocalLS ? "local-ls" : "local-deim"; }

HyperMode parse_mode(const std::string& s) {
    if (s == "local-ls" || s == "ls") return HyperMode::LocalLS;
    if (s == "local-deim" || s == "deim") return HyperMode::LocalDeim;
    throw InvalidArgument("unknown hyper-reduction mode " + s + " (expected local-ls or local-deim)");
}

namespace {

// Drops last-factor columns of zero norm so that W stays invertible.
void drop_degenerate_columns(TTDecomposition& tt) {
    const Vector w = tt.v.colwise().norm();
    const double wmax = w.size() ? w.maxCoeff() : 0.0;
    if (wmax == 0.0) throw NumericalError("TT last factor is zero");
    std::vector<Index> keep;
    for (Index j = 0; j < w.size(); ++j)
        if (w(j) > 1e-14 * wmax) keep.push_back(j);
    if (static_cast<Index>(keep.size()) == w.size()) return;
    Matrix v(tt.v.rows(), static_cast<Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) v.col(static_cast<Index>(j)) = tt.v.col(keep[j]);
    DenseTensor& last = tt.cores.empty() ? throw NumericalError("TT without parameter cores") : tt.cores.back();
    const Index r0 = last.dim(0);
    const Index k = last.dim(1);
    DenseTensor trimmed({r0, k, static_cast<Index>(keep.size())});
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (Index b = 0; b < k; ++b)
            for (Index a = 0; a < r0; ++a) {
                const std::vector<Index> src{a, b, keep[j]};
                trimmed.data()[static_cast<std::size_t>(a + r0 * (b + k * static_cast<Index>(j)))] = last.at(src);
            }
    last = std::move(trimmed);
    tt.v = std::move(v);
}

Decomposition decompose(const DenseTensor& t, const OfflineOptions& opts) {
    switch (opts.format) {
        case TromFormat::TT: {
            TTDecomposition tt = tt_svd(t, opts.eps);
            drop_degenerate_columns(tt);
            return tt;
        }
        case TromFormat::Hosvd: return hosvd(t, opts.eps);
        case TromFormat::CP: return cp_als(t, opts.cp_rank, opts.cp);
    }
    throw InvalidArgument("unknown format");
}

Matrix slice_matrix(const DenseTensor& core, const Vector& e) {
    const DenseTensor s = mode_vector_product(core, 1, e);
    return s.as_matrix(core.dim(0), core.dim(2));
}

std::vector<Index> middle_dims(const std::vector<Index>& dims) { return {dims.begin() + 1, dims.end() - 1}; }

void check_weights(const std::vector<Index>& dims, const std::vector<Vector>& weights) {
    require(weights.size() + 2 == dims.size(), "need one weight vector per parameter axis");
    for (std::size_t i = 0; i < weights.size(); ++i)
        require(weights[i].size() == dims[i + 1], "weight vector " + std::to_string(i + 1) + " has wrong length");
}

std::vector<Index> decomposition_dims(const Decomposition& d) {
    return std::visit([](const auto& x) { return x.dims; }, d);
}

}  // namespace

CompressedTheta CompressedTheta::from(Decomposition d) {
    CompressedTheta c;
    if (auto* tt = std::get_if<TTDecomposition>(&d)) {
        c.basis = tt->u;
        c.scaling = tt->v.colwise().norm().transpose();
        require(c.scaling.minCoeff() > 0.0, "TT last factor has a zero column");
    } else if (auto* tk = std::get_if<TuckerDecomposition>(&d)) {
        c.basis = tk->factors.front();
    } else {
        auto& cp = std::get<CPDecomposition>(d);
        const ThinQr qu = thin_qr(cp.factors.front());
        const ThinQr qv = thin_qr(cp.factors.back());
        c.basis = qu.q;
        c.cp_left = qu.r;
        c.cp_right = qv.r;
    }
    c.decomposition = std::move(d);
    return c;
}

Index CompressedTheta::online_entries() const {
    if (const auto* tt = std::get_if<TTDecomposition>(&decomposition)) {
        Index n = 0;
        for (const auto& s : tt->cores) n += s.size();
        const Index last = tt->v.cols();
        return n + last * last;
    }
    if (const auto* tk = std::get_if<TuckerDecomposition>(&decomposition)) {
        Index n = tk->core.size();
        for (std::size_t i = 1; i + 1 < tk->factors.size(); ++i) n += tk->factors[i].size();
        return n;
    }
    const auto& cp = std::get<CPDecomposition>(decomposition);
    Index n = cp.rank * (cp.rank + 1);
    for (std::size_t i = 1; i + 1 < cp.factors.size(); ++i) n += cp.factors[i].size();
    return n;
}

Matrix core_matrix(const CompressedTheta& theta, const std::vector<Vector>& weights) {
    check_weights(decomposition_dims(theta.decomposition), weights);
    if (const auto* tt = std::get_if<TTDecomposition>(&theta.decomposition)) {
        Matrix c = slice_matrix(tt->cores[0], weights[0]);
        for (std::size_t i = 1; i < tt->cores.size(); ++i) c = c * slice_matrix(tt->cores[i], weights[i]);
        return c;
    }
    if (const auto* tk = std::get_if<TuckerDecomposition>(&theta.decomposition)) {
        DenseTensor t = tk->core;
        for (std::size_t i = 0; i < weights.size(); ++i)
            t = mode_vector_product(t, 1, Vector(tk->factors[i + 1].transpose() * weights[i]));
        return t.as_matrix(t.dim(0), t.dim(1));
    }
    const auto& cp = std::get<CPDecomposition>(theta.decomposition);
    Vector s = Vector::Ones(cp.rank);
    for (std::size_t i = 0; i < weights.size(); ++i) s = s.cwiseProduct(cp.factors[i + 1].transpose() * weights[i]);
    return theta.cp_left * s.asDiagonal() * theta.cp_right.transpose();
}

Matrix scaled_core_matrix(const CompressedTheta& theta, const std::vector<Vector>& weights) {
    Matrix c = core_matrix(theta, weights);
    if (std::holds_alternative<TTDecomposition>(theta.decomposition)) c = c * theta.scaling.asDiagonal();
    return c;
}

Matrix assemble_local(const CompressedTheta& theta, const std::vector<Vector>& weights) {
    const std::vector<Index> dims = decomposition_dims(theta.decomposition);
    check_weights(dims, weights);
    DenseTensor t = reconstruct(theta.decomposition);
    for (const auto& e : weights) t = mode_vector_product(t, 1, e);
    return t.as_matrix(dims.front(), dims.back());
}

Index max_local_dim(const CompressedTheta& theta) {
    if (const auto* tt = std::get_if<TTDecomposition>(&theta.decomposition)) return std::min(tt->u.cols(), tt->v.cols());
    if (const auto* tk = std::get_if<TuckerDecomposition>(&theta.decomposition))
        return std::min(tk->core.dim(0), tk->core.dim(tk->core.order() - 1));
    return std::min(theta.cp_left.rows(), theta.cp_right.rows());
}

OfflineArtifact trom_offline(const DenseTensor& phi, const DenseTensor& psi, const ParameterGrid& grid,
                             const OfflineOptions& opts, const std::vector<SparseMatrix>& affine_terms) {
    require(phi.dims() == psi.dims(), "u- and f-snapshot tensors differ in shape");
    require(phi.order() == grid.dims() + 2, "snapshot tensor order does not match the grid");
    require(middle_dims(phi.dims()) == grid.shape(), "snapshot tensor does not match the grid shape");
    require(opts.p >= 1, "interpolation order must be positive");

    OfflineArtifact art;
    art.options = opts;
    art.grid = grid;
    art.dims = phi.dims();
    art.phi = CompressedTheta::from(decompose(phi, opts));
    art.psi = CompressedTheta::from(decompose(psi, opts));
    if (art.phi.universal_dim() == 0 || art.psi.universal_dim() == 0) throw NumericalError("compression rank collapsed to zero");

    const Matrix& y = art.psi.basis;
    art.selection = deim_select(y);
    art.pty = select_rows(y, art.selection);
    art.uty = art.phi.basis.transpose() * y;
    for (const auto& a : affine_terms) {
        require(a.rows() == phi.dim(0) && a.cols() == phi.dim(0), "affine term has wrong size");
        art.affine.push_back(art.phi.basis.transpose() * (a * art.phi.basis));
    }
    return art;
}

LocalRom local_bases(const OfflineArtifact& art, const Params& alpha, Index n_phi, Index n_psi) {
    const auto weights = interp_weights(art.grid, alpha, art.options.p);
    require(n_phi >= 1 && n_phi <= max_local_dim(art.phi),
            "n_phi = " + std::to_string(n_phi) + " outside [1, " + std::to_string(max_local_dim(art.phi)) + "]");
    require(n_psi >= 1 && n_psi <= max_local_dim(art.psi),
            "n_psi = " + std::to_string(n_psi) + " outside [1, " + std::to_string(max_local_dim(art.psi)) + "]");
    const Svd sp = thin_svd(scaled_core_matrix(art.phi, weights), false);
    const Svd sf = thin_svd(scaled_core_matrix(art.psi, weights), false);
    LocalRom local;
    local.alpha = alpha;
    local.un = sp.u.leftCols(n_phi);
    local.yn = sf.u.leftCols(n_psi);
    local.sigma_phi = sp.s;
    local.sigma_psi = sf.s;
    return local;
}

void build_reduced_system(const OfflineArtifact& art, LocalRom& local, HyperMode mode, const std::vector<double>& g) {
    require(g.size() == art.affine.size(), "got " + std::to_string(g.size()) + " affine coefficients, artifact has " +
                                               std::to_string(art.affine.size()) + " projected terms");
    const Index r = art.phi.universal_dim();
    Matrix a = Matrix::Zero(r, r);
    for (std::size_t q = 0; q < g.size(); ++q) a += g[q] * art.affine[q];
    local.a = local.un.transpose() * a * local.un;

    const Matrix b = local.un.transpose() * art.uty * local.yn;
    const Matrix pyn = art.pty * local.yn;
    local.mode = mode;
    if (mode == HyperMode::LocalLS) {
        local.q = b * pinv(pyn);
        local.rows = art.selection;
    } else {
        const SelectionIndices xi = deim_select(pyn);
        const Matrix square = select_rows(pyn, xi);
        Eigen::FullPivLU<Matrix> lu(square);
        if (!lu.isInvertible()) throw NumericalError("local DEIM system is singular");
        local.q = b * lu.inverse();
        local.rows.clear();
        for (Index i : xi) local.rows.push_back(art.selection[static_cast<std::size_t>(i)]);
    }
}

ReducedSolution trom_solve(const OfflineArtifact& art, const LocalRom& local, const Model& model, const Vector& u0) {
    require(u0.size() == art.phi.basis.rows(), "initial state has wrong length");
    require(local.a.rows() == local.un.cols(), "local model has no reduced system; call build_reduced_system first");
    const auto f = model.sample(local.rows, local.alpha);
    ReducedOperator op;
    op.a = local.a;
    op.q = local.q;
    op.lift = gather_rows(art.phi.basis, f->stencil()) * local.un;
    op.beta0 = local.un.transpose() * (art.phi.basis.transpose() * u0);
    ReducedSolution sol;
    sol.beta = integrate_reduced(op, *f, model.scheme(), model.steps());
    sol.u = art.phi.basis * (local.un * sol.beta);
    return sol;
}

ReducedSolution trom_query(const OfflineArtifact& art, const Model& model, const Params& alpha, Index n_phi, Index n_psi,
                           HyperMode mode) {
    LocalRom local = local_bases(art, alpha, n_phi, n_psi);
    build_reduced_system(art, local, mode, model.affine_coefficients(alpha));
    return trom_solve(art, local, model, model.initial_state(alpha));
}

Container to_container(const OfflineArtifact& art) {
    Container c;
    const Container phi = to_container(art.phi.decomposition);
    const Container psi = to_container(art.psi.decomposition);
    c.meta = {{"kind", "trom"},
              {"format", format_name(art.options.format)},
              {"eps", art.options.eps},
              {"cp_rank", art.options.cp_rank},
              {"cp_max_iters", art.options.cp.max_iters},
              {"cp_tol", art.options.cp.tol},
              {"cp_seed", art.options.cp.seed},
              {"p", art.options.p},
              {"grid", art.grid.to_json()},
              {"model", art.model_config},
              {"dims", art.dims},
              {"selection", art.selection},
              {"affine_terms", art.affine.size()},
              {"phi", phi.meta},
              {"psi", psi.meta}};
    for (const auto& [name, t] : phi.blobs()) c.add("phi." + name, t);
    for (const auto& [name, t] : psi.blobs()) c.add("psi." + name, t);
    c.add("uty", art.uty);
    c.add("pty", art.pty);
    for (std::size_t q = 0; q < art.affine.size(); ++q) c.add("affine_" + std::to_string(q), art.affine[q]);
    return c;
}

OfflineArtifact artifact_from_container(const Container& c) {
    if (c.meta.value("kind", std::string()) != "trom") throw FormatError("container does not hold a TROM artifact");
    try {
        OfflineArtifact art;
        art.options.format = parse_format(c.meta.at("format").get<std::string>());
        art.options.eps = c.meta.at("eps").get<double>();
        art.options.cp_rank = c.meta.at("cp_rank").get<Index>();
        art.options.cp.max_iters = c.meta.at("cp_max_iters").get<Index>();
        art.options.cp.tol = c.meta.at("cp_tol").get<double>();
        art.options.cp.seed = c.meta.at("cp_seed").get<std::uint64_t>();
        art.options.p = c.meta.at("p").get<Index>();
        art.grid = ParameterGrid::from_json(c.meta.at("grid"));
        art.model_config = c.meta.at("model");
        art.dims = c.meta.at("dims").get<std::vector<Index>>();
        art.selection = c.meta.at("selection").get<SelectionIndices>();
        for (const char* which : {"phi", "psi"}) {
            Container part;
            part.meta = c.meta.at(which);
            const std::string prefix = std::string(which) + ".";
            for (const auto& [name, t] : c.blobs())
                if (name.rfind(prefix, 0) == 0) part.add(name.substr(prefix.size()), t);
            CompressedTheta theta = CompressedTheta::from(decomposition_from_container(part));
            (std::string(which) == "phi" ? art.phi : art.psi) = std::move(theta);
        }
        art.uty = c.matrix("uty");
        art.pty = c.matrix("pty");
        const auto n_affine = c.meta.at("affine_terms").get<std::size_t>();
        for (std::size_t q = 0; q < n_affine; ++q) art.affine.push_back(c.matrix("affine_" + std::to_string(q)));
        return art;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("bad TROM artifact metadata: ") + e.what());
    }
}

}  // namespace trom
