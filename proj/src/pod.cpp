// SPDX-License-Identifier: MIT
#include "trom/pod.hpp"

#include "trom/linalg.hpp"

namespace trom {

namespace {

Index numerical_rank(const Vector& s) {
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Index r = 0;
    while (r < s.size() && s(r) > 1e-12 * s(0)) ++r;
    return r;
}

}  // namespace

Matrix gather_rows(const Matrix& m, const std::vector<Index>& idx) {
    Matrix out(static_cast<Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = m.row(idx[i]);
    return out;
}

PodRom pod_offline(const DenseTensor& phi, const DenseTensor& psi, Index n_phi, Index n_psi,
                   const std::vector<SparseMatrix>& affine_terms) {
    require(phi.order() >= 2 && psi.order() >= 2, "snapshot tensors need order >= 2");
    require(phi.dim(0) == psi.dim(0), "u- and f-snapshots disagree in space dimension");
    require(n_phi >= 1 && n_psi >= 1, "POD dimensions must be positive");
    const Svd sp = left_svd(unfold_mode1(phi));
    const Svd sf = left_svd(unfold_mode1(psi));
    if (n_phi > numerical_rank(sp.s))
        throw InvalidArgument("n_phi = " + std::to_string(n_phi) + " exceeds the u-snapshot rank " + std::to_string(numerical_rank(sp.s)));
    if (n_psi > numerical_rank(sf.s))
        throw InvalidArgument("n_psi = " + std::to_string(n_psi) + " exceeds the f-snapshot rank " + std::to_string(numerical_rank(sf.s)));

    PodRom rom;
    rom.u = sp.u.leftCols(n_phi);
    rom.y = sf.u.leftCols(n_psi);
    rom.sigma_phi = sp.s;
    rom.sigma_psi = sf.s;
    rom.selection = deim_select(rom.y);
    const Matrix pty = select_rows(rom.y, rom.selection);
    rom.nonlinear_map = (rom.u.transpose() * rom.y) * pty.partialPivLu().inverse();
    for (const auto& a : affine_terms) {
        require(a.rows() == rom.u.rows() && a.cols() == rom.u.rows(), "affine term has wrong size");
        rom.affine.push_back(rom.u.transpose() * (a * rom.u));
    }
    return rom;
}

ReducedOperator pod_operator(const PodRom& rom, const Model& model, const Params& alpha, const Vector& u0) {
    require(u0.size() == rom.u.rows(), "initial state has wrong length");
    const auto g = model.affine_coefficients(alpha);
    require(rom.affine.size() == g.size(), "POD model lacks the projected affine terms of this model");
    ReducedOperator op;
    op.a = Matrix::Zero(rom.u.cols(), rom.u.cols());
    for (std::size_t q = 0; q < g.size(); ++q) op.a += g[q] * rom.affine[q];
    op.q = rom.nonlinear_map;
    op.beta0 = rom.u.transpose() * u0;
    return op;
}

ReducedSolution pod_solve(const PodRom& rom, const Model& model, const Params& alpha, const Vector& u0) {
    ReducedOperator op = pod_operator(rom, model, alpha, u0);
    const auto f = model.sample(rom.selection, alpha);
    op.lift = gather_rows(rom.u, f->stencil());
    ReducedSolution sol;
    sol.beta = integrate_reduced(op, *f, model.scheme(), model.steps());
    sol.u = rom.u * sol.beta;
    return sol;
}

}  // namespace trom
